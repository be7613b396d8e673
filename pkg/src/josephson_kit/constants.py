"""Physical constants used at the SI boundary.

Everything inside the package works in natural units with hbar = 1; these
values only enter when temperatures in kelvin or frequencies in rad/s are
converted to the dimensionless ratio beta * DeltaE.
"""
from scipy import constants as _c

HBAR = _c.hbar  # J s, exact in the 2019 SI (1.054571817e-34)
K_B = _c.k  # J / K, exact (1.380649e-23)

assert abs(HBAR - 1.054571817e-34) < 1e-43
assert K_B == 1.380649e-23


def beta_delta_e(temperature, delta_e_over_hbar):
    """Dimensionless x = DeltaE / (k_B T) for DeltaE/hbar in rad/s and T in kelvin."""
    return HBAR * delta_e_over_hbar / (K_B * temperature)
