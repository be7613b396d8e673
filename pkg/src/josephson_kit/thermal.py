"""Canonical-ensemble occupations, equilibrium and kicked states, limits on the imbalance.

Notation: g = deltaN01 / N is the condensation degree of the thermal state,
d = deltaN_LR / N the extra left/right kick, v = V0 / DeltaE the asymmetry.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import logsumexp

from .constants import beta_delta_e
from .density import EffectiveDensityMatrixLR, fragmentation_f
from .errors import ConfigError, FirstOrderValidity, UnphysicalImbalance

SERIES_BELOW = 1e-3  # on (N+1) x
SATURATE_ABOVE = 700.0  # on (N+1) x
F_TOL = 1e-9


@dataclass(frozen=True)
class ThermalEnsemble:
    N: int
    x: float
    alpha00: float
    alpha11: float

    @property
    def deltaN01(self) -> float:
        return self.alpha00 - self.alpha11

    @property
    def condensation(self) -> float:
        return self.deltaN01 / self.N


def _alpha11(N, x):
    """Mean excited-mode occupation for weights exp(-x k), k = 0..N."""
    if x < 0:
        return N - _alpha11(N, -x)
    y = (N + 1) * x
    if y < SERIES_BELOW:
        return N / 2 - x * N * (N + 2) / 12 + x ** 3 * ((N + 1) ** 4 - 1) / 720
    first = 1.0 / np.expm1(x) if x < SATURATE_ABOVE else 0.0
    if y > SATURATE_ABOVE:
        return float(first)
    return float(first - (N + 1) / np.expm1(y))


def canonical_alphas(N, x) -> ThermalEnsemble:
    """Occupations alpha00, alpha11 of the two-mode canonical ensemble at x = beta DeltaE."""
    if int(N) != N or N < 1:
        raise ConfigError("N must be a positive integer")
    N = int(N)
    if np.isinf(x):
        a11 = 0.0 if x > 0 else float(N)
    else:
        a11 = _alpha11(N, float(x))
    return ThermalEnsemble(N, float(x), N - a11, a11)


def brute_force_alphas(N, x) -> ThermalEnsemble:
    """Direct summation over k = 0..N, for checking the closed form."""
    k = np.arange(N + 1)
    logw = -x * k
    a11 = float(np.exp(logsumexp(logw, b=k) - logsumexp(logw))) if N > 0 else 0.0
    return ThermalEnsemble(int(N), float(x), N - a11, a11)


def _warn_order(v):
    if abs(v) >= 0.15:
        warnings.warn(f"|V0/DeltaE| = {abs(v):.3g} >= 0.15: first-order result", FirstOrderValidity,
                      stacklevel=3)


def equilibrium_state(ens: ThermalEnsemble, v_ratio=0.0, exact=False) -> EffectiveDensityMatrixLR:
    """Thermal equilibrium in the left/right basis.

    The default is the first-order form in v = V0/DeltaE.  ``exact`` returns
    the transformed thermal matrix, which is a stationary state for any v.
    """
    N, dN = ens.N, ens.deltaN01
    if exact:
        s = np.sqrt(1 + v_ratio ** 2)
        Z = -v_ratio / s * dN / N
        return EffectiveDensityMatrixLR(0.5 * N * (1 + Z), 0.5 * N * (1 - Z), 0.5 * dN / s, 0.0)
    _warn_order(v_ratio)
    return EffectiveDensityMatrixLR(N / 2 - v_ratio / 2 * dN, N / 2 + v_ratio / 2 * dN, dN / 2, 0.0)


def max_kick(eq: EffectiveDensityMatrixLR) -> float:
    """Largest positive deltaN_LR keeping f <= 1 for this state."""
    N = eq.N
    room = 1 - (2 * eq.A / N) ** 2
    return N * (-eq.Z + np.sqrt(max(room, 0.0)))


def kicked_state(eq: EffectiveDensityMatrixLR, dNLR) -> EffectiveDensityMatrixLR:
    out = EffectiveDensityMatrixLR(eq.NL + dNLR / 2, eq.NR - dNLR / 2, eq.A, eq.theta)
    if fragmentation_f(out) > 1 + F_TOL:
        raise UnphysicalImbalance(
            f"deltaN_LR = {dNLR:.6g} gives f = {fragmentation_f(out):.12g} > 1; "
            f"the largest admissible deltaN_LR is {max_kick(eq):.6g}")
    return out


def kicked_Z_closed_form(ens: ThermalEnsemble, v_ratio, dNLR, t, deltaE=1.0):
    """Z(t) of the kicked equilibrium state, first order in v."""
    kicked_state(equilibrium_state(ens, v_ratio), dNLR)
    t = np.asarray(t, dtype=float)
    return -v_ratio * ens.deltaN01 / ens.N + dNLR / ens.N * np.cos(deltaE * t)


def f_equation_of_state(dN01_frac, dNLR_frac, v_ratio=0.0):
    g, d = np.asarray(dN01_frac, dtype=float), np.asarray(dNLR_frac, dtype=float)
    return np.sqrt(np.maximum(g * g + d * d - 2 * v_ratio * g * d, 0.0))


def max_imbalance(ens, v_ratio=0.0):
    """Largest deltaN_LR / N with f <= 1; ``ens`` may be an ensemble or g itself."""
    g = ens.condensation if isinstance(ens, ThermalEnsemble) else np.asarray(ens, dtype=float)
    d = v_ratio * g + np.sqrt(np.maximum(1 - g * g * (1 - v_ratio ** 2), 0.0))
    return np.minimum(d, 1.0)


# ------------------------------------------------------------- experimental limits

@dataclass(frozen=True)
class ScenarioRow:
    label: str
    T: float
    N: int
    max_imbalance: float
    min_f: float

    def to_dict(self):
        return asdict(self)


DEFAULT_SCENARIOS = [
    (label, T, N)
    for label, T in (("supersonic beam", 8.0), ("MOT", 2.5e-4),
                     ("collimated beam", 1e-6), ("BEC", 1e-8))
    for N in (10 ** 4, 10 ** 5, 10 ** 6)
]


def angular_frequency(value, convention="angular"):
    if convention == "angular":
        return float(value)
    if convention == "cyclic":
        return 2 * np.pi * float(value)
    raise ConfigError(f"unknown frequency convention {convention!r}")


def limits_table(scenarios=None, deltaE_over_hbar=1000.0, convention="angular"):
    """Rows of (label, T, N, max deltaN_LR/N, min f) for a symmetric well."""
    omega = angular_frequency(deltaE_over_hbar, convention)
    rows = []
    for label, T, N in (DEFAULT_SCENARIOS if scenarios is None else scenarios):
        if not T > 0:
            raise ConfigError(f"temperature must be positive, got {T}")
        ens = canonical_alphas(int(N), beta_delta_e(T, omega))
        rows.append(ScenarioRow(label, float(T), int(N), float(max_imbalance(ens)), ens.condensation))
    return rows


def condensation_curve(N, x_values):
    """g = deltaN01/N along a list of x = beta DeltaE values."""
    return np.array([canonical_alphas(N, x).condensation for x in np.asarray(x_values, dtype=float)])


# ------------------------------------------------------------- isolines

def isolines(f_values, v_ratio=0.0, resolution=200):
    """Contours of constant f in the (g, d) unit square.

    Returns one (M, 2) array of (g, d) points per f value.  Each contour is the
    branch d = v g + sqrt(f^2 - g^2 (1 - v^2)) followed by the reversed
    branch with the minus sign; points outside [0, 1]^2 are dropped.
    """
    out = []
    c = 1 - v_ratio ** 2
    for f in f_values:
        if not 0 < f <= 1:
            raise ConfigError(f"isoline level {f} outside (0, 1]")
        gmax = f / np.sqrt(c)
        g = gmax * np.sin(np.linspace(0, np.pi / 2, resolution))
        root = np.sqrt(np.maximum(f * f - c * g * g, 0.0))
        upper = np.column_stack([g, v_ratio * g + root])
        lower = np.column_stack([g, v_ratio * g - root])[::-1][1:]
        pts = np.vstack([upper, lower])
        inside = np.all((pts >= 0) & (pts <= 1), axis=1)
        out.append(pts[inside])
    return out


def forbidden(dN01_frac, dNLR_frac, v_ratio=0.0):
    """True where the pair (g, d) would need f > 1."""
    return f_equation_of_state(dN01_frac, dNLR_frac, v_ratio) > 1 + F_TOL
