"""Single-particle modes of a 1D double well and the two-mode junction parameters.

The symmetric potential is discretized with second-order central differences
on a uniform grid of interior nodes (Dirichlet walls one spacing beyond either
end), and the two lowest eigenpairs are taken from the symmetric tridiagonal
Hamiltonian.  Natural units with hbar = 1 are used throughout, so the kinetic
prefactor is 1 / (2 m).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    GridTooCoarse,
    NonSymmetricPotential,
    NotADoubleWell,
    RegimeWarning,
    StepTooLarge,
)

SYMMETRY_RTOL = 1e-12
UNIFORM_RTOL = 1e-12
MAX_EPSILON = 0.25
MAX_STEP_RATIO = 0.1
WARN_STEP_RATIO = 0.01
MAX_GAP_RATIO = 0.1
MIN_POINTS_PER_WAVELENGTH = 8


@dataclass(frozen=True)
class PotentialSpec:
    """Potential sampled on a uniform grid.

    ``length_unit`` and ``energy_unit`` are SI scale factors carried along for
    reporting only; all arithmetic happens in the grid's own units.
    """

    grid: np.ndarray
    values: np.ndarray
    mass: float = 1.0
    step_V0: float = 0.0
    length_unit: float = 1.0
    energy_unit: float = 1.0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 5:
            raise ValueError("grid and values must be 1D arrays of equal length >= 5")
        steps = np.diff(grid)
        if np.any(steps <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.max(np.abs(steps - steps.mean())) > UNIFORM_RTOL * max(1.0, abs(steps.mean())) * 10:
            raise ValueError("grid spacing is not uniform")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.step_V0 < 0:
            raise ValueError("step_V0 must be non-negative")

    @property
    def dx(self) -> float:
        return (self.grid[-1] - self.grid[0]) / (self.grid.size - 1)

    @property
    def kinetic(self) -> float:
        """hbar^2 / (2 m) in natural units."""
        return 0.5 / self.mass

    def check_symmetric(self):
        scale = max(np.max(np.abs(self.values)), np.max(np.abs(self.grid)), 1.0)
        if np.max(np.abs(self.grid + self.grid[::-1])) > SYMMETRY_RTOL * scale:
            raise NonSymmetricPotential("grid is not symmetric about x = 0")
        if self.grid.size % 2 != 1:
            raise NonSymmetricPotential("symmetric grid must contain x = 0 (odd length)")
        if np.max(np.abs(self.values - self.values[::-1])) > SYMMETRY_RTOL * scale:
            raise NonSymmetricPotential("V(x) != V(-x) on the grid")

    def step_profile(self) -> np.ndarray:
        """Indicator of x < 0, with the x = 0 node weighted 1/2."""
        return side_weights(self.grid)[0] / self.dx

    def with_step(self, V0: float) -> "PotentialSpec":
        return PotentialSpec(self.grid, self.values, self.mass, V0,
                             self.length_unit, self.energy_unit)

    def total_values(self) -> np.ndarray:
        return self.values + self.step_V0 * self.step_profile()

    def subsampled(self) -> "PotentialSpec":
        """Every other node, keeping x = 0 on the grid (spacing doubles)."""
        centre = self.grid.size // 2
        start = centre % 2
        return PotentialSpec(self.grid[start::2], self.values[start::2], self.mass,
                             self.step_V0, self.length_unit, self.energy_unit)


def side_weights(grid):
    """Quadrature weights of the left (x < 0) and right (x > 0) half-lines.

    The node at x = 0 contributes half its weight to each side so that the
    two side integrals add up to the full one exactly.
    """
    grid = np.asarray(grid, dtype=float)
    dx = (grid[-1] - grid[0]) / (grid.size - 1)
    at_zero = np.abs(grid) < 1e-9 * dx
    left = np.where(grid < 0, dx, 0.0)
    left[at_zero] = 0.5 * dx
    right = dx - left
    return left, right


def inner(f, g, dx):
    return dx * np.dot(f, g)


def hamiltonian_bands(spec: PotentialSpec, with_step=True):
    """Diagonal and off-diagonal of the finite-difference Hamiltonian."""
    c = spec.kinetic / spec.dx**2
    values = spec.total_values() if with_step else spec.values
    diag = 2.0 * c + values
    off = np.full(spec.grid.size - 1, -c)
    return diag, off


def apply_hamiltonian(spec: PotentialSpec, psi, with_step=True):
    diag, off = hamiltonian_bands(spec, with_step)
    out = diag * psi
    out[:-1] += off * psi[1:]
    out[1:] += off * psi[:-1]
    return out


def lowest_eigenpairs(spec: PotentialSpec, count=2, with_step=True):
    diag, off = hamiltonian_bands(spec, with_step)
    energies, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    return energies, vectors / np.sqrt(spec.dx)


@dataclass(frozen=True)
class ModePair:
    """Ground and first excited mode of the symmetric well."""

    spec: PotentialSpec
    phi0: np.ndarray
    phi1: np.ndarray
    E0: float
    E1: float
    convergence_estimate: float = float("nan")
    notes: tuple = field(default=())

    @property
    def grid(self):
        return self.spec.grid

    @property
    def dx(self):
        return self.spec.dx

    @property
    def deltaE(self) -> float:
        return self.E1 - self.E0

    @property
    def Emean(self) -> float:
        return 0.5 * (self.E0 + self.E1)

    @property
    def overlapL(self) -> float:
        return side_overlap(self)[0]

    @property
    def epsilon(self) -> float:
        return side_overlap(self)[1]

    @property
    def double_well_regime(self) -> bool:
        """True when DeltaE is small against the mean mode energy above the floor."""
        return self.deltaE / (self.Emean - self.spec.values.min()) <= MAX_GAP_RATIO


def solve_lowest_modes(spec: PotentialSpec, check_convergence=True, conv_tol=1e-6) -> ModePair:
    spec.check_symmetric()
    (E0, E1), vecs = lowest_eigenpairs(spec, with_step=False)
    phi0, phi1 = vecs[:, 0].copy(), vecs[:, 1].copy()
    if phi0.sum() < 0:
        phi0 = -phi0
    wl, _ = side_weights(spec.grid)
    if np.dot(wl * phi0, phi1) < 0:
        phi1 = -phi1

    k = np.sqrt(2.0 * spec.mass * max(E1 - spec.values.min(), 0.0))
    if k > 0 and (2 * np.pi / k) / spec.dx < MIN_POINTS_PER_WAVELENGTH:
        raise GridTooCoarse(
            f"only {(2 * np.pi / k) / spec.dx:.1f} grid points per de Broglie wavelength at E1"
        )

    estimate = float("nan")
    if check_convergence:
        coarse = spec.subsampled()
        (c0, c1), _ = lowest_eigenpairs(coarse, with_step=False)
        # Richardson: the fine-grid error of a second-order scheme is a third of the difference
        estimate = abs((E1 - E0) - (c1 - c0)) / 3.0 / (E1 - E0)
        if estimate > conv_tol:
            raise GridTooCoarse(
                f"DeltaE not converged: estimated relative error {estimate:.2e} > {conv_tol:.0e}"
            )

    modes = ModePair(spec, phi0, phi1, float(E0), float(E1), estimate)
    if modes.epsilon >= MAX_EPSILON:
        raise NotADoubleWell(f"epsilon = {modes.epsilon:.4f} >= {MAX_EPSILON}")
    if not modes.double_well_regime:
        warnings.warn(
            f"DeltaE/Emean = {modes.deltaE / (modes.Emean - spec.values.min()):.3f} exceeds "
            f"{MAX_GAP_RATIO}; the two-mode picture is marginal",
            RegimeWarning,
            stacklevel=2,
        )
    return modes


def side_overlap(modes: ModePair):
    """Left-side overlap <phi0|phi1>_L and epsilon = 1/2 - overlap."""
    wl, _ = side_weights(modes.grid)
    overlap = float(np.dot(wl * modes.phi0, modes.phi1))
    return overlap, 0.5 - overlap


def side_norms(psi, grid):
    """(<psi|psi>_L, <psi|psi>_R)."""
    wl, wr = side_weights(grid)
    psi2 = np.abs(psi) ** 2
    return float(np.dot(wl, psi2)), float(np.dot(wr, psi2))


def left_right_states(modes: ModePair):
    s = 1.0 / np.sqrt(2.0)
    return s * (modes.phi0 + modes.phi1), s * (modes.phi0 - modes.phi1)


@dataclass(frozen=True)
class PerturbedModes:
    psi0: np.ndarray
    psi1: np.ndarray
    Etilde0: float
    Etilde1: float
    normC: float
    mixing: float


def splitting(deltaE, V0):
    """Level spacing sqrt(DeltaE^2 + V0^2) of the stepped well."""
    return float(np.hypot(deltaE, V0))


def _check_step(modes: ModePair, V0):
    ratio = abs(V0) / (modes.Emean - modes.spec.values.min())
    if ratio >= MAX_STEP_RATIO:
        raise StepTooLarge(f"V0/E = {ratio:.3g} >= {MAX_STEP_RATIO}")
    if ratio > WARN_STEP_RATIO:
        warnings.warn(f"V0/E = {ratio:.3g} is not small; first-order corrections degrade",
                      RegimeWarning, stacklevel=3)


def step_mixing(deltaE, V0):
    """Admixture V0 / (DeltaE + sqrt(DeltaE^2 + V0^2)) and normalization C."""
    s = splitting(deltaE, V0)
    mixing = V0 / (deltaE + s)
    norm = np.sqrt(0.5 * (1.0 + deltaE / s))
    return mixing, norm


def perturbed_modes(modes: ModePair, V0: float) -> PerturbedModes:
    _check_step(modes, V0)
    r, C = step_mixing(modes.deltaE, V0)
    s = splitting(modes.deltaE, V0)
    psi0 = C * (modes.phi0 - r * modes.phi1)
    psi1 = C * (modes.phi1 + r * modes.phi0)
    E = modes.Emean
    return PerturbedModes(psi0, psi1, E + 0.5 * V0 - 0.5 * s, E + 0.5 * V0 + 0.5 * s, C, r)


def mixing_angle(deltaE: float, V0: float) -> float:
    if deltaE <= 0:
        raise ValueError("deltaE must be positive")
    return float(np.arcsin(np.sqrt(0.5 * (1.0 + V0 / splitting(deltaE, V0)))))


@dataclass(frozen=True)
class TwoModeParams:
    """Left/right junction parameters in natural units (hbar = 1)."""

    EL: float
    ER: float
    K: float
    V0: float
    deltaE: float
    xi: float

    @classmethod
    def from_gap(cls, deltaE, V0=0.0, E=0.0):
        return cls(E + V0, E, -0.5 * deltaE, V0, deltaE, mixing_angle(deltaE, V0))

    @property
    def v_ratio(self) -> float:
        return self.V0 / self.deltaE

    @property
    def splitting(self) -> float:
        """Bohr frequency of the junction, sqrt(DeltaE^2 + V0^2)."""
        return float(np.hypot(2.0 * self.K, self.EL - self.ER))

    @property
    def period(self) -> float:
        return 2 * np.pi / self.splitting

    @property
    def perturbed_energies(self):
        E = 0.5 * (self.EL + self.ER)
        s = self.splitting
        return E - 0.5 * s, E + 0.5 * s

    def hamiltonian_lr(self) -> np.ndarray:
        return np.array([[self.EL, self.K], [self.K, self.ER]], dtype=float)

    def to_dict(self):
        return {"EL": self.EL, "ER": self.ER, "K": self.K, "V0": self.V0,
                "deltaE": self.deltaE, "xi": self.xi}


def two_mode_params(modes: ModePair, V0: float = 0.0) -> TwoModeParams:
    E = modes.Emean
    return TwoModeParams(E + V0, E, -0.5 * modes.deltaE, V0, modes.deltaE,
                         mixing_angle(modes.deltaE, V0))


def coupled_residual(modes: ModePair, V0: float):
    """Grid norms of H psi_L - E_L psi_L - K psi_R and the mirrored right-well residual."""
    params = two_mode_params(modes, V0)
    spec = modes.spec.with_step(V0)
    phiL, phiR = left_right_states(modes)
    rl = apply_hamiltonian(spec, phiL) - params.EL * phiL - params.K * phiR
    rr = apply_hamiltonian(spec, phiR) - params.ER * phiR - params.K * phiL
    dx = modes.dx
    return float(np.sqrt(inner(rl, rl, dx))), float(np.sqrt(inner(rr, rr, dx)))


def direct_step_energies(modes: ModePair, V0: float):
    """Two lowest eigenvalues of the grid Hamiltonian with the step switched on."""
    energies, _ = lowest_eigenpairs(modes.spec.with_step(V0), with_step=True)
    return float(energies[0]), float(energies[1])
