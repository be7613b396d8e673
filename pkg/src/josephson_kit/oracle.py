"""Brute-force many-body check of the effective two-mode dynamics.

The N-boson state lives on the symmetric Fock basis |N - k, k> of the
asymmetric-well modes (psi_0, psi_1); index k counts excited particles.  In
that basis the Hamiltonian is diagonal, so time evolution is an exact phase
rotation and no integrator is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .density import (EffectiveDensityMatrix01, alphas_from_manybody, to_left_right,
                      to_zero_one)
from .dynamics import integrate_liouville
from .errors import ConfigError, InconsistentLift, NotNormalized
from .thermal import canonical_alphas
from .wellmodes import TwoModeParams

MAX_N = 64
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
LIFT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ManyBodyState:
    p: np.ndarray
    E0: float = 0.0
    E1: float = 1.0

    def __post_init__(self):
        p = np.asarray(self.p, dtype=complex)
        object.__setattr__(self, "p", p)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ConfigError("p must be a square matrix")
        if p.shape[0] - 1 > MAX_N:
            raise ConfigError(f"N = {p.shape[0] - 1} exceeds the oracle limit {MAX_N}")
        if np.max(np.abs(p - p.conj().T)) > HERMITIAN_TOL:
            raise ConfigError("p is not Hermitian")
        if abs(np.trace(p).real - 1) > HERMITIAN_TOL:
            raise NotNormalized(f"trace of p is {np.trace(p).real!r}")

    @property
    def N(self) -> int:
        return self.p.shape[0] - 1

    def energies(self):
        k = np.arange(self.N + 1)
        return (self.N - k) * self.E0 + k * self.E1

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.p)[0])

    def is_valid(self) -> bool:
        d = np.real(np.diag(self.p))
        return self.min_eigenvalue() >= -PSD_TOL and np.all(d >= -PSD_TOL) and np.all(d <= 1 + PSD_TOL)


def _energies(params):
    if params is None:
        return 0.0, 1.0
    return params.perturbed_energies


def evolve_manybody(state: ManyBodyState, t) -> ManyBodyState:
    E = state.energies()
    phase = np.exp(-1j * E * t)
    return ManyBodyState(state.p * np.outer(phase, phase.conj()), state.E0, state.E1)


def reduce(state: ManyBodyState) -> EffectiveDensityMatrix01:
    return alphas_from_manybody(state.p)


def thermal_manybody(N, x, params: TwoModeParams | None = None) -> ManyBodyState:
    """Diagonal Gibbs state with weights exp(-x k)."""
    if int(N) != N or not 1 <= N <= MAX_N:
        raise ConfigError(f"N must be an integer in [1, {MAX_N}]")
    k = np.arange(int(N) + 1)
    logw = -float(x) * k if np.isfinite(x) else np.where(k == 0, 0.0, -np.inf)
    w = np.exp(logw - np.max(logw))
    return ManyBodyState(np.diag(w / w.sum()), *_energies(params))


def _x_for_occupation(N, a11):
    """Inverse temperature giving excited occupation a11 (negative x means a11 > N/2)."""
    if a11 <= 0:
        return np.inf
    if a11 >= N:
        return -np.inf
    if abs(a11 - N / 2) < 1e-15 * N:
        return 0.0
    g = lambda x: canonical_alphas(N, x).alpha11 - a11  # noqa: E731
    hi = 1.0
    while np.sign(g(hi)) == np.sign(g(-hi)):
        hi *= 2
        if hi > 1e4:
            return np.inf if a11 < N / 2 else -np.inf
    return brentq(g, -hi, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def thermal_lift(rho01: EffectiveDensityMatrix01, params: TwoModeParams | None = None) -> ManyBodyState:
    """Gibbs-like diagonal plus a uniform first off-diagonal coherence band.

    The diagonal reproduces a11; the band p_{k+1,k} = lam sqrt(p_k p_{k+1}) e^{i phi}
    reproduces a01.  The result is positive semidefinite only for
    lam <= 1 / (2 cos(pi / (N + 2))); larger coherence raises InconsistentLift.
    """
    N = int(round(rho01.N))
    if abs(rho01.N - N) > LIFT_TOL * N or not 1 <= N <= MAX_N:
        raise InconsistentLift(f"trace {rho01.N} is not an integer particle number <= {MAX_N}")
    x = _x_for_occupation(N, rho01.a11)
    base = thermal_manybody(N, x)
    d = np.real(np.diag(base.p))
    k = np.arange(N)
    weights = np.sqrt((k + 1.0) * (N - k) * d[:-1] * d[1:])
    S = weights.sum()
    a01 = rho01.a01
    if abs(a01) == 0:
        lam = 0.0
    elif S == 0:
        raise InconsistentLift("coherence requested on a state with a single occupied Fock level")
    else:
        lam = abs(a01) / S
    lam_max = 1.0 / (2 * math.cos(math.pi / (N + 2)))
    if lam > lam_max * (1 + 1e-12):
        raise InconsistentLift(f"band coherence {lam:.6g} exceeds the positivity limit {lam_max:.6g}; "
                               "use product_lift for (nearly) pure states")
    band = lam * np.sqrt(d[:-1] * d[1:]) * np.exp(1j * np.angle(a01))
    p = np.diag(d).astype(complex)
    p[k + 1, k] = band
    p[k, k + 1] = band.conj()
    return ManyBodyState(p, *_energies(params))


def product_lift(rho01: EffectiveDensityMatrix01, params: TwoModeParams | None = None) -> ManyBodyState:
    """All N particles in the single-particle state that rho01 projects onto (needs f = 1)."""
    N = int(round(rho01.N))
    if abs(rho01.N - N) > LIFT_TOL * N or not 1 <= N <= MAX_N:
        raise InconsistentLift(f"trace {rho01.N} is not an integer particle number <= {MAX_N}")
    w, V = np.linalg.eigh(rho01.matrix() / N)
    if w[-1] < 1 - LIFT_TOL:
        raise InconsistentLift(f"state is mixed (largest eigenvalue {w[-1]:.12g} of rho/N); "
                               "product lift needs f = 1")
    c0, c1 = V[:, -1]
    k = np.arange(N + 1)
    amp = np.array([math.sqrt(math.comb(N, int(j))) for j in k]) * c0 ** (N - k) * c1 ** k
    amp /= np.linalg.norm(amp)
    return ManyBodyState(np.outer(amp, amp.conj()), *_energies(params))


def oracle_check(init01: EffectiveDensityMatrix01, lift: ManyBodyState, params: TwoModeParams,
                 t_grid, tol=1e-8, **integrate_kw):
    """Compare reduce(evolve(lift, t)) with the Liouville trajectory started from init01."""
    N = init01.N
    r0 = reduce(lift)
    if np.max(np.abs(r0.matrix() - init01.matrix())) > LIFT_TOL * N:
        raise InconsistentLift("the lift does not reduce to the given effective state")
    E0, E1 = params.perturbed_energies
    if abs(lift.E0 - E0) > 1e-12 * max(1, abs(E0)) or abs(lift.E1 - E1) > 1e-12 * max(1, abs(E1)):
        lift = ManyBodyState(lift.p, E0, E1)
    t = np.asarray(t_grid, dtype=float)
    traj = integrate_liouville(params, to_left_right(init01, params.xi), t, **integrate_kw)
    res = {"NL": 0.0, "NR": 0.0, "offdiag": 0.0, "Z": 0.0, "A_over_N": 0.0}
    for i, ti in enumerate(t):
        mb = to_left_right(reduce(evolve_manybody(lift, ti - t[0])), params.xi)
        m = mb.matrix()
        ref = traj.state(i).matrix()
        res["NL"] = max(res["NL"], abs(m[0, 0] - ref[0, 0]) / N)
        res["NR"] = max(res["NR"], abs(m[1, 1] - ref[1, 1]) / N)
        res["offdiag"] = max(res["offdiag"], abs(m[0, 1] - ref[0, 1]) / N)
        res["Z"] = max(res["Z"], abs(mb.Z - traj.Z[i]))
        res["A_over_N"] = max(res["A_over_N"], abs(mb.A - traj.A[i]) / N)
    worst = max(res.values())
    return {
        "N": int(round(N)),
        "samples": int(len(t)),
        "periods": traj.periods(),
        "max_residual": float(worst),
        "residuals": {k: float(v) for k, v in res.items()},
        "trajectory_drift": traj.drift(),
        "manybody_min_eigenvalue": lift.min_eigenvalue(),
        "tolerance": tol,
        "passed": bool(worst < tol),
    }


def lift_for(rho01: EffectiveDensityMatrix01, params=None, kind="auto") -> ManyBodyState:
    """Pick a lift: product for pure states, thermal band otherwise."""
    if kind == "product":
        return product_lift(rho01, params)
    if kind == "thermal":
        return thermal_lift(rho01, params)
    if kind != "auto":
        raise ConfigError(f"unknown lift {kind!r}")
    lr = to_left_right(rho01, 0.0)
    if lr.f >= 1 - LIFT_TOL:
        return product_lift(rho01, params)
    return thermal_lift(rho01, params)


__all__ = ["ManyBodyState", "evolve_manybody", "reduce", "thermal_manybody", "thermal_lift",
           "product_lift", "oracle_check", "lift_for", "to_zero_one"]
