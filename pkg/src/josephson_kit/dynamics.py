"""Numerical integration of the two-mode Josephson flows.

The effective density matrix in the left/right basis evolves under
i d(rho)/dt = [H, rho] with H = [[E_L, K], [K, E_R]] (hbar = 1).  Three
engines are offered:

``integrate_liouville``
    RK4 on the matrix itself (linear, no singular points).
``integrate_generalized``
    RK4 on (Z, theta, A); guarded steps fall back to the matrix form.
``integrate_standard``
    the pure-state special case A = (N/2) sqrt(1 - Z^2).

All engines use a fixed step no larger than T/200, T = 2 pi / sqrt(DeltaE^2 + V0^2),
and land exactly on the requested output times.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend, _kernels
from .density import EffectiveDensityMatrixLR, fragmentation_f, wrap_phase
from .errors import ConfigError, InvalidInitialState, TurningPoint
from .io import provenance, write_csv, write_json
from .wellmodes import TwoModeParams

DEFAULT_STEPS_PER_PERIOD = 4000
MIN_STEPS_PER_PERIOD = 200
F_TOL = 1e-9

CSV_COLUMNS = ("t", "Z", "theta_wrapped", "theta_unwrapped", "A", "NL", "NR", "f")


@dataclass(frozen=True)
class JosephsonState:
    Z: float
    theta: float
    time: float = 0.0

    def __post_init__(self):
        if not abs(self.Z) <= 1 + F_TOL:
            raise InvalidInitialState(f"|Z| = {abs(self.Z)} exceeds 1")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution.  ``theta`` is the continuous (unwrapped) phase."""

    params: TwoModeParams
    t: np.ndarray
    NL: np.ndarray
    NR: np.ndarray
    A: np.ndarray
    theta: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.NL + self.NR

    @property
    def Z(self):
        return (self.NL - self.NR) / self.N

    @property
    def theta_wrapped(self):
        return wrap_phase(self.theta)

    @property
    def theta_unwrapped(self):
        return self.theta

    @property
    def f(self):
        return np.hypot(self.Z, 2 * self.A / self.N)

    def __len__(self):
        return len(self.t)

    def state(self, i) -> EffectiveDensityMatrixLR:
        return EffectiveDensityMatrixLR(float(self.NL[i]), float(self.NR[i]), float(self.A[i]),
                                        float(wrap_phase(self.theta[i])))

    @property
    def samples(self):
        return [(float(self.t[i]), self.state(i)) for i in range(len(self.t))]

    def periods(self) -> float:
        s = self.params.splitting
        return (self.t[-1] - self.t[0]) * s / (2 * np.pi) if s > 0 else 0.0

    def drift(self):
        n = max(self.periods(), 1.0)
        N0 = self.N[0]
        f_drift = float(np.max(np.abs(self.f - self.f[0])))
        trace_drift = float(np.max(np.abs(self.N - N0)))
        return {"f_max_abs": f_drift, "f_per_period": f_drift / n,
                "trace_max_abs": trace_drift, "trace_per_period_rel": trace_drift / n / N0,
                "periods": self.periods()}

    def oscillation_frequency(self) -> float:
        return oscillation_frequency(self.t, self.Z)

    def columns(self):
        return np.column_stack([self.t, self.Z, self.theta_wrapped, self.theta, self.A,
                                self.NL, self.NR, self.f])

    def metadata(self):
        return {"params": self.params.to_dict(), "integrator": self.meta, "drift": self.drift()}

    def to_csv(self, path, config=None):
        return write_csv(path, CSV_COLUMNS, self.columns(), provenance(config))

    def write_sidecar(self, path, config=None):
        return write_json(path, {"provenance": provenance(config), **self.metadata()})


def oscillation_frequency(t, Z) -> float:
    """Angular frequency from upward crossings of the mid level (max+min)/2.

    Crossing times are located by linear interpolation.  Only crossings of one
    direction are used so a slightly misplaced mid level cancels out.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(Z, dtype=float)
    y = y - 0.5 * (y.max() + y.min())
    idx = np.nonzero((y[:-1] < 0) & (y[1:] >= 0))[0]
    if len(idx) < 2:
        raise ValueError("need at least two upward crossings to estimate a frequency")
    tc = t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])
    return 2 * np.pi * (len(tc) - 1) / (tc[-1] - tc[0])


def step_size(params: TwoModeParams, steps_per_period=DEFAULT_STEPS_PER_PERIOD) -> float:
    if steps_per_period < MIN_STEPS_PER_PERIOD:
        raise ConfigError(f"steps_per_period must be >= {MIN_STEPS_PER_PERIOD}")
    s = params.splitting
    return 2 * np.pi / s / steps_per_period if s > 0 else np.inf


def _check_grid(t_grid):
    t = np.asarray(t_grid, dtype=float).ravel()
    if t.size == 0 or not np.all(np.isfinite(t)):
        raise ConfigError("time grid must be non-empty and finite")
    if np.any(np.diff(t) < 0):
        raise ConfigError("time grid must be ascending")
    return t


def _check_init(init: EffectiveDensityMatrixLR):
    N = init.N
    if not N > 0 or init.A < 0 or min(init.NL, init.NR) < -F_TOL * N:
        raise InvalidInitialState(f"invalid initial state {init}")
    f = fragmentation_f(init)
    if f > 1 + F_TOL:
        raise InvalidInitialState(f"f = {f:.12g} > 1: initial matrix is not positive semidefinite")
    return f


def _meta(engine, params, steps, backend, **extra):
    return {"engine": engine, "scheme": "rk4", "order": 4, "steps_per_period": steps,
            "step": step_size(params, steps), "backend": _backend.resolve(backend), **extra}


def _from_vectors(params, t, u, meta):
    A = np.hypot(u[:, 2], u[:, 3])
    theta = np.where(A > 0, -np.arctan2(u[:, 3], u[:, 2]), 0.0)
    return Trajectory(params, t, u[:, 0].copy(), u[:, 1].copy(), A, np.unwrap(theta), meta)


def _from_polar(params, t, N, Z, theta, A, meta):
    return Trajectory(params, t, 0.5 * N * (1 + Z), 0.5 * N * (1 - Z), A, theta, meta)


def integrate_liouville(params: TwoModeParams, init: EffectiveDensityMatrixLR, t_grid,
                        steps_per_period=DEFAULT_STEPS_PER_PERIOD, backend=None,
                        verify=False) -> Trajectory:
    """RK4 on the 2x2 matrix; ``init`` is the state at ``t_grid[0]``.

    With ``verify`` the run is repeated at half the step and the largest
    difference is stored in ``meta['richardson']``.
    """
    t = _check_grid(t_grid)
    _check_init(init)
    u0 = _kernels.polar_to_vector(init.Z, init.theta, init.A, init.N)
    h = step_size(params, steps_per_period)
    u = _kernels.run_liouville(u0, params.EL, params.ER, params.K, t, h, backend)[0]
    meta = _meta("liouville", params, steps_per_period, backend)
    if verify:
        u2 = _kernels.run_liouville(u0, params.EL, params.ER, params.K, t, h / 2, backend)[0]
        meta["richardson"] = float(np.max(np.abs(u2 - u)) / init.N)
    return _from_vectors(params, t, u, meta)


def integrate_generalized_batch(params: TwoModeParams, inits, t_grid,
                                steps_per_period=DEFAULT_STEPS_PER_PERIOD, backend=None):
    """Polar-form integration of many initial states in one kernel call."""
    t = _check_grid(t_grid)
    for s in inits:
        _check_init(s)
        if not s.A > 0:
            raise InvalidInitialState("the polar form needs A(0) > 0; use integrate_liouville")
    Z0 = np.array([s.Z for s in inits])
    th0 = np.array([s.theta for s in inits])
    A0 = np.array([s.A for s in inits])
    N = np.array([s.N for s in inits])
    h = step_size(params, steps_per_period)
    Z, th, A, nmat = _kernels.run_polar(Z0, th0, A0, N, params.EL, params.ER, params.K, t, h,
                                        pure=False, backend=backend)
    out = []
    for b in range(len(inits)):
        meta = _meta("generalized", params, steps_per_period, backend, matrix_steps=int(nmat[b]))
        out.append(_from_polar(params, t, N[b], Z[b], th[b], A[b], meta))
    return out


def integrate_generalized(params: TwoModeParams, init: EffectiveDensityMatrixLR, t_grid,
                          steps_per_period=DEFAULT_STEPS_PER_PERIOD, backend=None) -> Trajectory:
    return integrate_generalized_batch(params, [init], t_grid, steps_per_period, backend)[0]


def integrate_standard_batch(params: TwoModeParams, Z0, theta0, t_grid, N=1.0,
                             steps_per_period=DEFAULT_STEPS_PER_PERIOD, backend=None):
    """Pure-state flow for arrays of (Z0, theta0); A is slaved to (N/2) sqrt(1 - Z^2)."""
    t = _check_grid(t_grid)
    Z0 = np.atleast_1d(np.asarray(Z0, dtype=float))
    if not np.all(np.abs(Z0) < 1):
        raise InvalidInitialState("every |Z0| must be < 1")
    N = np.broadcast_to(np.asarray(N, dtype=float), Z0.shape)
    h = step_size(params, steps_per_period)
    Z, th, A, nmat = _kernels.run_polar(Z0, theta0, 0.0, N, params.EL, params.ER, params.K, t, h,
                                        pure=True, backend=backend)
    return [_from_polar(params, t, float(N[b]), Z[b], th[b], A[b],
                        _meta("standard", params, steps_per_period, backend, matrix_steps=int(nmat[b])))
            for b in range(len(Z0))]


def integrate_standard(params: TwoModeParams, Z0, theta0, t_grid, N=1.0,
                       steps_per_period=DEFAULT_STEPS_PER_PERIOD, backend=None) -> Trajectory:
    if not abs(Z0) < 1:
        raise InvalidInitialState(f"|Z0| = {abs(Z0)} must be < 1")
    return integrate_standard_batch(params, [Z0], [theta0], t_grid, N, steps_per_period, backend)[0]


def integrate(engine, params, init: EffectiveDensityMatrixLR, t_grid, **kw) -> Trajectory:
    """Dispatch by engine name; the standard engine uses (Z, theta, N) of ``init``."""
    if engine == "liouville":
        return integrate_liouville(params, init, t_grid, **kw)
    if engine == "generalized":
        return integrate_generalized(params, init, t_grid, **kw)
    if engine == "standard":
        return integrate_standard(params, init.Z, init.theta, t_grid, N=init.N, **kw)
    raise ConfigError(f"unknown engine {engine!r}")


def generalized_rhs(params: TwoModeParams, N, Z, theta, A):
    """Right-hand sides (dZ/dt, dtheta/dt, dA/dt) of the generalized equations."""
    K, D = params.K, params.EL - params.ER
    s, c = np.sin(theta), np.cos(theta)
    return 4 * K * A * s / N, D - K * N * Z * c / A, -K * N * Z * s


def standard_rhs(params: TwoModeParams, Z, theta):
    r = np.sqrt(1 - Z * Z)
    K, D = params.K, params.EL - params.ER
    return 2 * K * r * np.sin(theta), D - 2 * K * Z * np.cos(theta) / r


def f_form_rhs(params: TwoModeParams, f, Z, theta):
    """(dZ/dt, dtheta/dt) of the equations written with the constant f."""
    if not abs(Z) < f - 1e-12:
        raise TurningPoint(f"|Z| = {abs(Z)} reaches f = {f}; step in matrix form instead")
    r = np.sqrt(f * f - Z * Z)
    K, D = params.K, params.EL - params.ER
    return 2 * K * r * np.sin(theta), D - 2 * K * Z * np.cos(theta) / r


def rescale_to_unit_gap(params: TwoModeParams):
    """Parameters in units of DeltaE, plus the factor converting times back (t = tau / DeltaE)."""
    g = params.deltaE
    scaled = TwoModeParams(params.EL / g, params.ER / g, params.K / g, params.V0 / g, 1.0, params.xi)
    return scaled, 1.0 / g
