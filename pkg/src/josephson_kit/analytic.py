"""Closed-form solutions of the standard and generalized Josephson equations.

Phase conventions
-----------------
Standard (pure-state) solutions follow ``psi_t = phi0s - DeltaE t`` and the
dimensionless asymmetry ``delta = (E_L - E_R) / 2K = -V0 / DeltaE``.  The extra
phase offset ``delta_alpha`` is stored already multiplied by delta.

Generalized solutions store ``phi0s`` in the symmetric form
``Z = drho_s sin(DeltaE t + phi0s)``.  The first-order asymmetric corrections
are written in terms of ``psi_t = phi_D - DeltaE t`` with ``phi_D = pi - phi0s``,
which is the same zeroth-order orbit.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .density import EffectiveDensityMatrixLR
from .errors import DomainError, FirstOrderValidity, NonInvertible
from .wellmodes import TwoModeParams

FIRST_ORDER_LIMIT = 0.15
DOMAIN_TOL = 1e-9


def _first_order_check(v):
    if abs(v) >= FIRST_ORDER_LIMIT:
        warnings.warn(f"|V0/DeltaE| = {abs(v):.3g} >= {FIRST_ORDER_LIMIT}: first-order formulas "
                      "are outside their range", FirstOrderValidity, stacklevel=3)


def _sign(x):
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


# ------------------------------------------------------------- pure state

@dataclass(frozen=True)
class StandardSolutionConstants:
    delta: float
    drho_s: float
    phi0s: float
    c2: float = 0.0
    delta_alpha: float = 0.0
    deltaE: float = 1.0

    def __post_init__(self):
        if not 0 <= self.drho_s <= 1:
            raise DomainError(f"drho_s = {self.drho_s} outside [0, 1]")
        if self.discriminant < -DOMAIN_TOL:
            raise DomainError("negative square-root argument in the pure-state solution")

    @property
    def root(self):
        return np.sqrt(1 - self.drho_s ** 2)

    @property
    def discriminant(self):
        d, c2, r = self.delta, self.c2, np.sqrt(1 - self.drho_s ** 2)
        return self.drho_s ** 2 - 2 * c2 * d * r - (c2 * d) ** 2

    # The three combinations of the separated equation dZ / sqrt(1 + bZ - gZ^2) = a dt.
    @property
    def alpha_bar(self):
        return -self.deltaE * np.sqrt(max(self.discriminant, 0.0))

    @property
    def beta_bar(self):
        return 2 * self.delta * (self.root + self.c2 * self.delta) / self.discriminant

    @property
    def gamma_bar(self):
        return (1 + self.delta ** 2) / self.discriminant

    @property
    def offset(self):
        return self.delta * (self.root + self.c2 * self.delta) / (1 + self.delta ** 2)

    @property
    def amplitude(self):
        d, c2 = self.delta, self.c2
        rad = self.drho_s ** 2 + d * (d - c2 ** 2 * d - 2 * c2 * self.root)
        return np.sqrt(max(rad, 0.0)) / (1 + d * d)

    @property
    def alpha_tilde(self):
        """Phase constant per unit asymmetry (delta_alpha / delta)."""
        return self.delta_alpha / self.delta if self.delta != 0 else 0.0


def analytic_standard(consts: StandardSolutionConstants, t):
    """Exact pure-state Z(t), theta(t)."""
    t = np.asarray(t, dtype=float)
    d = consts.delta
    phase = -consts.deltaE * np.sqrt(1 + d * d) * t + consts.phi0s + consts.delta_alpha
    Z = consts.offset + consts.amplitude * np.sin(phase)
    arg = (consts.root + consts.c2 * d - d * Z) / np.sqrt(1 - Z * Z)
    if np.any(np.abs(arg) > 1 + DOMAIN_TOL):
        raise DomainError(f"arccos argument {np.max(np.abs(arg)):.12g} outside [-1, 1]")
    # sin(theta) has the sign of dZ/dt / 2K, i.e. of amplitude * cos(phase)
    theta = _sign(np.cos(phase)) * np.arccos(np.clip(arg, -1, 1))
    return Z, theta


def analytic_standard_linearized(consts: StandardSolutionConstants, t):
    """First order in delta = -V0/DeltaE."""
    t = np.asarray(t, dtype=float)
    v = -consts.delta
    dr, r = consts.drho_s, consts.root
    if dr == 0:
        raise DomainError("the linearized solution needs drho_s > 0")
    psi = consts.phi0s - consts.deltaE * t
    s, c = np.sin(psi), np.cos(psi)
    Z = -v * r + (dr + consts.c2 * v * r / dr) * s + consts.delta_alpha * dr * c
    den = 1 - (dr * s) ** 2
    at = consts.alpha_tilde
    arg = r / np.sqrt(den)
    if np.any(arg > 1 + DOMAIN_TOL):
        raise DomainError("arccos argument outside [-1, 1]")
    theta0 = _sign(dr * c) * np.arccos(np.clip(arg, -1, 1))
    theta = theta0 - v * (dr ** 3 * s * c - consts.c2 * c - at * dr ** 2 * r * s) / (dr * den)
    return Z, theta


def standard_constants_from_init(params: TwoModeParams, Z0, theta0) -> StandardSolutionConstants:
    """Constants with c2 = delta_alpha = 0 whose exact solution passes through (Z0, theta0) at t=0.

    When sqrt(1 - drho_s^2) would leave [0, 1], the surplus is moved into c2.
    """
    if not abs(Z0) < 1:
        raise DomainError("|Z0| must be < 1")
    d = (params.EL - params.ER) / (2 * params.K)
    q = np.cos(theta0) * np.sqrt(1 - Z0 ** 2) + d * Z0
    r = min(max(q, 0.0), 1.0)
    c2 = 0.0
    if r != q:
        if d == 0:
            raise DomainError("cos(theta0) < 0 is outside the symmetric pure-state parametrization")
        c2 = (q - r) / d
    base = StandardSolutionConstants(d, float(np.sqrt(1 - r * r)), 0.0, c2, 0.0, params.deltaE)
    amp = base.amplitude
    if amp == 0:
        return base
    sphi = np.clip((Z0 - base.offset) / amp, -1, 1)
    cphi = np.sqrt(1 - sphi ** 2) * (1.0 if np.sin(theta0) >= 0 else -1.0)
    return StandardSolutionConstants(d, base.drho_s, float(np.arctan2(sphi, cphi)), c2, 0.0,
                                     params.deltaE)


# ------------------------------------------------------------- generalized

@dataclass(frozen=True)
class GeneralizedSolutionConstants:
    B_s: float
    drho_s: float
    phi0s: float
    N: float
    deltaE: float = 1.0
    c1: float = 0.0
    delta_phi0: float = 0.0
    delta_B: float = 0.0

    @property
    def eB(self):
        return np.exp(self.B_s)

    @property
    def a(self):
        """N e^{-B_s} drho_s / 2, the amplitude of tan(theta)."""
        return self.N * np.exp(-self.B_s) * self.drho_s / 2

    @property
    def phi_D(self):
        return np.pi - self.phi0s

    @property
    def phi0a(self):
        return self.phi_D + self.delta_phi0

    @property
    def f(self):
        return float(np.hypot(2 * self.eB / self.N, self.drho_s))

    def psi(self, t):
        return self.phi_D - self.deltaE * np.asarray(t, dtype=float)

    def zeta(self, t):
        return np.sqrt(1 + (self.a * np.cos(self.psi(t))) ** 2)

    @classmethod
    def from_pq(cls, B_s, drho_s, phi0s, N, deltaE, p, q, delta_B):
        """Build from p = c1 cos(delta_phi0), q = c1 sin(delta_phi0)."""
        return cls(B_s, drho_s, phi0s, N, deltaE, float(np.hypot(p, q)), float(np.arctan2(q, p)),
                   delta_B)


def analytic_generalized_symmetric(consts: GeneralizedSolutionConstants, t=None, *, N=None, deltaE=None):
    """Exact symmetric solution; returns arrays (Z, theta, A)."""
    N = consts.N if N is None else N
    deltaE = consts.deltaE if deltaE is None else deltaE
    t = np.asarray(0.0 if t is None else t, dtype=float)
    ph = deltaE * t + consts.phi0s
    Z = consts.drho_s * np.sin(ph)
    theta = -np.arctan(N * np.exp(-consts.B_s) * consts.drho_s / 2 * np.cos(ph))
    A = consts.eB / np.cos(theta)
    return Z, theta, A


def _first_order_terms(c: GeneralizedSolutionConstants, v, t, p, q, dB):
    """(theta, A, Z) from the first-order asymmetric solution for given (p, q, delta_B)."""
    N, eB, dr, a = c.N, c.eB, c.drho_s, c.a
    psi = c.psi(t)
    s, co = np.sin(psi), np.cos(psi)
    zeta = np.sqrt(1 + (a * co) ** 2)
    h = v / 2
    sin_shift = p * s + q * co  # c1 sin(psi + delta_phi0)
    theta = np.arctan(a * co) + h / zeta ** 2 * (sin_shift - a ** 2 * np.sin(2 * psi))
    A = (eB * zeta + h * N * dr * zeta * (s - np.sin(c.phi_D))
         - h / eB ** 2 / zeta * (dr * N / 2) ** 3 * co * np.sin(2 * psi)
         + h * dr * N / (2 * zeta) * co * sin_shift
         + h * eB * zeta * dB)
    Z = ((dr - h / eB / N * ((dr * N) ** 2 * np.sin(c.phi_D) - 2 * q * eB ** 2 - eB * dB * dr * N)) * s
         - 2 * v * eB / N - v * eB / N * p * co)
    return theta, A, Z


def analytic_generalized_asymmetric(consts: GeneralizedSolutionConstants, params: TwoModeParams, t):
    """First-order (in V0/DeltaE) solution; returns arrays (Z, theta, A)."""
    v = params.V0 / params.deltaE
    _first_order_check(v)
    p = consts.c1 * np.cos(consts.delta_phi0)
    q = consts.c1 * np.sin(consts.delta_phi0)
    theta, A, Z = _first_order_terms(consts, v, t, p, q, consts.delta_B)
    return Z, theta, A


def as_states(Z, theta, A, N):
    return [EffectiveDensityMatrixLR.from_polar(N, z, th, a) for z, th, a in
            zip(np.atleast_1d(Z), np.atleast_1d(theta), np.atleast_1d(A))]


def constants_from_init(init: EffectiveDensityMatrixLR, params: TwoModeParams) -> GeneralizedSolutionConstants:
    """Integration constants matching ``init`` at t = 0.

    The symmetric part is inverted exactly.  For V0 != 0 the first-order
    constants (c1, delta_phi0, delta_B) enter the solution linearly, so they
    are fixed by one 3x3 linear solve that makes the solution reproduce
    ``init`` at t = 0.
    """
    N, A0, th0, Z0 = init.N, init.A, init.theta, init.Z
    if not np.cos(th0) > 0 or not A0 > 0:
        raise NonInvertible("cos(theta(0)) <= 0 or A(0) = 0; re-anchor t = 0 where cos(theta) > 0")
    eB = A0 * np.cos(th0)
    y = Z0
    x = -2 * A0 * np.sin(th0) / N
    drho = float(np.hypot(x, y))
    phi = float(np.arctan2(y, x)) if drho > 0 else np.pi / 2
    base = GeneralizedSolutionConstants(float(np.log(eB)), drho, phi, N, params.deltaE)
    v = params.V0 / params.deltaE
    if v == 0:
        return base
    _first_order_check(v)
    target = np.array([th0, A0, Z0])
    f0 = np.array(_first_order_terms(base, v, 0.0, 0.0, 0.0, 0.0))
    M = np.empty((3, 3))
    for j, e in enumerate(np.eye(3)):
        M[:, j] = np.array(_first_order_terms(base, v, 0.0, *e)) - f0
    if abs(np.linalg.det(M)) < 1e-14 * np.abs(M).max() ** 3:
        raise NonInvertible("first-order constants are not determined by this initial state")
    p, q, dB = np.linalg.solve(M, target - f0)
    return GeneralizedSolutionConstants.from_pq(base.B_s, drho, phi, N, params.deltaE, p, q, dB)


def generalized_from_standard(consts: StandardSolutionConstants, N) -> GeneralizedSolutionConstants:
    """Generalized constants that reproduce a pure-state solution to first order."""
    dr, r = consts.drho_s, consts.root
    if not 0 < dr < 1:
        raise DomainError("the pure-state mapping needs 0 < drho_s < 1")
    at = consts.alpha_tilde
    p = 2 * dr * at / r
    q = 2 * consts.c2 / (dr * r * r)
    dB = 2 * (dr * np.sin(consts.phi0s) - consts.c2) / r
    eB = N * r / 2
    return GeneralizedSolutionConstants.from_pq(float(np.log(eB)), dr, np.pi - consts.phi0s, N,
                                                consts.deltaE, p, q, dB)
