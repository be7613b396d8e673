"""Effective (one-body) density matrices in the energy and left/right bases.

Conventions
-----------
``EffectiveDensityMatrix01`` stores alpha_01 = <psi_1| rho_e |psi_0>, the
coefficient that multiplies <psi_0|O|psi_1> in the one-body expectation
value, so its matrix is ``[[a00, conj(a01)], [a01, a11]]``.

``EffectiveDensityMatrixLR`` stores the left/right element as
rho[L, R] = A exp(-i theta).  With this sign a pure state built from
amplitudes w_L, w_R has theta = arg(w_R) - arg(w_L), and theta obeys the
Josephson equations hbar dZ/dt = 2K sqrt(1 - Z^2) sin(theta), etc.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateState, NotNormalized

TRACE_RTOL = 1e-9


def wrap_phase(theta):
    """Map angles to (-pi, pi]."""
    wrapped = np.angle(np.exp(1j * np.asarray(theta, dtype=float)))
    return np.where(wrapped <= -np.pi, wrapped + 2 * np.pi, wrapped)


@dataclass(frozen=True)
class EffectiveDensityMatrix01:
    a00: float
    a11: float
    a01: complex
    N: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.a00, np.conj(self.a01)], [self.a01, self.a11]], dtype=complex)

    @classmethod
    def from_matrix(cls, m, N=None):
        m = np.asarray(m)
        trace = float(np.real(m[0, 0] + m[1, 1]))
        return cls(float(m[0, 0].real), float(m[1, 1].real), complex(m[1, 0]),
                   trace if N is None else float(N))

    def is_valid(self, rtol=TRACE_RTOL) -> bool:
        N = self.N
        return (abs(self.a00 + self.a11 - N) <= rtol * N
                and self.a00 >= -rtol * N and self.a11 >= -rtol * N
                and self.a00 * self.a11 - abs(self.a01) ** 2 >= -rtol * N**2)

    def to_dict(self):
        return {"a00": self.a00, "a11": self.a11, "a01_re": self.a01.real,
                "a01_im": self.a01.imag, "N": self.N}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["a00"]), float(d["a11"]), complex(d["a01_re"], d["a01_im"]),
                   float(d["N"]))


@dataclass(frozen=True)
class EffectiveDensityMatrixLR:
    NL: float
    NR: float
    A: float
    theta: float

    @classmethod
    def from_polar(cls, N, Z, theta, A):
        return cls(0.5 * N * (1 + Z), 0.5 * N * (1 - Z), float(A), float(wrap_phase(theta)))

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m)
        off = complex(m[0, 1])
        A = abs(off)
        theta = float(wrap_phase(-np.angle(off))) if A > 0 else 0.0
        return cls(float(m[0, 0].real), float(m[1, 1].real), A, theta)

    def matrix(self) -> np.ndarray:
        off = self.A * np.exp(-1j * self.theta)
        return np.array([[self.NL, off], [np.conj(off), self.NR]], dtype=complex)

    @property
    def N(self) -> float:
        return self.NL + self.NR

    @property
    def Z(self) -> float:
        return (self.NL - self.NR) / self.N

    @property
    def f(self) -> float:
        return fragmentation_f(self)

    def eigenvalues(self):
        N, f = self.N, self.f
        return 0.5 * N * (1 + f), 0.5 * N * (1 - f)

    def is_valid(self, rtol=TRACE_RTOL) -> bool:
        return self.A >= 0 and self.f <= 1 + rtol and min(self.NL, self.NR) >= -rtol * self.N

    def to_dict(self):
        return {"nL": self.NL, "nR": self.NR, "A": self.A, "theta": self.theta, "N": self.N}

    @classmethod
    def from_dict(cls, d):
        state = cls(float(d["nL"]), float(d["nR"]), float(d["A"]), float(d["theta"]))
        if "N" in d and abs(state.N - float(d["N"])) > TRACE_RTOL * abs(state.N):
            raise ValueError("nL + nR disagrees with N")
        return state


def basis_transform(xi) -> np.ndarray:
    """Rows are psi_L, psi_R in the (psi_0, psi_1) basis; the matrix is its own inverse."""
    c, s = np.cos(xi), np.sin(xi)
    return np.array([[c, s], [s, -c]])


def to_left_right(rho01: EffectiveDensityMatrix01, xi) -> EffectiveDensityMatrixLR:
    T = basis_transform(xi)
    return EffectiveDensityMatrixLR.from_matrix(T @ rho01.matrix() @ T)


def to_zero_one(rhoLR: EffectiveDensityMatrixLR, xi) -> EffectiveDensityMatrix01:
    T = basis_transform(xi)
    return EffectiveDensityMatrix01.from_matrix(T @ rhoLR.matrix() @ T, N=rhoLR.N)


def fragmentation_f(rhoLR: EffectiveDensityMatrixLR) -> float:
    N = rhoLR.N
    return float(np.hypot(rhoLR.Z, 2.0 * rhoLR.A / N))


def is_pure(rhoLR: EffectiveDensityMatrixLR, tol=1e-9) -> bool:
    return fragmentation_f(rhoLR) >= 1 - tol


def eigen_decompose(rhoLR: EffectiveDensityMatrixLR):
    """Eigenvalues N(1 +- f)/2 and the matching orthonormal eigenvectors.

    Vectors are given as (c_L, c_R) coefficient pairs in the left/right basis.
    """
    N, Z, A, theta = rhoLR.N, rhoLR.Z, rhoLR.A, rhoLR.theta
    f = fragmentation_f(rhoLR)
    values = (0.5 * N * (1 + f), 0.5 * N * (1 - f))
    left, right = np.array([1.0 + 0j, 0.0]), np.array([0.0 + 0j, 1.0])
    if f < 1e-12:
        warnings.warn("f = 0: every orthonormal pair diagonalizes rho", DegenerateState,
                      stacklevel=2)
        return values, (left, right)
    if A <= 1e-12 * N:
        return values, ((left, right) if Z > 0 else (right, left))

    def vector(sign):
        c = -N * np.exp(1j * theta) / (2 * A) * (Z - sign * f)
        return np.array([1.0, c]) / np.sqrt(1 + abs(c) ** 2)

    return values, (vector(+1), vector(-1))


def alphas_from_manybody(p) -> EffectiveDensityMatrix01:
    """One-body coefficients alpha_ij of an (N+1)x(N+1) Fock-basis density matrix.

    Index k of ``p`` counts particles in the excited mode psi_1.
    """
    p = np.asarray(getattr(p, "p", p))
    N = p.shape[0] - 1
    trace = np.trace(p).real
    if abs(trace - 1.0) > TRACE_RTOL:
        raise NotNormalized(f"trace of p is {trace!r}, expected 1")
    k = np.arange(N + 1)
    diag = np.real(np.diag(p))
    a00 = float(np.dot(N - k, diag))
    a11 = float(np.dot(k, diag))
    band = np.diagonal(p, offset=-1)  # p[k+1, k]
    a01 = complex(np.dot(np.sqrt((k[:-1] + 1.0) * (N - k[:-1])), band))
    return EffectiveDensityMatrix01(a00, a11, a01, float(N))
