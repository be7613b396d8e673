"""RK4 time-stepping kernels, compiled with numba or run as plain numpy.

Two flows are integrated.

* Liouville form: the real 4-vector u = (N_L, N_R, Re rho_LR, Im rho_LR)
  obeys the linear system du/dt = L u.  It is advanced with cached powers of
  the RK4 step matrix on either backend.
* Polar form: (Z, theta, A) obeys the generalized Josephson equations.  With
  ``pure`` set, A is tied to (N/2) sqrt(1 - Z^2) and only (Z, theta) are
  stepped, which is the standard pure-state flow.

Polar steps fall back to one Liouville step whenever the polar equations are
stiff or singular there (|cos theta| < 0.1, A/N < 1e-6, or |dtheta/dt| larger
than twice the Bohr frequency).  Only the polar flow has a compiled
kernel.  Both backends step exactly onto every output
time with an integer number of equal substeps per interval.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend

COS_GUARD = 0.1
A_GUARD = 1e-6
RATE_GUARD = 2.0


def liouville_generator(EL, ER, K):
    D = EL - ER
    return np.array([
        [0.0, 0.0, 0.0, -2.0 * K],
        [0.0, 0.0, 0.0, 2.0 * K],
        [0.0, 0.0, 0.0, D],
        [K, -K, -D, 0.0],
    ])


def rk4_matrix(L, h):
    """One classical RK4 step of du/dt = L u, written as a matrix."""
    hL = h * L
    M = np.eye(4)
    term = np.eye(4)
    for k in range(1, 5):
        term = term @ hL / k
        M = M + term
    return M


def substeps(times, hmax):
    dt = np.diff(np.asarray(times, dtype=float))
    if np.any(dt < 0):
        raise ValueError("time grid must be ascending")
    if not np.isfinite(hmax):
        return np.where(dt > 0, 1, 0).astype(np.int64)
    return np.ceil(dt / hmax - 1e-9).astype(np.int64)


def polar_to_vector(Z, theta, A, N):
    Z, theta, A, N = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (Z, theta, A, N)))
    return np.stack([0.5 * N * (1 + Z), 0.5 * N * (1 - Z), A * np.cos(theta), -A * np.sin(theta)], -1)


def _wrap(d):
    return d - 2 * np.pi * np.round(d / (2 * np.pi))


# ---------------------------------------------------------------- numpy path

def liouville_numpy(u0, L, times, hmax):
    u = np.array(u0, dtype=float, ndmin=2)
    nsub = substeps(times, hmax)
    out = np.empty((u.shape[0], len(times), 4))
    out[:, 0] = u
    dts = np.diff(times)
    cache = {}
    for k, (n, dt) in enumerate(zip(nsub, dts)):
        if n > 0:
            key = (int(n), float(dt))
            P = cache.get(key)
            if P is None:
                P = cache[key] = np.linalg.matrix_power(rk4_matrix(L, dt / n), int(n))
            u = u @ P.T
        out[:, k + 1] = u
    return out


def _polar_rhs_np(Z, th, A, N, D, K, pure):
    if pure:
        A = 0.5 * N * np.sqrt(np.maximum(1 - Z * Z, 0.0))
    s, c = np.sin(th), np.cos(th)
    with np.errstate(divide="ignore", invalid="ignore"):
        dth = D - K * N * Z * c / A
    return 4 * K * A * s / N, dth, -K * N * Z * s


def _needs_matrix_np(Z, th, A, N, D, K, rate_cap, pure):
    if pure:
        A = 0.5 * N * np.sqrt(np.maximum(1 - Z * Z, 0.0))
    c = np.cos(th)
    small = A < A_GUARD * N
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.abs(D - K * N * Z * c / A)
    return small | (np.abs(c) < COS_GUARD) | ~(rate <= rate_cap)


def polar_numpy(Z0, th0, A0, N, EL, ER, K, times, hmax, pure):
    """Batched guarded polar RK4; returns Z, theta (continuous), A, matrix-step counts."""
    Z = np.array(Z0, dtype=float)
    th = np.array(th0, dtype=float)
    N = np.broadcast_to(np.asarray(N, dtype=float), Z.shape).copy()
    A = 0.5 * N * np.sqrt(np.maximum(1 - Z * Z, 0.0)) if pure else np.array(A0, dtype=float)
    D = EL - ER
    rate_cap = RATE_GUARD * math.hypot(2 * K, D)
    L = liouville_generator(EL, ER, K)
    nsub = substeps(times, hmax)
    dts = np.diff(times)
    T = len(times)
    outZ, outT, outA = (np.empty(Z.shape + (T,)) for _ in range(3))
    outZ[..., 0], outT[..., 0], outA[..., 0] = Z, th, A
    nmat = np.zeros(Z.shape, dtype=np.int64)
    for k in range(T - 1):
        n = int(nsub[k])
        if n:
            h = dts[k] / n
            M = rk4_matrix(L, h)
            for _ in range(n):
                use = _needs_matrix_np(Z, th, A, N, D, K, rate_cap, pure)
                # polar RK4 (evaluated everywhere, selected below)
                k1 = _polar_rhs_np(Z, th, A, N, D, K, pure)
                k2 = _polar_rhs_np(Z + 0.5 * h * k1[0], th + 0.5 * h * k1[1], A + 0.5 * h * k1[2], N, D, K, pure)
                k3 = _polar_rhs_np(Z + 0.5 * h * k2[0], th + 0.5 * h * k2[1], A + 0.5 * h * k2[2], N, D, K, pure)
                k4 = _polar_rhs_np(Z + h * k3[0], th + h * k3[1], A + h * k3[2], N, D, K, pure)
                pZ, pT, pA = (v + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
                              for i, v in enumerate((Z, th, A)))
                if np.any(use):
                    u = polar_to_vector(Z, th, A, N) @ M.T
                    mZ = (u[..., 0] - u[..., 1]) / N
                    mA = np.hypot(u[..., 2], u[..., 3])
                    mT = th + _wrap(-np.arctan2(u[..., 3], u[..., 2]) - th)
                    Z = np.where(use, mZ, pZ)
                    th = np.where(use, mT, pT)
                    A = np.where(use, mA, pA)
                    nmat += use
                else:
                    Z, th, A = pZ, pT, pA
                if pure:
                    A = 0.5 * N * np.sqrt(np.maximum(1 - Z * Z, 0.0))
        outZ[..., k + 1], outT[..., k + 1], outA[..., k + 1] = Z, th, A
    return outZ, outT, outA, nmat


# ---------------------------------------------------------------- numba path

_NUMBA_CACHE = {}


def _build_numba():
    import os

    import numba
    from numba import njit, prange

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is often too old and only produces a warning
        numba.config.THREADING_LAYER = "workqueue"
    cap = _backend.thread_cap()
    if cap is not None:
        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))

    opts = dict(cache=True, error_model="numpy", fastmath=False)

    @njit(**opts)
    def rhs(Z, th, A, N, D, K, pure):
        if pure:
            A = 0.5 * N * math.sqrt(max(1.0 - Z * Z, 0.0))
        s = math.sin(th)
        c = math.cos(th)
        return 4.0 * K * A * s / N, D - K * N * Z * c / A, -K * N * Z * s

    @njit(**opts)
    def needs_matrix(Z, th, A, N, D, K, rate_cap, pure):
        if pure:
            A = 0.5 * N * math.sqrt(max(1.0 - Z * Z, 0.0))
        if not A >= A_GUARD * N:
            return True
        c = math.cos(th)
        if abs(c) < COS_GUARD:
            return True
        rate = abs(D - K * N * Z * c / A)
        return not rate <= rate_cap

    @njit(parallel=True, **opts)
    def polar(Z0, th0, A0, N, EL, ER, K, times, nsub, steps, pure):
        # steps[k] is the RK4 step matrix of interval k, used for guarded steps
        B = Z0.shape[0]
        T = times.shape[0]
        D = EL - ER
        rate_cap = RATE_GUARD * math.hypot(2.0 * K, D)
        outZ = np.empty((B, T))
        outT = np.empty((B, T))
        outA = np.empty((B, T))
        nmat = np.zeros(B, dtype=np.int64)
        twopi = 2.0 * math.pi
        for b in prange(B):
            Nb = N[b]
            Z = Z0[b]
            th = th0[b]
            if pure:
                A = 0.5 * Nb * math.sqrt(max(1.0 - Z * Z, 0.0))
            else:
                A = A0[b]
            outZ[b, 0] = Z
            outT[b, 0] = th
            outA[b, 0] = A
            for k in range(T - 1):
                n = nsub[k]
                if n > 0:
                    h = (times[k + 1] - times[k]) / n
                    M = steps[k]
                    for _ in range(n):
                        if needs_matrix(Z, th, A, Nb, D, K, rate_cap, pure):
                            u0 = 0.5 * Nb * (1.0 + Z)
                            u1 = 0.5 * Nb * (1.0 - Z)
                            u2 = A * math.cos(th)
                            u3 = -A * math.sin(th)
                            v0 = M[0, 0] * u0 + M[0, 1] * u1 + M[0, 2] * u2 + M[0, 3] * u3
                            v1 = M[1, 0] * u0 + M[1, 1] * u1 + M[1, 2] * u2 + M[1, 3] * u3
                            v2 = M[2, 0] * u0 + M[2, 1] * u1 + M[2, 2] * u2 + M[2, 3] * u3
                            v3 = M[3, 0] * u0 + M[3, 1] * u1 + M[3, 2] * u2 + M[3, 3] * u3
                            Z = (v0 - v1) / Nb
                            A = math.hypot(v2, v3)
                            d = -math.atan2(v3, v2) - th
                            th = th + d - twopi * np.round(d / twopi)
                            nmat[b] += 1
                        else:
                            a1, b1, c1 = rhs(Z, th, A, Nb, D, K, pure)
                            a2, b2, c2 = rhs(Z + 0.5 * h * a1, th + 0.5 * h * b1, A + 0.5 * h * c1, Nb, D, K, pure)
                            a3, b3, c3 = rhs(Z + 0.5 * h * a2, th + 0.5 * h * b2, A + 0.5 * h * c2, Nb, D, K, pure)
                            a4, b4, c4 = rhs(Z + h * a3, th + h * b3, A + h * c3, Nb, D, K, pure)
                            Z = Z + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
                            th = th + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
                            A = A + h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
                        if pure:
                            A = 0.5 * Nb * math.sqrt(max(1.0 - Z * Z, 0.0))
                outZ[b, k + 1] = Z
                outT[b, k + 1] = th
                outA[b, k + 1] = A
        return outZ, outT, outA, nmat

    return polar


def _numba_kernels():
    if "k" not in _NUMBA_CACHE:
        _NUMBA_CACHE["k"] = _build_numba()
    return _NUMBA_CACHE["k"]


# ---------------------------------------------------------------- dispatch

def run_liouville(u0, EL, ER, K, times, hmax, backend=None):
    """Integrate a batch of Liouville vectors; returns shape (B, T, 4).

    The flow is linear with constant coefficients, so n RK4 substeps are the
    n-th power of one step matrix.  Both backends share this path; a compiled
    loop over substeps would repeat the same arithmetic more slowly.
    """
    _backend.resolve(backend)
    times = np.ascontiguousarray(times, dtype=float)
    return liouville_numpy(u0, liouville_generator(EL, ER, K), times, hmax)


def run_polar(Z0, th0, A0, N, EL, ER, K, times, hmax, pure=False, backend=None):
    """Integrate a batch in polar form; returns Z, theta, A of shape (B, T) and matrix-step counts."""
    backend = _backend.resolve(backend)
    times = np.ascontiguousarray(times, dtype=float)
    Z0 = np.atleast_1d(np.asarray(Z0, dtype=float))
    th0 = np.broadcast_to(np.asarray(th0, dtype=float), Z0.shape).copy()
    A0 = np.broadcast_to(np.asarray(A0, dtype=float), Z0.shape).copy()
    N = np.broadcast_to(np.asarray(N, dtype=float), Z0.shape).copy()
    if backend == "numpy":
        return polar_numpy(Z0, th0, A0, N, float(EL), float(ER), float(K), times, hmax, bool(pure))
    polar = _numba_kernels()
    nsub = substeps(times, hmax)
    L = liouville_generator(EL, ER, K)
    steps = np.array([rk4_matrix(L, dt / n) if n else np.eye(4)
                      for n, dt in zip(nsub, np.diff(times))]).reshape(-1, 4, 4)
    return polar(Z0, th0, A0, N, float(EL), float(ER), float(K), times, nsub, steps, bool(pure))
