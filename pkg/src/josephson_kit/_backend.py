"""Select the compiled (numba) or pure-numpy implementation of the hot loops.

Set ``JOSEPHSON_KIT_DISABLE_NUMBA=1`` to force the numpy path.  When numba is
missing the numpy path is used silently.  ``JOSEPHSON_KIT_THREADS`` caps the
number of threads used by batched kernels.
"""
from __future__ import annotations

import os

DISABLE_ENV = "JOSEPHSON_KIT_DISABLE_NUMBA"
THREADS_ENV = "JOSEPHSON_KIT_THREADS"


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


try:
    if _flag(DISABLE_ENV):
        raise ImportError("numba disabled by environment")
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def thread_cap():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return None
    try:
        n = int(value)
    except ValueError:
        return None
    return n if n > 0 else None


def default_backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def resolve(backend=None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend
