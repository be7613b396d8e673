"""Built-in double-well families and potential file readers.

Grids hold the interior nodes of [-L, L]; the wavefunction vanishes on the
walls at +-L.  Node counts n with n + 1 divisible by 4 keep x = 0 on both the
grid and its every-other-node subsample with the walls in place.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .wellmodes import PotentialSpec


def interior_grid(half_width, n):
    dx = 2.0 * half_width / (n + 1)
    x = -half_width + dx * np.arange(1, n + 1)
    x[n // 2] = 0.0
    return x


def harmonic_gaussian_barrier(barrier_height=8.0, barrier_width=0.5, omega=1.0, mass=1.0,
                              half_width=None, n=20479):
    """Harmonic trap 1/2 m w^2 x^2 with a central Gaussian barrier."""
    if half_width is None:
        # the ground state decays like exp(-m w x^2 / 2); 7 oscillator lengths past the barrier
        half_width = 7.0 / np.sqrt(mass * omega) + 2.0 * barrier_width
    x = interior_grid(half_width, n)
    V = 0.5 * mass * omega**2 * x**2 + barrier_height * np.exp(-0.5 * (x / barrier_width) ** 2)
    return PotentialSpec(x, V, mass=mass)


def square_double_well(barrier_height=200.0, barrier_half_width=0.1, half_width=1.0,
                       mass=1.0, n=20479):
    """Hard-walled box of half-width L with a rectangular central barrier.

    Nodes landing exactly on a barrier edge take the mean of the inside and
    outside values, which keeps the scheme second order for the jump.
    """
    x = interior_grid(half_width, n)
    dx = 2.0 * half_width / (n + 1)
    edge = np.isclose(np.abs(x), barrier_half_width, rtol=0, atol=1e-9 * dx)
    V = np.where(np.abs(x) < barrier_half_width, barrier_height, 0.0)
    V[edge] = 0.5 * barrier_height
    return PotentialSpec(x, V, mass=mass)


def infinite_square_well(half_width=1.0, mass=1.0, n=1279):
    x = interior_grid(half_width, n)
    return PotentialSpec(x, np.zeros_like(x), mass=mass)


FAMILIES = {
    "gaussian": harmonic_gaussian_barrier,
    "square": square_double_well,
    "box": infinite_square_well,
}


def build_family(name, **params):
    try:
        factory = FAMILIES[name]
    except KeyError:
        raise ConfigError(f"unknown potential family {name!r}; choose from {sorted(FAMILIES)}")
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for family {name!r}: {exc}") from None


def load_potential(path) -> PotentialSpec:
    """Read a potential from JSON or CSV.

    JSON: ``{"x": [...], "V": [...], "mass": 1.0, "length_unit": .., "energy_unit": ..}``.
    CSV: optional ``# key = value`` header lines, then columns ``x,V``.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"potential file {path} not found")
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
        try:
            x, V = data["x"], data["V"]
        except KeyError as exc:
            raise ConfigError(f"potential JSON lacks field {exc}") from None
        meta = {k: float(data[k]) for k in ("mass", "length_unit", "energy_unit") if k in data}
    else:
        meta, rows = {}, []
        with path.open() as fh:
            lines = [ln for ln in fh if ln.strip()]
        body = []
        for ln in lines:
            if ln.lstrip().startswith("#"):
                key, _, value = ln.lstrip("# \t").partition("=")
                if value.strip():
                    meta[key.strip()] = float(value)
            else:
                body.append(ln)
        reader = csv.reader(body)
        header = next(reader)
        if [h.strip() for h in header[:2]] != ["x", "V"]:
            raise ConfigError("potential CSV needs columns 'x,V'")
        try:
            rows = [(float(a), float(b)) for a, b, *_ in reader]
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if not rows:
            raise ConfigError(f"{path} holds no data rows")
        x, V = zip(*rows)
    try:
        return PotentialSpec(np.array(x), np.array(V), **meta)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid potential in {path}: {exc}") from None
