import os
import subprocess
import sys

import numpy as np
import pytest

from josephson_kit import _backend, _kernels, dynamics
from josephson_kit.acceptance import random_admissible_states
from josephson_kit.density import EffectiveDensityMatrixLR
from josephson_kit.wellmodes import TwoModeParams

needs_numba = pytest.mark.skipif(not _backend.HAVE_NUMBA, reason="numba not available")


@needs_numba
def test_polar_backends_agree():
    p = TwoModeParams.from_gap(1.0, 0.1)
    states = random_admissible_states(np.random.default_rng(7), 25, N=50.0)
    # include states that cross the cos(theta) = 0 guard and nearly pure ones
    states.append(EffectiveDensityMatrixLR.from_polar(50.0, 0.1, np.pi / 2, 10.0))
    states.append(EffectiveDensityMatrixLR.from_polar(50.0, 0.6, 0.3, 25.0 * np.sqrt(0.64) - 1e-9))
    t = np.linspace(0, 4 * p.period, 81)
    a = dynamics.integrate_generalized_batch(p, states, t, backend="numba")
    b = dynamics.integrate_generalized_batch(p, states, t, backend="numpy")
    for x, y in zip(a, b):
        assert np.max(np.abs(x.Z - y.Z)) < 1e-12
        assert np.max(np.abs(x.theta - y.theta)) < 1e-10
        assert x.meta["matrix_steps"] == y.meta["matrix_steps"]


@needs_numba
def test_standard_and_liouville_backends_agree():
    p = TwoModeParams.from_gap(1.0, -0.07)
    t = np.linspace(0, 3 * p.period, 61)
    a = dynamics.integrate_standard_batch(p, [0.2, -0.9], [0.4, 3.0], t, backend="numba")
    b = dynamics.integrate_standard_batch(p, [0.2, -0.9], [0.4, 3.0], t, backend="numpy")
    for x, y in zip(a, b):
        assert np.max(np.abs(x.Z - y.Z)) < 1e-12
    init = EffectiveDensityMatrixLR.from_polar(3.0, 0.2, 1.0, 0.9)
    x = dynamics.integrate_liouville(p, init, t, backend="numba")
    y = dynamics.integrate_liouville(p, init, t, backend="numpy")
    assert np.array_equal(x.Z, y.Z)


def test_substeps_land_on_grid():
    t = np.array([0.0, 0.3, 0.3, 1.0, 2.5])
    n = _kernels.substeps(t, 0.1)
    dt = np.diff(t)
    assert np.all(n >= 0)
    assert np.all(dt[n > 0] / n[n > 0] <= 0.1 + 1e-15)


def test_resolve():
    assert _backend.resolve("numpy") == "numpy"
    with pytest.raises(ValueError):
        _backend.resolve("cuda")


def test_env_flag_forces_numpy():
    env = {**os.environ, _backend.DISABLE_ENV: "1"}
    code = ("from josephson_kit import _backend, dynamics\n"
            "from josephson_kit.wellmodes import TwoModeParams\n"
            "import numpy as np\n"
            "p = TwoModeParams.from_gap(1.0)\n"
            "tr = dynamics.integrate_standard(p, 0.2, 0.0, np.linspace(0, 1, 3))\n"
            "print(_backend.default_backend(), tr.meta['backend'])\n")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert res.stdout.split() == ["numpy", "numpy"]
