import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from josephson_kit import oracle, thermal
from josephson_kit.density import (EffectiveDensityMatrix01, EffectiveDensityMatrixLR, to_left_right,
                                   to_zero_one)
from josephson_kit.errors import ConfigError, InconsistentLift, NotNormalized
from josephson_kit.wellmodes import TwoModeParams


def random_manybody(rng, N):
    X = rng.normal(size=(N + 1, N + 1)) + 1j * rng.normal(size=(N + 1, N + 1))
    p = X @ X.conj().T
    return oracle.ManyBodyState(p / np.trace(p).real, 0.3, 1.4)


@settings(max_examples=25)
@given(st.integers(1, 12), st.floats(-20, 20), st.integers(0, 2 ** 31))
def test_evolution_is_unitary(N, t, seed):
    s = random_manybody(np.random.default_rng(seed), N)
    e = oracle.evolve_manybody(s, t)
    assert np.trace(e.p).real == pytest.approx(1)
    assert np.linalg.eigvalsh(e.p) == pytest.approx(np.linalg.eigvalsh(s.p), abs=1e-12)
    assert oracle.reduce(e).a00 == pytest.approx(oracle.reduce(s).a00)


@given(st.integers(1, 40), st.floats(-5, 5))
def test_thermal_state_reduces_to_canonical(N, x):
    r = oracle.reduce(oracle.thermal_manybody(N, x))
    assert r.a11 == pytest.approx(thermal.canonical_alphas(N, x).alpha11, abs=1e-10 * N)
    assert r.a01 == 0


def test_diagonal_lift_is_static_equilibrium():
    p = TwoModeParams.from_gap(1.0, 0.05)
    ens = thermal.canonical_alphas(6, 1.0)
    mb = oracle.thermal_manybody(6, 1.0, p)
    eq = thermal.equilibrium_state(ens, p.v_ratio, exact=True)
    for t in (0.0, 3.7, 12.0):
        lr = to_left_right(oracle.reduce(oracle.evolve_manybody(mb, t)), p.xi)
        assert lr.matrix() == pytest.approx(eq.matrix(), abs=1e-12)


@settings(max_examples=30)
@given(st.integers(2, 20), st.floats(-3, 3), st.floats(0, 1), st.floats(-np.pi, np.pi))
def test_thermal_lift_reduces(N, x, frac, phase):
    ens = thermal.canonical_alphas(N, x)
    lam_max = 1 / (2 * np.cos(np.pi / (N + 2)))
    base = oracle.thermal_manybody(N, x)
    d = np.real(np.diag(base.p))
    k = np.arange(N)
    S = np.sum(np.sqrt((k + 1.0) * (N - k) * d[:-1] * d[1:]))
    a01 = frac * lam_max * S * np.exp(1j * phase)
    r01 = EffectiveDensityMatrix01(ens.alpha00, ens.alpha11, a01, N)
    lift = oracle.thermal_lift(r01)
    assert lift.is_valid()
    assert oracle.reduce(lift).matrix() == pytest.approx(r01.matrix(), abs=1e-9 * N)


def test_thermal_lift_rejects_excess_coherence():
    r01 = EffectiveDensityMatrix01(3.0, 1.0, 1.6, 4.0)
    with pytest.raises(InconsistentLift, match="positivity"):
        oracle.thermal_lift(r01)
    with pytest.raises(InconsistentLift):
        oracle.thermal_lift(EffectiveDensityMatrix01(2.0, 0.5, 0.0, 2.5))


@given(st.integers(1, 30), st.floats(-0.95, 0.95), st.floats(-np.pi, np.pi), st.floats(0.01, 1.5))
def test_product_lift_reduces(N, Z, th, xi):
    s = EffectiveDensityMatrixLR.from_polar(N, Z, th, 0.5 * N * np.sqrt(1 - Z * Z))
    r01 = to_zero_one(s, xi)
    lift = oracle.product_lift(r01)
    assert lift.min_eigenvalue() > -1e-12
    assert oracle.reduce(lift).matrix() == pytest.approx(r01.matrix(), abs=1e-9 * N)


def test_product_lift_rejects_mixed():
    with pytest.raises(InconsistentLift, match="mixed"):
        oracle.product_lift(EffectiveDensityMatrix01(3.0, 1.0, 0.0, 4.0))


@pytest.mark.parametrize("N", [2, 5])
def test_oracle_check_passes(N):
    p = TwoModeParams.from_gap(1.0, 0.05)
    t = np.linspace(0, 5 * p.period, 101)
    eq = thermal.equilibrium_state(thermal.canonical_alphas(N, 0.7), p.v_ratio, exact=True)
    kicked = thermal.kicked_state(eq, 0.3 * thermal.max_kick(eq))
    r01 = to_zero_one(kicked, p.xi)
    rep = oracle.oracle_check(r01, oracle.lift_for(r01, p), p, t)
    assert rep["passed"] and rep["max_residual"] < 1e-8
    assert rep["N"] == N and rep["samples"] == 101

    pure = EffectiveDensityMatrixLR.from_polar(N, -0.5, 2.0, 0.5 * N * np.sqrt(0.75))
    r01 = to_zero_one(pure, p.xi)
    rep = oracle.oracle_check(r01, oracle.lift_for(r01, p), p, t)
    assert rep["passed"]


def test_oracle_check_rejects_foreign_lift():
    p = TwoModeParams.from_gap(1.0)
    r01 = EffectiveDensityMatrix01(2.0, 1.0, 0.0, 3.0)
    with pytest.raises(InconsistentLift):
        oracle.oracle_check(r01, oracle.thermal_manybody(3, 5.0), p, [0.0, 1.0])


def test_manybody_validation():
    with pytest.raises(NotNormalized):
        oracle.ManyBodyState(np.eye(3))
    with pytest.raises(ConfigError):
        oracle.ManyBodyState(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(ConfigError):
        oracle.thermal_manybody(oracle.MAX_N + 1, 1.0)
    with pytest.raises(ConfigError):
        oracle.lift_for(EffectiveDensityMatrix01(1.0, 0.0, 0.0, 1.0), kind="random")
