import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from josephson_kit import analytic as an
from josephson_kit import dynamics
from josephson_kit.density import EffectiveDensityMatrixLR
from josephson_kit.errors import DomainError, FirstOrderValidity, NonInvertible
from josephson_kit.wellmodes import TwoModeParams


def test_symmetric_constants_example():
    N = 10.0
    init = EffectiveDensityMatrixLR.from_polar(N, 0.2, 0.0, 0.4 * N)
    c = an.constants_from_init(init, TwoModeParams.from_gap(1.0))
    assert c.drho_s == pytest.approx(0.2)
    assert c.eB == pytest.approx(0.4 * N)
    assert c.phi0s == pytest.approx(np.pi / 2)
    assert c.f == pytest.approx(init.f)


@pytest.mark.parametrize("deltaE", [1.0, 2.3])
def test_symmetric_solution_matches_integration(deltaE):
    p = TwoModeParams.from_gap(deltaE)
    N = 40.0
    init = EffectiveDensityMatrixLR.from_polar(N, -0.3, 0.6, 0.35 * N)
    c = an.constants_from_init(init, p)
    t = np.linspace(0, 10 * p.period, 501)
    Z, th, A = an.analytic_generalized_symmetric(c, t)
    tr = dynamics.integrate_generalized(p, init, t)
    assert np.max(np.abs(Z - tr.Z)) < 1e-9
    assert np.max(np.abs(th - tr.theta)) < 1e-9
    assert np.max(np.abs(A - tr.A)) / N < 1e-9


@settings(max_examples=40)
@given(st.floats(-0.9, 0.9), st.floats(0.05, 0.99), st.floats(-1.4, 1.4), st.floats(1, 1e3))
def test_constants_reproduce_initial_state(z, frac, th, N):
    init = EffectiveDensityMatrixLR.from_polar(N, z, th, 0.5 * N * frac * np.sqrt(1 - z * z))
    for v in (0.0, 0.05):
        p = TwoModeParams.from_gap(1.0, v)
        c = an.constants_from_init(init, p)
        Z, theta, A = (an.analytic_generalized_symmetric(c, 0.0) if v == 0
                       else an.analytic_generalized_asymmetric(c, p, 0.0))
        assert float(Z) == pytest.approx(init.Z, abs=1e-9)
        assert float(theta) == pytest.approx(init.theta, abs=1e-9)
        assert float(A) == pytest.approx(init.A, rel=1e-9)


def test_constants_need_positive_cosine():
    init = EffectiveDensityMatrixLR.from_polar(1.0, 0.1, 2.0, 0.3)
    with pytest.raises(NonInvertible):
        an.constants_from_init(init, TwoModeParams.from_gap(1.0))


def test_standard_exact_solution_matches_integration():
    p = TwoModeParams.from_gap(1.0, 0.2)
    c = an.standard_constants_from_init(p, 0.3, 0.4)
    t = np.linspace(0, 5 * p.period, 501)
    Z, th = an.analytic_standard(c, t)
    assert Z[0] == pytest.approx(0.3, abs=1e-12)
    assert th[0] == pytest.approx(0.4, abs=1e-9)
    tr = dynamics.integrate_standard(p, 0.3, 0.4, t)
    assert np.max(np.abs(Z - tr.Z)) < 1e-9
    assert np.max(np.abs(np.sin(th) - np.sin(tr.theta))) < 1e-7


def test_standard_symmetric_reduces_to_sine():
    c = an.StandardSolutionConstants(0.0, 0.4, 0.3)
    t = np.linspace(0, 10, 50)
    Z, _ = an.analytic_standard(c, t)
    assert Z == pytest.approx(0.4 * np.sin(0.3 - t), abs=1e-14)
    Zl, _ = an.analytic_standard_linearized(c, t)
    assert Zl == pytest.approx(Z, abs=1e-14)


def test_standard_offset_first_order():
    # the oscillation centre sits at -v sqrt(1 - drho^2)
    v = 0.01
    c = an.StandardSolutionConstants(-v, 0.3, 0.0)
    assert c.offset == pytest.approx(-v * np.sqrt(1 - 0.09), rel=1e-3)


@pytest.mark.parametrize("v", [0.02, 0.04])
def test_linearized_error_is_second_order(v):
    res = []
    for vv in (v, v / 2):
        p = TwoModeParams.from_gap(1.0, vv)
        c = an.standard_constants_from_init(p, 0.3, 0.4)
        t = np.linspace(0, 3 * p.period, 301)
        Zl, _ = an.analytic_standard_linearized(c, t)
        Ze, _ = an.analytic_standard(c, t)
        res.append(np.max(np.abs(Zl - Ze)))
    assert 3.4 < res[0] / res[1] < 4.6


def test_pure_mapping_reproduces_standard_solution():
    v, N = 0.02, 8.0
    p = TwoModeParams.from_gap(1.0, v)
    cs = an.StandardSolutionConstants(-v, 0.5, 0.7, c2=0.1, delta_alpha=-v * 0.3)
    cg = an.generalized_from_standard(cs, N)
    assert cg.f == pytest.approx(1.0)
    t = np.linspace(0, 3 * p.period, 301)
    Zs, ths = an.analytic_standard_linearized(cs, t)
    Zg, thg, Ag = an.analytic_generalized_asymmetric(cg, p, t)
    assert np.max(np.abs(Zs - Zg)) < 20 * v * v
    assert np.max(np.abs(np.tan(ths) - np.tan(thg))) < 50 * v * v


def test_generalized_first_order_convergence():
    res = []
    for v in (0.04, 0.02):
        p = TwoModeParams.from_gap(1.0, v)
        init = EffectiveDensityMatrixLR.from_polar(10.0, 0.25, 0.5, 3.0)
        t = np.linspace(0, 3 * p.period, 301)
        Z, _, _ = an.analytic_generalized_asymmetric(an.constants_from_init(init, p), p, t)
        res.append(np.max(np.abs(Z - dynamics.integrate_liouville(p, init, t).Z)))
    assert 3.4 < res[0] / res[1] < 4.6


def test_first_order_warning_and_domain_errors():
    p = TwoModeParams.from_gap(1.0, 0.2)
    init = EffectiveDensityMatrixLR.from_polar(1.0, 0.1, 0.1, 0.3)
    with pytest.warns(FirstOrderValidity):
        an.constants_from_init(init, p)
    with pytest.raises(DomainError):
        an.StandardSolutionConstants(0.0, 1.5, 0.0)
    with pytest.raises(DomainError):
        an.generalized_from_standard(an.StandardSolutionConstants(0.0, 1.0, 0.0), 1.0)
    with pytest.raises(DomainError):
        an.analytic_standard_linearized(an.StandardSolutionConstants(0.0, 0.0, 0.0), [0.0])


def test_as_states():
    states = an.as_states([0.1, 0.2], [0.0, 0.1], [2.0, 2.0], 10.0)
    assert [s.Z for s in states] == pytest.approx([0.1, 0.2])
    assert all(s.N == pytest.approx(10.0) for s in states)


def test_from_pq():
    c = an.GeneralizedSolutionConstants.from_pq(0.0, 0.2, 0.1, 5.0, 1.0, 0.0, -2.0, 0.3)
    assert c.c1 == pytest.approx(2.0)
    assert c.delta_phi0 == pytest.approx(-np.pi / 2)
    assert c.phi0a == pytest.approx(np.pi - 0.1 - np.pi / 2)
