import numpy as np
import pytest
from hypothesis import given, strategies as st

from josephson_kit.density import (EffectiveDensityMatrix01, EffectiveDensityMatrixLR,
                                   alphas_from_manybody, eigen_decompose, fragmentation_f, is_pure,
                                   to_left_right, to_zero_one, wrap_phase)
from josephson_kit.errors import DegenerateState, NotNormalized

angles = st.floats(-np.pi, np.pi)
xis = st.floats(0.01, np.pi / 2 - 0.01)


@st.composite
def lr_states(draw, N=None):
    N = draw(st.floats(0.5, 1e4)) if N is None else N
    r = draw(st.floats(0, 1))
    phi = draw(st.floats(0, np.pi))
    Z, a = r * np.cos(phi), r * np.sin(phi)
    return EffectiveDensityMatrixLR.from_polar(N, Z, draw(angles), a * N / 2)


def test_thermal_diagonal_at_symmetric_angle():
    r = EffectiveDensityMatrix01(70.0, 30.0, 0j, 100.0)
    lr = to_left_right(r, np.pi / 4)
    assert lr.NL == pytest.approx(50) and lr.NR == pytest.approx(50)
    assert lr.A == pytest.approx(20.0)
    assert lr.theta == pytest.approx(0.0)
    assert lr.f == pytest.approx(0.4)


def test_pure_state_phase_convention():
    wL, wR = 0.6, 0.8 * np.exp(0.7j)
    m = 10 * np.outer([wL, wR], np.conj([wL, wR]))
    lr = EffectiveDensityMatrixLR.from_matrix(m)
    assert lr.theta == pytest.approx(0.7)
    assert lr.Z == pytest.approx(0.36 - 0.64)
    assert lr.f == pytest.approx(1.0)
    assert is_pure(lr)


@given(lr_states(), xis)
def test_basis_round_trip(s, xi):
    back = to_left_right(to_zero_one(s, xi), xi)
    assert back.matrix() == pytest.approx(s.matrix(), abs=1e-9 * s.N)


@given(lr_states(), xis)
def test_f_is_basis_independent(s, xi):
    w = np.linalg.eigvalsh(to_zero_one(s, xi).matrix())
    assert (w[1] - w[0]) / s.N == pytest.approx(s.f, abs=1e-9)
    assert w[::-1] == pytest.approx(s.eigenvalues(), abs=1e-9 * s.N)


@given(lr_states())
def test_admissible_states_are_positive(s):
    assert s.is_valid()
    assert np.linalg.eigvalsh(s.matrix())[0] >= -1e-9 * s.N


@given(st.floats(0.5, 100), st.floats(-0.99, 0.99), angles)
def test_pure_states_have_unit_f(N, Z, th):
    s = EffectiveDensityMatrixLR.from_polar(N, Z, th, 0.5 * N * np.sqrt(1 - Z * Z))
    assert fragmentation_f(s) == pytest.approx(1.0, abs=1e-12)


def test_invalid_when_f_above_one():
    s = EffectiveDensityMatrixLR.from_polar(1.0, 0.8, 0.0, 0.45)
    assert s.f > 1 and not s.is_valid()


@given(lr_states())
def test_eigen_decompose(s):
    if s.f < 1e-6:
        return
    values, vectors = eigen_decompose(s)
    m = s.matrix()
    for lam, v in zip(values, vectors):
        assert np.linalg.norm(v) == pytest.approx(1)
        assert m @ v == pytest.approx(lam * v, abs=1e-7 * s.N)
    assert abs(np.vdot(vectors[0], vectors[1])) < 1e-9


def test_eigen_decompose_edge_cases():
    with pytest.warns(DegenerateState):
        eigen_decompose(EffectiveDensityMatrixLR(5.0, 5.0, 0.0, 0.0))
    values, (v0, v1) = eigen_decompose(EffectiveDensityMatrixLR(2.0, 8.0, 0.0, 0.0))
    assert values == pytest.approx((8.0, 2.0))
    assert abs(v0[1]) == 1


def test_thermal_eigenvectors_are_energy_modes():
    xi = 0.7
    r = EffectiveDensityMatrix01(80.0, 20.0, 0j, 100.0)
    values, (v0, v1) = eigen_decompose(to_left_right(r, xi))
    assert values == pytest.approx((80, 20))
    # psi_0 = cos(xi) psi_L + sin(xi) psi_R
    assert abs(np.vdot(v0, [np.cos(xi), np.sin(xi)])) == pytest.approx(1)


def test_alphas_for_two_particles():
    c0, c1 = 0.8, 0.6 * np.exp(0.3j)
    amp = np.array([c0 * c0, np.sqrt(2) * c0 * c1, c1 * c1])
    r = alphas_from_manybody(np.outer(amp, amp.conj()))
    assert r.a00 == pytest.approx(2 * 0.64)
    assert r.a11 == pytest.approx(2 * 0.36)
    assert r.a01 == pytest.approx(2 * c1 * np.conj(c0))
    assert r.N == 2
    fock = alphas_from_manybody(np.diag([0.0, 1.0, 0.0]))
    assert (fock.a00, fock.a11, fock.a01) == (1.0, 1.0, 0j)
    with pytest.raises(NotNormalized):
        alphas_from_manybody(np.eye(3))


@given(lr_states(), xis)
def test_dict_round_trips(s, xi):
    assert EffectiveDensityMatrixLR.from_dict(s.to_dict()) == s
    r = to_zero_one(s, xi)
    assert EffectiveDensityMatrix01.from_dict(r.to_dict()) == r


def test_from_dict_checks_trace():
    with pytest.raises(ValueError):
        EffectiveDensityMatrixLR.from_dict({"nL": 1, "nR": 1, "A": 0.5, "theta": 0, "N": 3})


@given(st.floats(-100, 100))
def test_wrap_phase_range(th):
    w = float(wrap_phase(th))
    assert -np.pi < w <= np.pi
    assert np.cos(w) == pytest.approx(np.cos(th), abs=1e-12)
    assert np.sin(w) == pytest.approx(np.sin(th), abs=1e-12)
