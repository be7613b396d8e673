import json
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from josephson_kit import potentials as pot
from josephson_kit import wellmodes as wm
from josephson_kit.errors import (ConfigError, GridTooCoarse, NonSymmetricPotential, RegimeWarning,
                                  StepTooLarge)


def test_box_overlap_matches_sine_integral():
    # cos(pi x / 2) and sin(pi x) on [-1, 1] overlap by 4 / (3 pi) on one side
    with pytest.warns(RegimeWarning):
        m = wm.solve_lowest_modes(pot.infinite_square_well(n=5119), check_convergence=False)
    assert m.overlapL == pytest.approx(4 / (3 * np.pi), abs=1e-6)
    assert m.epsilon == pytest.approx(0.5 - 4 / (3 * np.pi), abs=1e-6)
    assert m.deltaE == pytest.approx(0.5 * (np.pi ** 2 - np.pi ** 2 / 4), rel=1e-5)


def test_epsilon_shrinks_with_barrier_height():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        eps = [wm.solve_lowest_modes(pot.harmonic_gaussian_barrier(h, n=5119),
                                     check_convergence=False).epsilon
               for h in (4.0, 6.0, 8.0, 10.0)]
    assert all(a > b for a, b in zip(eps, eps[1:]))
    assert 0 < eps[-1] < 1e-3


def test_side_probabilities(gaussian_modes):
    m = gaussian_modes
    phiL, phiR = wm.left_right_states(m)
    nL, nR = wm.side_norms(phiL, m.grid)
    assert nL == pytest.approx(1 - m.epsilon, abs=1e-10)
    assert nR == pytest.approx(m.epsilon, abs=1e-10)
    assert wm.side_norms(phiR, m.grid)[0] == pytest.approx(m.epsilon, abs=1e-10)


def test_modes_normalized_and_orthogonal(gaussian_modes):
    m = gaussian_modes
    assert wm.inner(m.phi0, m.phi0, m.dx) == pytest.approx(1, abs=1e-12)
    assert wm.inner(m.phi1, m.phi1, m.dx) == pytest.approx(1, abs=1e-12)
    assert abs(wm.inner(m.phi0, m.phi1, m.dx)) < 1e-12
    assert m.overlapL > 0 and m.phi0.sum() > 0


def test_asymmetric_potential_rejected():
    spec = pot.harmonic_gaussian_barrier(n=1279)
    tilted = wm.PotentialSpec(spec.grid, spec.values + 0.01 * spec.grid)
    with pytest.raises(NonSymmetricPotential):
        wm.solve_lowest_modes(tilted)


def test_coarse_grid_rejected():
    with pytest.raises(GridTooCoarse):
        wm.solve_lowest_modes(pot.harmonic_gaussian_barrier(n=63))


def test_second_order_convergence_square_well():
    dE = [wm.solve_lowest_modes(pot.square_double_well(n=n), check_convergence=False).deltaE
          for n in (1279, 2559, 5119)]
    ratio = (dE[0] - dE[1]) / (dE[1] - dE[2])
    assert 3.5 < ratio < 4.5


def test_coupled_equations_exact_without_step(gaussian_modes):
    rl, rr = wm.coupled_residual(gaussian_modes, 0.0)
    assert rl < 1e-6 and rr < 1e-6


@pytest.mark.parametrize("frac", [0.05, 0.2, -0.1])
def test_perturbed_modes_orthonormal(gaussian_modes, frac):
    m = gaussian_modes
    V0 = frac * m.deltaE
    pm = wm.perturbed_modes(m, V0)
    assert wm.inner(pm.psi0, pm.psi0, m.dx) == pytest.approx(1, abs=1e-12)
    assert wm.inner(pm.psi1, pm.psi1, m.dx) == pytest.approx(1, abs=1e-12)
    assert abs(wm.inner(pm.psi0, pm.psi1, m.dx)) < 1e-12
    assert pm.Etilde1 - pm.Etilde0 == pytest.approx(np.hypot(m.deltaE, V0), rel=1e-14)


def test_perturbed_energies_against_direct_solve(gaussian_modes):
    m = gaussian_modes
    V0 = m.deltaE / 8
    pm = wm.perturbed_modes(m, V0)
    d0, d1 = wm.direct_step_energies(m, V0)
    assert abs(pm.Etilde0 - d0) < 0.05 * V0
    assert abs(pm.Etilde1 - d1) < 0.05 * V0


def test_step_too_large(gaussian_modes):
    with pytest.raises(StepTooLarge):
        wm.perturbed_modes(gaussian_modes, 0.2 * gaussian_modes.Emean)


def test_mixing_angle_examples():
    assert wm.mixing_angle(1.0, 0.0) == pytest.approx(np.pi / 4, abs=1e-15)
    assert wm.mixing_angle(1.0, 1e9) == pytest.approx(np.pi / 2, abs=1e-4)
    assert wm.mixing_angle(1.0, -1e9) == pytest.approx(0.0, abs=1e-4)
    with pytest.raises(ValueError):
        wm.mixing_angle(0.0, 0.1)


@given(st.floats(0.01, 10), st.floats(-5, 5))
def test_mixing_angle_symmetry(dE, V0):
    assert wm.mixing_angle(dE, V0) + wm.mixing_angle(dE, -V0) == pytest.approx(np.pi / 2, abs=1e-12)


@given(st.floats(0.01, 10), st.floats(-2, 2), st.floats(-5, 5))
def test_two_mode_params_invariants(dE, V0, E):
    p = wm.TwoModeParams.from_gap(dE, V0, E)
    assert p.EL - p.ER == pytest.approx(V0, abs=1e-12)
    assert p.splitting == pytest.approx(np.hypot(dE, V0), rel=1e-12)
    w, vecs = np.linalg.eigh(p.hamiltonian_lr())
    assert w == pytest.approx(p.perturbed_energies, abs=1e-9 * max(1, abs(E)))
    # the ground vector is (cos xi, sin xi) in the (L, R) basis
    g = vecs[:, 0] * np.sign(vecs[0, 0] if abs(vecs[0, 0]) > 1e-12 else vecs[1, 0])
    assert g == pytest.approx([np.cos(p.xi), np.sin(p.xi)], abs=1e-9)


def test_two_mode_params_from_modes(gaussian_modes):
    m = gaussian_modes
    p = wm.two_mode_params(m, 0.1 * m.deltaE)
    assert p.K == pytest.approx(-m.deltaE / 2)
    assert p.ER == pytest.approx(m.Emean)
    assert p.v_ratio == pytest.approx(0.1)
    assert set(p.to_dict()) == {"EL", "ER", "K", "V0", "deltaE", "xi"}


def test_load_potential_json_and_csv(tmp_path):
    spec = pot.harmonic_gaussian_barrier(n=1279)
    js = tmp_path / "v.json"
    js.write_text(json.dumps({"x": spec.grid.tolist(), "V": spec.values.tolist(), "mass": 1.0}))
    cs = tmp_path / "v.csv"
    cs.write_text("# mass = 1.0\nx,V\n" + "".join(f"{float(a)!r},{float(b)!r}\n" for a, b in zip(spec.grid, spec.values)))
    a = wm.solve_lowest_modes(pot.load_potential(js), check_convergence=False)
    b = wm.solve_lowest_modes(pot.load_potential(cs), check_convergence=False)
    assert a.deltaE == b.deltaE
    with pytest.raises(ConfigError):
        pot.load_potential(tmp_path / "missing.json")
    bad = tmp_path / "bad.csv"
    bad.write_text("x,V\n0,zero\n")
    with pytest.raises(ConfigError):
        pot.load_potential(bad)


def test_build_family_rejects_unknown():
    with pytest.raises(ConfigError):
        pot.build_family("triple")
    with pytest.raises(ConfigError):
        pot.build_family("box", depth=3)


def test_grid_validation():
    with pytest.raises(ValueError):
        wm.PotentialSpec(np.array([0, 1, 3, 4, 5.0]), np.zeros(5))
    with pytest.raises(ValueError):
        wm.PotentialSpec(np.linspace(-1, 1, 5), np.zeros(5), mass=-1)
