import math

import numpy as np
import pytest

from qpcavity import modes
from qpcavity.errors import GridMismatch, RegimeViolation
from qpcavity.ground import Grid1D, GroundState
from oracles import bogoliubov_omega


def test_dispersion_matches_bogoliubov_formula(scales):
    for n in (1, 20, 50, 300, 1026):
        w = modes.dispersion(n, scales)[2]
        assert w == pytest.approx(bogoliubov_omega(n, scales.mass, scales.mu0, scales.length),
                                  rel=1e-12)


def test_sigma_identities():
    s = modes.sigma_from_energy(np.array([0.01, 1.0, 100.0]), 1.0)
    a, b = modes.bogoliubov_coefficients(s)
    np.testing.assert_allclose(a**2 - b**2, 1, rtol=1e-14)


def test_regime_guards(box_ground):
    with pytest.raises(RegimeViolation):
        modes.low_mode(1026, box_ground)
    with pytest.raises(RegimeViolation):
        modes.high_mode(50, box_ground)
    assert modes.low_mode(1026, box_ground, override=True).regime == modes.LOW


@pytest.fixture(scope="module")
def uniform_ground(scales):
    g = Grid1D(1024, 400.0)
    Lt = scales.length_tilde
    psi = np.full(1024, 1 / math.sqrt(400.0))
    return GroundState(g, psi, np.zeros(1024), Lt, Lt / 400.0, 0.0, 0, scales)


@pytest.mark.parametrize("j", [1, 7, 40, 200])
def test_plane_wave_pairs_exact(uniform_ground, j):
    m = modes.plane_wave_pair(j, uniform_ground)
    assert modes.bdg_residual(m, uniform_ground, margin=None) < 1e-8
    assert modes.norm_check(m, m) == pytest.approx(1, abs=1e-12)


def test_low_mode_residual(box_ground):
    m = modes.low_mode(20, box_ground)
    assert modes.bdg_residual(m, box_ground) < 5e-2


def test_high_mode_residual(box_ground):
    m = modes.high_mode(1026, box_ground)
    assert modes.bdg_residual(m, box_ground) < 5e-2


def test_normalisation_and_orthogonality(ideal_ground):
    a, b = modes.low_mode(20, ideal_ground), modes.low_mode(22, ideal_ground)
    assert modes.norm_check(a, a) == pytest.approx(1, abs=1e-6)
    assert abs(modes.norm_check(a, b)) < 1e-6
    h, h2 = modes.high_mode(1026, ideal_ground), modes.high_mode(1028, ideal_ground)
    assert modes.norm_check(h, h) == pytest.approx(1, abs=1e-6)
    assert abs(modes.norm_check(h, h2)) < 1e-6


def test_overlap_on_gp_box_is_boundary_layer_sized(box_ground, scales):
    # the healing layer breaks cosine orthogonality at order xi / L
    a, b = modes.low_mode(20, box_ground), modes.low_mode(22, box_ground)
    assert abs(modes.norm_check(a, b)) < 10 * scales.healing_length / scales.length


def test_grid_mismatch(box_ground, uniform_ground):
    m = modes.plane_wave_pair(3, uniform_ground)
    with pytest.raises(GridMismatch):
        modes.bdg_residual(m, box_ground)


def test_mode_table_csv(tmp_path, scales, box_ground):
    p = tmp_path / "m.csv"
    modes.write_mode_table_csv([modes.low_mode(50, box_ground, sample=False)], p)
    lines = p.read_text().splitlines()
    assert lines[0] == "n,k_n,omega_hz,sigma,alpha,beta,regime"
    assert float(lines[1].split(",")[2]) == pytest.approx(170, rel=0.1)
