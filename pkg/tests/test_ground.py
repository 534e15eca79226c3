import math
import warnings

import numpy as np
import pytest

from qpcavity.errors import ConfigError, GridMismatch, PhysicsWarning
from qpcavity.ground import (
    Grid1D, SolverOptions, build_potential, chemical_potential_tilde, energy_functional,
    ground_state_perturbation, imaginary_time_step, propagate_ground, solve_ground_state,
    write_ground_state_csv,
)
from qpcavity.params import IdealBox, TanhWall, TrapConfig


def test_grid_validation():
    with pytest.raises(ConfigError):
        Grid1D(1000, 10.0)
    with pytest.raises(ConfigError):
        Grid1D.for_trap(10.0, 1024, 1.0)


def test_spectral_laplacian_exact_on_harmonic():
    g = Grid1D(256, 2 * math.pi)
    f = np.sin(3 * g.z)
    np.testing.assert_allclose(g.laplacian(f), -9 * f, atol=1e-11)


def test_tanh_ground_state(tanh_ground):
    assert tanh_ground.residual < 1e-6
    assert abs(tanh_ground.mu_tilde - 1) < 0.05
    assert np.sum(tanh_ground.psi**2) * tanh_ground.grid.dz == pytest.approx(1, abs=1e-12)


def test_box_ground_state(box_ground):
    assert abs(box_ground.mu_tilde - 1) < 0.05


def test_energy_monotone(tanh_ground):
    e = np.array(tanh_ground.energies)
    assert np.all(np.diff(e) <= 1e-12 * np.abs(e[1:]))


def test_uniform_fixed_point():
    # periodic flat state with V = 0 is stationary with mu = g / L_grid
    g = Grid1D(256, 50.0)
    psi = np.full(256, 1 / math.sqrt(50.0))
    out = imaginary_time_step(psi, np.zeros(256), 1e-3, g, 40.0)
    np.testing.assert_allclose(out, psi, rtol=1e-13)
    assert chemical_potential_tilde(psi, np.zeros(256), g, 40.0) == pytest.approx(40 / 50)


def test_norm_preserved_each_step(tanh_ground):
    psi = tanh_ground.psi * (1 + 0.01 * np.cos(tanh_ground.grid.z))
    g = tanh_ground.grid
    psi = psi / math.sqrt(np.sum(psi**2) * g.dz)
    for _ in range(5):
        psi = imaginary_time_step(psi, tanh_ground.potential, 1e-3, g, tanh_ground.nonlinearity)
        assert abs(np.sum(psi**2) * g.dz - 1) < 1e-12


def test_step_grid_mismatch(tanh_ground):
    with pytest.raises(GridMismatch):
        imaginary_time_step(np.ones(10), tanh_ground.potential, 1e-3, tanh_ground.grid, 1.0)


def test_tanh_rejects_shallow_wall(cfg, scales):
    trap = TrapConfig(cfg.trap.length, 1000, cfg.trap.transverse_trap_frequency, None,
                      TanhWall(200, depth_mu0=0.5))
    with pytest.raises(ConfigError):
        build_potential(trap, scales, cfg.grid.grid(scales))


def test_grid_must_exceed_trap(cfg, scales):
    with pytest.raises(ConfigError):
        build_potential(cfg.trap, scales, Grid1D(1024, scales.length_tilde))


def test_perturbation_linear_response(tanh_ground):
    dv = 0.01 * tanh_ground.mu
    d = ground_state_perturbation(tanh_ground, dv)
    np.testing.assert_allclose(d, -0.005 * tanh_ground.psi)
    with pytest.warns(PhysicsWarning):
        ground_state_perturbation(tanh_ground, 0.5 * tanh_ground.mu)


def test_ground_state_csv(tmp_path, tanh_ground):
    p = tmp_path / "g.csv"
    write_ground_state_csv(tanh_ground, p)
    head = p.read_text().splitlines()
    assert head[0] == "z_m,psi_sq_per_m"
    assert len(head) == tanh_ground.grid.points + 1


def test_summary_keys(tanh_ground):
    assert set(tanh_ground.summary()) == {"mu_joule", "xi_m", "iterations", "residual"}
