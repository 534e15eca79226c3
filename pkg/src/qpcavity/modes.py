"""Bogoliubov quasiparticle modes of a box-trapped quasi-condensate.

All sampled mode functions are in SI normalisation (units 1/sqrt(m)) on the
ground-state grid and are rescaled so that int(|u|^2 - |v|^2) dz = 1 holds
exactly under the grid quadrature.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GridMismatch, RegimeViolation
from .ground import GroundState
from .params import HBAR, DerivedScales

#: E_k/mu0 below this counts as low energy
LOW_ENERGY_MAX = 0.2
#: E_k/mu0 above this counts as high energy
HIGH_ENERGY_MIN = 5.0

LOW, HIGH, UNIFORM, NUMERICAL = "LowEnergy", "HighEnergy", "Bogoliubov", "Numerical"


@dataclass(frozen=True)
class Mode:
    index: int
    wavenumber: float
    frequency: float
    sigma: float
    alpha: float
    beta: float
    regime: str
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    dz: Optional[float] = None

    @property
    def sampled(self) -> bool:
        return self.u is not None

    @property
    def frequency_hz(self) -> float:
        return self.frequency / (2 * math.pi)


def sigma_from_energy(E_kin, mu0):
    return (1 + 2 * mu0 / np.asarray(E_kin, dtype=float)) ** 0.25


def bogoliubov_coefficients(sigma):
    """(alpha, beta) = ((1/s + s)/2, (1/s - s)/2)."""
    s = np.asarray(sigma, dtype=float)
    return (1 / s + s) / 2, (1 / s - s) / 2


def dispersion(n, scales: DerivedScales):
    """(k_n, sigma_n, omega_n) for k_n = n pi / L; vectorised over n."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 1):
        raise ValueError("mode index must be >= 1")
    k = n_arr * math.pi / scales.length
    E = scales.kinetic_energy(k)
    sigma = sigma_from_energy(E, scales.mu0)
    omega = E * sigma**2 / HBAR
    if np.ndim(n) == 0:
        return float(k), float(sigma), float(omega)
    return k, sigma, omega


def energy_ratio(n, scales: DerivedScales):
    """Kinetic over interaction energy hbar^2 k_n^2 / (2 m mu0)."""
    k = np.asarray(n) * math.pi / scales.length
    return scales.kinetic_energy(k) / scales.mu0


def phi_c(z, k, length):
    return math.sqrt(2) * np.cos(k * (z + length / 2))


def _normalise(u, v, dz):
    norm = np.sum(np.abs(u) ** 2 - np.abs(v) ** 2) * dz
    s = 1 / math.sqrt(norm)
    return u * s, v * s


def _mode(n, scales, regime, u=None, v=None, dz=None):
    k, sigma, omega = dispersion(n, scales)
    a, b = bogoliubov_coefficients(sigma)
    return Mode(int(n), k, omega, sigma, float(a), float(b), regime, u, v, dz)


def sigma_mode(n: int, ground: GroundState, sample: bool = True) -> Mode:
    """Uniform-condensate Bogoliubov pair alpha psi0 phi_c, beta psi0 phi_c at any n.

    Exact solution of the BDG system in the bulk of a flat box for all k.
    """
    sc = ground.scales
    if not sample:
        return _mode(n, sc, UNIFORM)
    k, sigma, _ = dispersion(n, sc)
    a, b = bogoliubov_coefficients(sigma)
    shape = ground.psi_m * phi_c(ground.z_m, k, sc.length)
    u, v = _normalise(a * shape, b * shape, ground.dz_m)
    return _mode(n, sc, UNIFORM, u, v, ground.dz_m)


def low_mode(n: int, ground: GroundState, sample: bool = True, override: bool = False,
             threshold: float = LOW_ENERGY_MAX) -> Mode:
    """Low-energy TF mode u = alpha psi0 phi_c, v = beta psi0 phi_c."""
    r = float(energy_ratio(n, ground.scales))
    if r >= threshold and not override:
        raise RegimeViolation(f"n={n}: E_k/mu0 = {r:.3g} not below {threshold}")
    m = sigma_mode(n, ground, sample)
    return Mode(m.index, m.wavenumber, m.frequency, m.sigma, m.alpha, m.beta, LOW,
                m.u, m.v, m.dz)


def high_mode(n: int, ground: GroundState, sample: bool = True, override: bool = False,
              threshold: float = HIGH_ENERGY_MIN) -> Mode:
    """Kinetic-dominated mode u = phi_c / sqrt(L) inside the box, v = 0."""
    sc = ground.scales
    r = float(energy_ratio(n, sc))
    if r <= threshold and not override:
        raise RegimeViolation(f"n={n}: E_k/mu0 = {r:.3g} not above {threshold}")
    if not sample:
        return _mode(n, sc, HIGH)
    k = n * math.pi / sc.length
    u = ground.indicator * phi_c(ground.z_m, k, sc.length) / math.sqrt(sc.length)
    u, v = _normalise(u, np.zeros_like(u), ground.dz_m)
    return _mode(n, sc, HIGH, u, v, ground.dz_m)


def plane_wave_pair(k_index: int, ground: GroundState) -> Mode:
    """Exact Bogoliubov pair e^{ikz} on a periodic grid with a uniform condensate.

    ``ground`` must be uniform (V = 0, flat psi); k is the ``k_index``-th
    grid harmonic.  Frequency and sigma use the grid wavenumber.
    """
    sc = ground.scales
    Lg = ground.grid.domain_length * sc.unit_length
    k = 2 * math.pi * k_index / Lg
    mu = ground.nonlinearity * float(np.mean(ground.psi**2)) * sc.mu0
    E = sc.kinetic_energy(k)
    sigma = float(sigma_from_energy(E, mu))
    a, b = bogoliubov_coefficients(sigma)
    wave = np.exp(1j * k * ground.z_m) / math.sqrt(Lg)
    return Mode(k_index, k, E * sigma**2 / HBAR, sigma, float(a), float(b), UNIFORM,
                a * wave, b * wave, ground.dz_m)


# ---------------------------------------------------------------- checks

def _check(mode: Mode, ground: GroundState):
    if not mode.sampled:
        raise ValueError("mode has no sampled u, v")
    if len(mode.u) != ground.grid.points:
        raise GridMismatch("mode and ground state grids differ")


def bdg_residual(mode: Mode, ground: GroundState, margin: Optional[float] = 10.0) -> float:
    """Relative BDG residual, max over the u and v equations.

    Evaluated in GP units with spectral derivatives.  ``margin`` (in healing
    lengths) excludes the wall boundary layer; None uses the whole grid.
    """
    _check(mode, ground)
    sc = ground.scales
    ell = sc.unit_length
    u = mode.u * math.sqrt(ell)
    v = mode.v * math.sqrt(ell)
    psi = ground.psi
    w = HBAR * mode.frequency / sc.mu0
    base = ground.potential - ground.mu_tilde + 2 * ground.nonlinearity * np.abs(psi) ** 2
    cross = ground.nonlinearity * psi**2
    lap = ground.grid.laplacian
    r1 = -2 * lap(u) + base * u + cross * v - w * u
    r2 = -2 * lap(v) + base * v + np.conj(cross) * u + w * v
    if margin is None:
        mask = np.ones(len(u), dtype=bool)
    else:
        edge = sc.length_tilde / 2 - margin * sc.healing_length / ell
        mask = np.abs(ground.grid.z) <= edge
    scale = w * math.sqrt(np.sum(np.abs(u[mask]) ** 2))
    e1 = math.sqrt(np.sum(np.abs(r1[mask]) ** 2)) / scale
    e2 = math.sqrt(np.sum(np.abs(r2[mask]) ** 2)) / scale
    return max(e1, e2)


def norm_check(mode_i: Mode, mode_j: Mode) -> complex:
    """Symplectic inner product int(u_i* u_j - v_i* v_j) dz."""
    if not (mode_i.sampled and mode_j.sampled):
        raise ValueError("modes must be sampled")
    if len(mode_i.u) != len(mode_j.u):
        raise GridMismatch("modes live on different grids")
    val = np.sum(np.conj(mode_i.u) * mode_j.u - np.conj(mode_i.v) * mode_j.v) * mode_i.dz
    return complex(val) if np.iscomplexobj(val) else float(val)


# ---------------------------------------------------------------- export

def mode_table_rows(modes):
    return [
        {"n": m.index, "k_n": m.wavenumber, "omega_hz": m.frequency_hz, "sigma": m.sigma,
         "alpha": m.alpha, "beta": m.beta, "regime": m.regime}
        for m in modes
    ]


def write_mode_table_csv(modes, path) -> None:
    cols = ["n", "k_n", "omega_hz", "sigma", "alpha", "beta", "regime"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in mode_table_rows(modes):
            w.writerow([f"{row[c]:.17g}" if isinstance(row[c], float) else row[c] for c in cols])
