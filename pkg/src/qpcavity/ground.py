"""Stationary GP ground state by imaginary-time split-step propagation.

Dimensionless form: energies in mu0, lengths in ``scales.unit_length``
(hbar / sqrt(4 m mu0)), so the GP operator reads
``-2 d^2/dz^2 + V + Lt |psi|^2`` with Lt the trap length in those units and
psi normalised to one.  The ground state of a real potential is real, so the
solver works with real arrays and real FFTs.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import fft as sfft

from . import kernels
from .errors import ConfigError, ConvergenceError, GridMismatch, MaxIterations, PhysicsWarning
from .params import DerivedScales, IdealBox, TanhWall, TrapConfig, Trapezoid

DEFAULT_POINTS = 4096
DEFAULT_DOMAIN_FACTOR = 1.2


@dataclass(frozen=True)
class Grid1D:
    """Periodic grid of J points on [-L_g/2, L_g/2), dimensionless units."""

    points: int = DEFAULT_POINTS
    domain_length: float = 1.0

    def __post_init__(self):
        J = self.points
        if J < 256 or J & (J - 1):
            raise ConfigError("grid point count must be a power of two >= 256")
        if not self.domain_length > 0:
            raise ConfigError("domain_length must be > 0")

    @classmethod
    def for_trap(cls, length_tilde: float, points: int = DEFAULT_POINTS,
                 factor: float = DEFAULT_DOMAIN_FACTOR) -> "Grid1D":
        if not factor > 1:
            raise ConfigError("domain factor must exceed 1 (grid larger than trap)")
        return cls(points, factor * length_tilde)

    @property
    def dz(self) -> float:
        return self.domain_length / self.points

    @property
    def z(self) -> np.ndarray:
        return (np.arange(self.points) - self.points // 2) * self.dz

    @property
    def wavenumbers(self) -> np.ndarray:
        """Full FFT wavenumbers 2 pi (j - J/2)/L_g in FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.dz)

    @property
    def rwavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.rfftfreq(self.points, d=self.dz)

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        """Spectral second derivative (real or complex input)."""
        if np.iscomplexobj(f):
            k = self.wavenumbers
            return np.fft.ifft(-(k**2) * np.fft.fft(f))
        k = self.rwavenumbers
        return sfft.irfft(-(k**2) * sfft.rfft(f), n=self.points)


@dataclass(frozen=True)
class SolverOptions:
    dtau: float = 1e-3
    tol: float = 1e-10
    check_every: int = 100
    max_iterations: int = 2_000_000
    min_dtau: float = 1e-7


@dataclass(frozen=True)
class GroundState:
    grid: Grid1D
    psi: np.ndarray
    potential: np.ndarray
    nonlinearity: float
    mu_tilde: float
    residual: float
    iterations: int
    scales: Optional[DerivedScales] = None
    dtau: float = 1e-3
    energies: tuple = field(default=(), repr=False)
    box_indicator: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def indicator(self) -> np.ndarray:
        """Box indicator chi(z) on the grid (1 inside |z| <= L/2)."""
        if self.box_indicator is not None:
            return self.box_indicator
        return (np.abs(self.grid.z) <= self.scales.length_tilde / 2).astype(float)

    @property
    def mu(self) -> float:
        """Chemical potential in J."""
        return self.mu_tilde * self.scales.mu0

    @property
    def z_m(self) -> np.ndarray:
        return self.grid.z * self.scales.unit_length

    @property
    def dz_m(self) -> float:
        return self.grid.dz * self.scales.unit_length

    @property
    def psi_m(self) -> np.ndarray:
        """psi0 normalised in metres (units 1/sqrt(m))."""
        return self.psi / math.sqrt(self.scales.unit_length)

    @property
    def density_m(self) -> np.ndarray:
        """|psi0|^2 per metre, integrating to one."""
        return self.psi**2 / self.scales.unit_length

    def summary(self) -> dict:
        return {
            "mu_joule": self.mu,
            "xi_m": self.scales.healing_length,
            "iterations": int(self.iterations),
            "residual": float(self.residual),
        }


# ---------------------------------------------------------------- potentials

def tanh_wall_length(length_tilde: float, steepness: float, depth_mu0: float) -> float:
    """Stretched length making the tanh wall equal mu0 at +-L/2."""
    s = 1 - 4 * math.atanh(1 - 1 / depth_mu0) / steepness
    if s <= 0:
        raise ConfigError("tanh wall too shallow or soft for this depth")
    return length_tilde / math.sqrt(s)


def build_potential(trap: TrapConfig, scales: DerivedScales, grid: Grid1D) -> np.ndarray:
    """Trap potential in units of mu0 sampled on ``grid``."""
    Lt = scales.length_tilde
    if grid.domain_length <= Lt:
        raise ConfigError("grid must be strictly longer than the trap")
    z = grid.z
    wall = trap.wall_model
    if isinstance(wall, IdealBox):
        return np.where(np.abs(z) <= Lt / 2, 0.0, float(wall.wall_height))
    if isinstance(wall, TanhWall):
        V0b = wall.depth_over_mu0(scales.mu0)
        if V0b <= 1:
            raise ConfigError("tanh wall depth must exceed mu0")
        Lw = tanh_wall_length(Lt, wall.steepness, V0b)
        return -V0b * (np.tanh(wall.steepness * (1 - (z / (Lw / 2)) ** 2) / 4) - 1)
    if isinstance(wall, Trapezoid):
        slope = wall.slope(scales.mass, scales.length) * scales.unit_length / scales.mu0
        V = slope * np.clip(np.abs(z) - Lt / 2, 0, None)
        cap = wall.depth_over_mu0(scales.mu0)
        if cap is not None:
            V = np.minimum(V, cap)
        return V
    raise ConfigError(f"unknown wall model {wall!r}")


def thomas_fermi_density(V: np.ndarray, nonlinearity: float, mu_tilde: float = 1.0):
    """TF reference |psi|^2 = max(mu - V, 0)/Lt (not renormalised)."""
    return np.clip(mu_tilde - V, 0, None) / nonlinearity


# ---------------------------------------------------------------- functionals

def chemical_potential_tilde(psi, V, grid: Grid1D, nonlinearity: float) -> float:
    lap = grid.laplacian(psi)
    rho = np.abs(psi) ** 2
    val = np.sum(np.conj(psi) * (-2 * lap) + (V + nonlinearity * rho) * rho) * grid.dz
    return float(np.real(val))


def chemical_potential(psi, V, grid: Grid1D, scales: DerivedScales) -> float:
    """mu in J for a normalised psi on ``grid``."""
    return chemical_potential_tilde(psi, V, grid, scales.length_tilde) * scales.mu0


def energy_functional(psi, V, grid: Grid1D, nonlinearity: float) -> float:
    """E = int 2|psi'|^2 + V|psi|^2 + (Lt/2)|psi|^4, per particle, units of mu0."""
    lap = grid.laplacian(psi)
    rho = np.abs(psi) ** 2
    kin = np.real(np.sum(np.conj(psi) * (-2 * lap)))
    return float((kin + np.sum(V * rho + 0.5 * nonlinearity * rho**2)) * grid.dz)


def gp_residual(psi, V, grid: Grid1D, nonlinearity: float, mu_tilde: float) -> float:
    """L2 norm of (-2 d^2 + V + Lt|psi|^2 - mu) psi."""
    r = -2 * grid.laplacian(psi) + (V + nonlinearity * np.abs(psi) ** 2 - mu_tilde) * psi
    return float(np.sqrt(np.sum(np.abs(r) ** 2) * grid.dz))


# ---------------------------------------------------------------- propagation

class _Stepper:
    """Owns the work buffers for repeated split steps at fixed dtau."""

    def __init__(self, V, grid: Grid1D, nonlinearity: float, dtau: float):
        self.V = np.ascontiguousarray(V, dtype=np.float64)
        self.grid = grid
        self.g = float(nonlinearity)
        self.half = 0.5 * dtau
        self.Uk = np.exp(-2 * grid.rwavenumbers**2 * dtau)
        self.f = np.empty(grid.points)
        self.J = grid.points

    def step(self, psi: np.ndarray) -> np.ndarray:
        # both potential half steps use the density at the start of the step
        kernels.potential_half_step(psi, self.V, self.g, self.half, self.f)
        psi = sfft.irfft(self.Uk * sfft.rfft(psi), n=self.J)
        kernels.apply_factor_normalize(psi, self.f, self.grid.dz)
        return psi


def imaginary_time_step(psi, V, dtau: float, grid: Grid1D, nonlinearity: float):
    """One normalised split step U_z^1/2 F^-1 U_k F U_z^1/2 (returns a new array)."""
    if len(psi) != grid.points or len(V) != grid.points:
        raise GridMismatch("psi/V length does not match the grid")
    psi = np.array(psi, dtype=np.float64, copy=True)
    out = _Stepper(V, grid, nonlinearity, dtau).step(psi)
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("non-finite wavefunction; dtau too large")
    return out


def initial_guess(V, grid: Grid1D, nonlinearity: float) -> np.ndarray:
    psi = np.sqrt(np.clip(1.0 - V, 0, None))
    if not np.any(psi > 0):
        psi = np.exp(-(V - V.min()))
    return psi / math.sqrt(np.sum(psi**2) * grid.dz)


def propagate_ground(V, grid: Grid1D, nonlinearity: float,
                     options: SolverOptions = SolverOptions(), psi0=None):
    """Imaginary-time relaxation. Returns (psi, mu_tilde, iterations, residual, dtau, energies).

    Convergence: relative change of mu between checks (every
    ``options.check_every`` steps) below ``options.tol``.  Non-finite values
    halve dtau and restart from the last checkpoint.
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    psi = initial_guess(V, grid, nonlinearity) if psi0 is None else np.array(psi0, dtype=np.float64)
    dtau = options.dtau
    stepper = _Stepper(V, grid, nonlinearity, dtau)
    mu_old = chemical_potential_tilde(psi, V, grid, nonlinearity)
    energies = [energy_functional(psi, V, grid, nonlinearity)]
    it = 0
    while it < options.max_iterations:
        trial = psi.copy()
        for _ in range(options.check_every):
            trial = stepper.step(trial)
        if not np.all(np.isfinite(trial)):
            dtau /= 2
            if dtau < options.min_dtau:
                raise ConvergenceError("dtau underflow while recovering from overflow")
            warnings.warn(f"overflow in split step; dtau -> {dtau:g}", PhysicsWarning)
            stepper = _Stepper(V, grid, nonlinearity, dtau)
            continue
        psi = trial
        it += options.check_every
        mu = chemical_potential_tilde(psi, V, grid, nonlinearity)
        energies.append(energy_functional(psi, V, grid, nonlinearity))
        if abs(mu - mu_old) < options.tol * abs(mu):
            res = gp_residual(psi, V, grid, nonlinearity, mu)
            return psi, mu, it, res, dtau, tuple(energies)
        mu_old = mu
    raise MaxIterations(f"ground state not converged after {it} steps")


def solve_ground_state(trap: TrapConfig, scales: DerivedScales, grid: Optional[Grid1D] = None,
                       options: SolverOptions = SolverOptions()) -> GroundState:
    if grid is None:
        grid = Grid1D.for_trap(scales.length_tilde)
    V = build_potential(trap, scales, grid)
    Lt = scales.length_tilde
    psi, mu, it, res, dtau, energies = propagate_ground(V, grid, Lt, options)
    psi = np.abs(psi)
    return GroundState(grid=grid, psi=psi, potential=V, nonlinearity=Lt, mu_tilde=mu,
                       residual=res, iterations=it, scales=scales, dtau=dtau,
                       energies=energies)


def ideal_box_ground_state(scales: DerivedScales, points: int = DEFAULT_POINTS,
                           wall_height: float = 100.0) -> GroundState:
    """Flat condensate chi(z)/sqrt(L) filling an ideal box, no healing layer.

    The grid is twice the box so that the walls fall on grid points; there
    chi = 1/sqrt(2), which turns grid sums of products of two box functions
    into the trapezoid rule on [-L/2, L/2].  That rule integrates every
    cos(m pi x / L) exactly, so box selection rules hold to rounding.
    """
    Lt = scales.length_tilde
    grid = Grid1D(points, 2 * Lt)
    z = grid.z
    edge = np.isclose(np.abs(z), Lt / 2, rtol=0, atol=1e-9 * grid.dz)
    chi = np.where(np.abs(z) < Lt / 2, 1.0, 0.0)
    chi[edge] = math.sqrt(0.5)
    V = np.where(np.abs(z) <= Lt / 2, 0.0, float(wall_height))
    return GroundState(grid=grid, psi=chi / math.sqrt(Lt), potential=V, nonlinearity=Lt,
                       mu_tilde=1.0, residual=0.0, iterations=0, scales=scales, dtau=0.0,
                       box_indicator=chi)


# ---------------------------------------------------------------- response

def ground_state_perturbation(ground: GroundState, dV) -> np.ndarray:
    """Linear TF response delta psi0 = -dV psi0 / (2 mu) to a static dV (J).

    Returned in the same normalisation as ``ground.psi``.
    """
    dV = np.broadcast_to(np.asarray(dV, dtype=float), ground.psi.shape)
    mu = ground.mu
    if np.max(np.abs(dV)) / abs(mu) > 0.1:
        warnings.warn("perturbation exceeds 10% of mu; linear response dubious",
                      PhysicsWarning, stacklevel=2)
    return -dV * ground.psi / (2 * mu)


# ---------------------------------------------------------------- export

def write_ground_state_csv(ground: GroundState, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["z_m", "psi_sq_per_m"])
        for z, r in zip(ground.z_m, ground.density_m):
            w.writerow([f"{z:.17g}", f"{r:.17g}"])
