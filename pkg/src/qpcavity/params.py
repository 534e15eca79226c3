"""Physical constants, experiment configuration and closed-form scales.

Units: SI throughout. Internal frequencies are angular (rad/s); only the
config layer (:mod:`qpcavity.config`) speaks ordinary Hz.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import constants as sc

from .errors import ConfigError, PhysicsWarning

HBAR = sc.hbar
EPS0 = sc.epsilon_0
C_LIGHT = sc.c
TWO_PI = 2.0 * math.pi

#: rho_1d * a_sc above this is reported as outside the 1D regime
ONE_D_THRESHOLD = 0.1
#: default relative tolerance for k_cav = n_cav*pi/L commensurability
COMMENSURATE_RTOL = 1e-3


# ---------------------------------------------------------------- species

@dataclass(frozen=True)
class AtomicLine:
    """One optical transition.

    transition_frequency is ordinary Hz, linewidth is rad/s.
    """

    name: str
    transition_frequency: float
    dipole_moment: float
    linewidth: float = 0.0

    def __post_init__(self):
        if not self.transition_frequency > 0:
            raise ConfigError(f"line {self.name}: transition_frequency must be > 0")
        if not self.dipole_moment > 0:
            raise ConfigError(f"line {self.name}: dipole_moment must be > 0")
        if self.linewidth < 0:
            raise ConfigError(f"line {self.name}: linewidth must be >= 0")

    @property
    def omega(self) -> float:
        return TWO_PI * self.transition_frequency


@dataclass(frozen=True)
class AtomSpecies:
    mass: float
    scattering_length: float
    lines: tuple
    three_body_constant: float = 0.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if not self.mass > 0:
            raise ConfigError("mass must be > 0")
        if not self.scattering_length > 0:
            raise ConfigError("scattering_length must be > 0")
        if len(self.lines) == 0:
            raise ConfigError("species needs at least one optical line")
        if self.three_body_constant < 0:
            raise ConfigError("three_body_constant must be >= 0")

    def line(self, key: Union[str, int]) -> AtomicLine:
        if isinstance(key, (int, np.integer)):
            return self.lines[int(key)]
        for ln in self.lines:
            if ln.name == key:
                return ln
        raise ConfigError(f"unknown line {key!r}; have {[l.name for l in self.lines]}")


# ---------------------------------------------------------------- traps

def _depth_in_mu0(depth, depth_mu0, mu0, what):
    if (depth is None) == (depth_mu0 is None):
        raise ConfigError(f"{what}: give exactly one of depth (J) or depth_mu0")
    return depth_mu0 if depth_mu0 is not None else depth / mu0


@dataclass(frozen=True)
class IdealBox:
    """Flat box; the wall is a finite step of ``wall_height`` in units of mu0."""

    wall_height: float = 100.0

    def __post_init__(self):
        if not self.wall_height > 0:
            raise ConfigError("IdealBox wall_height must be > 0")


@dataclass(frozen=True)
class TanhWall:
    """Smooth box wall ``-V0b (tanh(a (1 - (z/(Lw/2))^2)/4) - 1)``.

    Lw is stretched so that the potential equals mu0 at z = +-L/2.
    """

    steepness: float = 200.0
    depth: Optional[float] = None
    depth_mu0: Optional[float] = None

    def __post_init__(self):
        if not self.steepness > 0:
            raise ConfigError("TanhWall steepness must be > 0")
        if (self.depth is None) == (self.depth_mu0 is None):
            raise ConfigError("TanhWall: give exactly one of depth (J) or depth_mu0")

    def depth_over_mu0(self, mu0: float) -> float:
        return _depth_in_mu0(self.depth, self.depth_mu0, mu0, "TanhWall")


@dataclass(frozen=True)
class Trapezoid:
    """Linear walls of slope ``b hbar^2 q^2 / (2 m L)`` outside the box.

    ``reference_wavenumber`` is q (1/m), normally twice the cavity wavenumber.
    The optional depth caps the walls.
    """

    steepness: float
    reference_wavenumber: float
    depth: Optional[float] = None
    depth_mu0: Optional[float] = None

    def __post_init__(self):
        if not self.steepness > 0:
            raise ConfigError("Trapezoid steepness b must be > 0")
        if not self.reference_wavenumber > 0:
            raise ConfigError("Trapezoid reference_wavenumber must be > 0")

    def depth_over_mu0(self, mu0: float) -> Optional[float]:
        if self.depth is None and self.depth_mu0 is None:
            return None
        return _depth_in_mu0(self.depth, self.depth_mu0, mu0, "Trapezoid")

    def slope(self, mass: float, length: float) -> float:
        """Wall gradient a in J/m."""
        return self.steepness * HBAR**2 * self.reference_wavenumber**2 / (2 * mass * length)


WallModel = Union[IdealBox, TanhWall, Trapezoid]


@dataclass(frozen=True)
class TrapConfig:
    length: float
    atom_number: float
    transverse_trap_frequency: Optional[float] = None  # rad/s
    effective_area: Optional[float] = None  # m^2
    wall_model: WallModel = field(default_factory=IdealBox)

    def __post_init__(self):
        if not self.length > 0:
            raise ConfigError("trap length must be > 0")
        if not self.atom_number >= 1:
            raise ConfigError("atom_number must be >= 1")
        has_w = self.transverse_trap_frequency is not None
        has_a = self.effective_area is not None
        if has_w == has_a:
            raise ConfigError(
                "give exactly one of transverse_trap_frequency or effective_area")
        if has_w and not self.transverse_trap_frequency > 0:
            raise ConfigError("transverse_trap_frequency must be > 0")
        if has_a and not self.effective_area > 0:
            raise ConfigError("effective_area must be > 0")


# ---------------------------------------------------------------- cavity

@dataclass(frozen=True)
class CavityConfig:
    """One cavity laser mode.

    ``atomic_detuning`` is omega_laser - omega_line (rad/s, signed) measured
    from ``reference_line``.  ``coupled_lines`` lists the lines whose
    dispersive shifts are summed; None means the reference line only.
    ``mode_index`` is n_cav with k_cav = n_cav pi / L; None derives it.
    """

    cavity_length: float
    mode_area: float
    atomic_detuning: float
    reference_line: Union[str, int] = 0
    coupled_lines: Optional[tuple] = None
    mode_index: Optional[int] = None
    pump_detuning: float = 0.0

    def __post_init__(self):
        if not self.cavity_length > 0:
            raise ConfigError("cavity_length must be > 0")
        if not self.mode_area > 0:
            raise ConfigError("mode_area must be > 0")
        if self.atomic_detuning == 0:
            raise ConfigError("atomic_detuning must be nonzero")
        if self.coupled_lines is not None:
            object.__setattr__(self, "coupled_lines", tuple(self.coupled_lines))
        if self.mode_index is not None and (int(self.mode_index) != self.mode_index
                                            or self.mode_index < 1):
            raise ConfigError("mode_index must be a positive integer")


@dataclass(frozen=True)
class DriveConfig:
    mean_photon_number: float = 0.0
    modulation_amplitude: float = 1.0
    modulation_frequency: float = 0.0  # rad/s
    duration: float = 1.0  # s

    def __post_init__(self):
        if self.mean_photon_number < 0:
            raise ConfigError("mean_photon_number must be >= 0")
        if not 0 <= self.modulation_amplitude <= 1:
            raise ConfigError("modulation_amplitude must lie in [0, 1]")
        if self.modulation_frequency < 0:
            raise ConfigError("modulation_frequency must be >= 0")
        if not self.duration > 0:
            raise ConfigError("duration must be > 0")


# ---------------------------------------------------------------- scales

@dataclass(frozen=True)
class DerivedScales:
    """Closed-form scales of the uniform quasi-condensate.

    ``unit_length`` is hbar/sqrt(4 m mu0), the length unit of the
    dimensionless GP problem; it equals the healing length for a harmonic
    transverse trap.
    """

    g3d: float
    g_1d: float
    mu0: float
    healing_length: float
    line_density: float
    sound_speed: float
    transverse_length: float
    peak_density: float
    transverse: str
    length: float
    atom_number: float
    mass: float
    scattering_length: float
    transverse_frequency: Optional[float]
    unit_length: float

    @property
    def one_d_parameter(self) -> float:
        return self.line_density * self.scattering_length

    @property
    def one_d_valid(self) -> bool:
        return self.one_d_parameter < ONE_D_THRESHOLD

    @property
    def length_tilde(self) -> float:
        """Trap length in GP units."""
        return self.length / self.unit_length

    def kinetic_energy(self, k):
        return HBAR**2 * np.asarray(k, dtype=float) ** 2 / (2 * self.mass)


def derive_scales(species: AtomSpecies, trap: TrapConfig) -> DerivedScales:
    m = species.mass
    g3d = 4 * math.pi * HBAR**2 * species.scattering_length / m
    rho = trap.atom_number / trap.length
    if trap.transverse_trap_frequency is not None:
        transverse = "harmonic"
        a_perp = math.sqrt(HBAR / (m * trap.transverse_trap_frequency))
        g1 = g3d / (2 * math.pi * a_perp**2)
        peak = rho / (math.pi * a_perp**2)
        mu0 = g1 * rho
        xi = HBAR / math.sqrt(4 * m * mu0)
    else:
        transverse = "box"
        area = trap.effective_area
        a_perp = math.sqrt(area / math.pi)
        g1 = g3d / area
        peak = rho / area
        mu0 = g1 * rho
        xi = HBAR / math.sqrt(2 * m * mu0)
    scales = DerivedScales(
        g3d=g3d, g_1d=g1, mu0=mu0, healing_length=xi, line_density=rho,
        sound_speed=math.sqrt(mu0 / m), transverse_length=a_perp,
        peak_density=peak, transverse=transverse, length=trap.length,
        atom_number=trap.atom_number, mass=m,
        scattering_length=species.scattering_length,
        transverse_frequency=trap.transverse_trap_frequency,
        unit_length=HBAR / math.sqrt(4 * m * mu0),
    )
    if not scales.one_d_valid:
        warnings.warn(
            f"rho_1d*a_sc = {scales.one_d_parameter:.3g} is not << 1; "
            "1D Hamiltonian questionable", PhysicsWarning, stacklevel=2)
    return scales


# ---------------------------------------------------------------- optics

def laser_angular_frequency(cavity: CavityConfig, species: AtomSpecies) -> float:
    return species.line(cavity.reference_line).omega + cavity.atomic_detuning


def coupled_lines(cavity: CavityConfig, species: AtomSpecies) -> list:
    if cavity.coupled_lines is None:
        return [species.line(cavity.reference_line)]
    if cavity.coupled_lines == ("all",):
        return list(species.lines)
    return [species.line(k) for k in cavity.coupled_lines]


def mode_volume(cavity: CavityConfig, f_cav_norm: float = 0.5) -> float:
    """Effective volume A_c * int |f_cav|^2 dz; 0.5 L_c A_c for a sine mode."""
    return cavity.mode_area * cavity.cavity_length * f_cav_norm


def rabi_frequency(cavity: CavityConfig, species: AtomSpecies,
                   line: Union[str, int, AtomicLine, None] = None,
                   f_cav_norm: float = 0.5) -> float:
    """Single-photon Rabi frequency g0 (rad/s) of ``line`` at the laser frequency."""
    if line is None:
        line = species.line(cavity.reference_line)
    elif not isinstance(line, AtomicLine):
        line = species.line(line)
    w = laser_angular_frequency(cavity, species)
    return line.dipole_moment * math.sqrt(w / (2 * HBAR * EPS0 * mode_volume(cavity, f_cav_norm)))


def detunings(cavity: CavityConfig, species: AtomSpecies) -> dict:
    """Signed detuning omega_laser - omega_line for every coupled line."""
    w = laser_angular_frequency(cavity, species)
    return {ln.name: w - ln.omega for ln in coupled_lines(cavity, species)}


def dispersive_coupling(cavity: CavityConfig, species: AtomSpecies,
                        f_cav_norm: float = 0.5) -> float:
    """Sum of g0_i^2 / Delta_i over coupled lines (rad/s)."""
    w = laser_angular_frequency(cavity, species)
    tot = 0.0
    for ln in coupled_lines(cavity, species):
        tot += rabi_frequency(cavity, species, ln, f_cav_norm) ** 2 / (w - ln.omega)
    return tot


def cavity_wavenumber(cavity: CavityConfig, species: AtomSpecies) -> float:
    return laser_angular_frequency(cavity, species) / C_LIGHT


def cavity_mode_number(cavity: CavityConfig, species: AtomSpecies, length: float,
                       rtol: float = COMMENSURATE_RTOL) -> int:
    """n_cav = round(k_cav L / pi); warns when rounding moves k_cav by more than rtol."""
    if cavity.mode_index is not None:
        return int(cavity.mode_index)
    k = cavity_wavenumber(cavity, species)
    n = max(1, int(round(k * length / math.pi)))
    shift = abs(n * math.pi / length - k) / k
    if shift > rtol:
        warnings.warn(f"k_cav not commensurate with the trap: relative shift {shift:.2e}",
                      PhysicsWarning, stacklevel=2)
    return n


def resonant_mode_index(cavity: CavityConfig, species: AtomSpecies, trap: TrapConfig,
                        rtol: float = COMMENSURATE_RTOL) -> int:
    """Quasiparticle index 2 n_cav selected by momentum conservation."""
    return 2 * cavity_mode_number(cavity, species, trap.length, rtol)


def power_from_photon_number(n_ph, cavity: CavityConfig, species: AtomSpecies):
    """Circulating power P_c = hbar omega_c N_ph c / (2 L_c)."""
    w = laser_angular_frequency(cavity, species)
    return HBAR * w * np.asarray(n_ph, dtype=float) * C_LIGHT / (2 * cavity.cavity_length)


def photon_number_from_power(power, cavity: CavityConfig, species: AtomSpecies):
    p = np.asarray(power, dtype=float)
    if np.any(p < 0):
        raise ConfigError("power must be >= 0")
    w = laser_angular_frequency(cavity, species)
    return p * 2 * cavity.cavity_length / (HBAR * w * C_LIGHT)


def cavity_mode_profile(z, cavity: CavityConfig, species: AtomSpecies, length: float):
    """f_cav(z) = sin(k_cav (z + L/2)) with the commensurate k_cav."""
    n = cavity_mode_number(cavity, species, length)
    return np.sin(n * math.pi / length * (np.asarray(z) + length / 2))


def cavity_frequency_shift(cavity: CavityConfig, species: AtomSpecies, ground) -> float:
    """delta omega_c = N0 (sum g^2/Delta) int |psi0|^2 f_cav^2 dz (rad/s)."""
    z = ground.z_m
    f2 = cavity_mode_profile(z, cavity, species, ground.scales.length) ** 2
    overlap = float(np.sum(ground.density_m * f2) * ground.dz_m)
    return dispersive_coupling(cavity, species) * ground.scales.atom_number * overlap


def cavity_frequency_shift_box(cavity: CavityConfig, species: AtomSpecies,
                               atom_number: float) -> float:
    """Closed form for a flat box and integer n_cav: N0 g^2 / (2 Delta)."""
    return dispersive_coupling(cavity, species) * atom_number / 2


def transverse_frequency_for_density(species: AtomSpecies, line_density: float,
                                     peak_density: float) -> float:
    """omega_perp giving a harmonic-trap peak density rho0 = rho_1d/(pi a_perp^2)."""
    a2 = line_density / (math.pi * peak_density)
    return HBAR / (species.mass * a2)


def hz(f_hz):
    """Ordinary Hz to rad/s."""
    return TWO_PI * f_hz


def to_hz(omega):
    return omega / TWO_PI
