"""JSON experiment configuration.

Top-level keys: ``atom``, ``trap``, ``cavity``, ``drives`` (list of named
drives), ``protocol`` and ``grid``.  Key suffixes carry units: ``_hz`` is
ordinary Hz (converted to rad/s here and nowhere else), ``_m`` metres,
``_joule`` joules, ``_s`` seconds.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .errors import ConfigError
from .ground import Grid1D, SolverOptions
from .params import (
    AtomicLine,
    AtomSpecies,
    CavityConfig,
    DerivedScales,
    DriveConfig,
    IdealBox,
    TanhWall,
    TrapConfig,
    Trapezoid,
    derive_scales,
    hz,
    transverse_frequency_for_density,
)

REQUIRED_KEYS = ("atom", "trap", "cavity")


@dataclass(frozen=True)
class NamedDrive:
    name: str
    cavity: CavityConfig
    drive: DriveConfig
    target: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GridSettings:
    points: int = 4096
    domain_factor: float = 1.2
    dtau: float = 1e-3
    tolerance: float = 1e-10
    check_every: int = 100

    def grid(self, scales: DerivedScales) -> Grid1D:
        return Grid1D.for_trap(scales.length_tilde, self.points, self.domain_factor)

    def options(self) -> SolverOptions:
        return SolverOptions(dtau=self.dtau, tol=self.tolerance, check_every=self.check_every)


@dataclass(frozen=True)
class ExperimentConfig:
    species: AtomSpecies
    trap: TrapConfig
    cavity_length: float
    mode_area: float
    pump_detuning: float
    drives: dict
    protocol: dict
    grid: GridSettings
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    def scales(self) -> DerivedScales:
        return derive_scales(self.species, self.trap)

    def drive(self, name: str) -> NamedDrive:
        try:
            return self.drives[name]
        except KeyError:
            raise ConfigError(f"no drive named {name!r}; have {sorted(self.drives)}")

    def cavity(self, atomic_detuning: float, reference_line="D2", coupled_lines=None,
               mode_index=None) -> CavityConfig:
        """Cavity mode with this config's geometry and a chosen detuning (rad/s)."""
        return CavityConfig(self.cavity_length, self.mode_area, atomic_detuning,
                            reference_line, coupled_lines, mode_index, self.pump_detuning)

    def with_wall(self, wall) -> "ExperimentConfig":
        trap = TrapConfig(self.trap.length, self.trap.atom_number,
                          self.trap.transverse_trap_frequency, self.trap.effective_area, wall)
        return ExperimentConfig(self.species, trap, self.cavity_length, self.mode_area,
                                self.pump_detuning, self.drives, self.protocol, self.grid,
                                self.raw)


def _req(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"missing key {where}.{key}")
    return d[key]


def _species(d: dict) -> AtomSpecies:
    lines = []
    for i, ln in enumerate(_req(d, "lines", "atom")):
        lines.append(AtomicLine(
            name=ln.get("name", f"L{i}"),
            transition_frequency=float(_req(ln, "transition_frequency_hz", "atom.lines")),
            dipole_moment=float(_req(ln, "dipole_moment_cm", "atom.lines")),
            linewidth=hz(float(ln.get("linewidth_hz", 0.0))),
        ))
    return AtomSpecies(
        mass=float(_req(d, "mass_kg", "atom")),
        scattering_length=float(_req(d, "scattering_length_m", "atom")),
        lines=lines,
        three_body_constant=float(d.get("three_body_constant_m6_per_s", 0.0)),
        name=d.get("name", ""),
    )


def _wall(d: Optional[dict]):
    if d is None:
        return IdealBox()
    model = d.get("model", "box")
    if model == "box":
        return IdealBox(float(d.get("wall_height_mu0", 100.0)))
    if model == "tanh":
        return TanhWall(float(d.get("steepness", 200.0)),
                        depth=d.get("depth_joule"), depth_mu0=d.get("depth_mu0"))
    if model == "trapezoid":
        return Trapezoid(float(_req(d, "steepness", "trap.wall")),
                         float(_req(d, "reference_wavenumber_per_m", "trap.wall")),
                         depth=d.get("depth_joule"), depth_mu0=d.get("depth_mu0"))
    raise ConfigError(f"unknown wall model {model!r}")


def _trap(d: dict, species: AtomSpecies) -> TrapConfig:
    length = float(_req(d, "length_m", "trap"))
    n0 = float(_req(d, "atom_number", "trap"))
    given = [k for k in ("transverse_trap_frequency_hz", "effective_area_m2",
                         "peak_density_per_m3") if k in d]
    if len(given) != 1:
        raise ConfigError("trap needs exactly one of transverse_trap_frequency_hz, "
                          "effective_area_m2, peak_density_per_m3")
    w = area = None
    if "transverse_trap_frequency_hz" in d:
        w = hz(float(d["transverse_trap_frequency_hz"]))
    elif "effective_area_m2" in d:
        area = float(d["effective_area_m2"])
    else:
        w = transverse_frequency_for_density(species, n0 / length, float(d["peak_density_per_m3"]))
    return TrapConfig(length, n0, w, area, _wall(d.get("wall")))


def _drive(d: dict, cav: dict) -> NamedDrive:
    name = _req(d, "name", "drives[]")
    coupled = d.get("coupled_lines")
    cavity = CavityConfig(
        cavity_length=float(_req(cav, "cavity_length_m", "cavity")),
        mode_area=float(_req(cav, "mode_area_m2", "cavity")),
        atomic_detuning=hz(float(_req(d, "atomic_detuning_hz", f"drives[{name}]"))),
        reference_line=d.get("reference_line", 0),
        coupled_lines=tuple(coupled) if coupled else None,
        mode_index=d.get("mode_index"),
        pump_detuning=hz(float(cav.get("pump_detuning_hz", 0.0))),
    )
    drive = DriveConfig(
        mean_photon_number=float(d.get("mean_photon_number", 0.0)),
        modulation_amplitude=float(d.get("modulation_amplitude", 1.0)),
        modulation_frequency=hz(float(d.get("modulation_frequency_hz", 0.0))),
        duration=float(d.get("duration_s", 1.0)),
    )
    return NamedDrive(name, cavity, drive, dict(d.get("target", {})))


def config_from_dict(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict) or not d:
        raise ConfigError("empty configuration")
    for k in REQUIRED_KEYS:
        _req(d, k, "config")
    species = _species(d["atom"])
    trap = _trap(d["trap"], species)
    cav = d["cavity"]
    drives = {}
    for item in d.get("drives", []):
        nd = _drive(item, cav)
        drives[nd.name] = nd
    g = d.get("grid", {})
    grid = GridSettings(
        points=int(g.get("points", 4096)),
        domain_factor=float(g.get("domain_factor", 1.2)),
        dtau=float(g.get("dtau", 1e-3)),
        tolerance=float(g.get("tolerance", 1e-10)),
        check_every=int(g.get("check_every", 100)),
    )
    return ExperimentConfig(
        species=species, trap=trap,
        cavity_length=float(_req(cav, "cavity_length_m", "cavity")),
        mode_area=float(_req(cav, "mode_area_m2", "cavity")),
        pump_detuning=hz(float(cav.get("pump_detuning_hz", 0.0))),
        drives=drives, protocol=dict(d.get("protocol", {})), grid=grid, raw=d,
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not text.strip():
        raise ConfigError("empty configuration")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    return config_from_dict(data)


def preset_dict(name: str = "rb87_paper") -> dict:
    text = resources.files("qpcavity").joinpath("data", f"{name}.json").read_text()
    return json.loads(text)


def load_preset(name: str = "rb87_paper") -> ExperimentConfig:
    return config_from_dict(preset_dict(name))
