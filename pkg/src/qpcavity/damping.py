"""Quasiparticle and condensate loss rates and the duration budget."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .params import AtomSpecies, DerivedScales

#: rate * duration above this is flagged
MARGIN_FLAG = 0.5
_SC_PREFACTOR = 72 * math.sqrt(3) * math.log(4 / 3) ** 2


def gamma_sc_1d(scales: DerivedScales, line_density: float | None = None) -> float:
    """Fourth-order 1D damping of high-energy quasiparticles (1/s)."""
    rho = scales.line_density if line_density is None else line_density
    if rho < 0:
        raise ValueError("line density must be >= 0")
    x = rho * scales.scattering_length**2 / scales.transverse_length
    return _SC_PREFACTOR * scales.transverse_frequency * x * x


def gamma_three_body(species_or_D, peak_density: float) -> float:
    """3 D rho0^2 (1/s); accepts a species or the constant D in m^6/s."""
    D = species_or_D.three_body_constant if isinstance(species_or_D, AtomSpecies) \
        else float(species_or_D)
    if peak_density < 0 or D < 0:
        raise ValueError("density and D must be >= 0")
    return 3 * D * peak_density**2


@dataclass(frozen=True)
class DampingReport:
    gamma_sc_1d: float
    gamma_3b: float
    protocol_duration: float
    margins: dict = field(default_factory=dict)
    flags: tuple = ()
    threshold: float = MARGIN_FLAG

    @property
    def ok(self) -> bool:
        return not self.flags

    def to_dict(self) -> dict:
        return {"gamma_sc_1d_per_s": self.gamma_sc_1d, "gamma_3b_per_s": self.gamma_3b,
                "protocol_duration_s": self.protocol_duration, "margins": self.margins,
                "flags": list(self.flags), "threshold": self.threshold}


def budget(duration: float, gamma_sc: float, gamma_3b: float = 0.0,
           threshold: float = MARGIN_FLAG) -> DampingReport:
    """Margins rate * duration; a margin above ``threshold`` is flagged."""
    if duration < 0:
        raise ValueError("duration must be >= 0")
    margins = {"gamma_sc_1d": gamma_sc * duration, "gamma_3b": gamma_3b * duration}
    flags = tuple(k for k, v in margins.items() if v > threshold)
    return DampingReport(gamma_sc, gamma_3b, duration, margins, flags, threshold)


def damping_report(scales: DerivedScales, species: AtomSpecies, duration: float,
                   threshold: float = MARGIN_FLAG) -> DampingReport:
    return budget(duration, gamma_sc_1d(scales),
                  gamma_three_body(species, scales.peak_density), threshold)
