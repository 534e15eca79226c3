"""Quasiparticle cavity optomechanics in a trapped 1D quasi-condensate."""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    GridMismatch,
    MaxIterations,
    PhysicsWarning,
    RegimeViolation,
    UnknownMode,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "GridMismatch",
    "MaxIterations",
    "PhysicsWarning",
    "RegimeViolation",
    "UnknownMode",
    "__version__",
]
