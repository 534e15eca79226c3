"""Exception and warning types shared across the package."""


class QPCavityError(Exception):
    """Base class for all package errors."""


class ConfigError(QPCavityError, ValueError):
    """Invalid or inconsistent configuration."""


class ConvergenceError(QPCavityError, RuntimeError):
    """An iterative solver failed (NaN, overflow, lost bracket)."""


class MaxIterations(ConvergenceError):
    """Iteration budget exhausted before the tolerance was met."""


class RegimeViolation(QPCavityError, ValueError):
    """A closed-form mode was requested outside its validity regime."""


class DomainError(QPCavityError, ValueError):
    """Argument outside the supported domain of a special function."""


class GridMismatch(QPCavityError, ValueError):
    """Sampled arrays live on incompatible grids."""


class UnknownMode(QPCavityError, KeyError):
    """A Gaussian-state operation referenced a mode that is not present."""


class PhysicsWarning(UserWarning):
    """An approximation is being used near or beyond its validity."""
