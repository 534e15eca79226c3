"""Airy functions on the range used by the trapezoid model.

Values come from the Cephes/AMOS routines shipped with scipy (called from the
compiled kernel when available); accuracy on [-60, 20] is below 1e-12
absolute, which the test suite checks against mpmath.
"""
import numpy as np

from . import kernels
from .errors import DomainError

X_MIN, X_MAX = -60.0, 20.0


def airy(x, backend=None):
    """(Ai(x), Ai'(x)) for x in [-60, 20]; scalars in, scalars out."""
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < X_MIN) or np.any(arr > X_MAX):
        raise DomainError(f"Airy argument outside [{X_MIN}, {X_MAX}]")
    ai, aip = kernels.airy_pair(np.atleast_1d(arr), backend)
    if arr.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(arr.shape), aip.reshape(arr.shape)
