"""Pure numpy implementation of the hot kernels (fallback backend)."""
import numpy as np
from scipy.special import airy as _airy

NAME = "python"


def potential_half_step(psi, V, g, half_dt, f):
    """Fill f = exp(-(V + g psi^2) half_dt) and scale psi by it in place."""
    np.multiply(psi, psi, out=f)
    f *= g
    f += V
    f *= -half_dt
    np.exp(f, out=f)
    psi *= f


def apply_factor_normalize(psi, f, dz):
    """psi *= f, then rescale psi to unit norm. Returns the norm before rescaling."""
    psi *= f
    norm = float(np.dot(psi, psi)) * dz
    psi *= 1.0 / np.sqrt(norm)
    return norm


def airy_pair(x, ai, aip):
    a, ap, _, _ = _airy(x)
    ai[:] = a
    aip[:] = ap


def spectrum_condition(E, Lt, out):
    """Trapezoid spectrum condition with the Ai(-E) denominator cleared.

    2 k Ai Ai' cos(kL) + (E Ai^2 - Ai'^2) sin(kL), k = sqrt(E).
    """
    k = np.sqrt(E)
    a, ap, _, _ = _airy(-E)
    out[:] = 2 * k * a * ap * np.cos(k * Lt) + (E * a * a - ap * ap) * np.sin(k * Lt)
