"""Backend selection for the hot kernels.

The compiled extension is used when importable; set
``QPCAVITY_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

import numpy as np

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels as _kernels_c
    _BACKENDS["cython"] = _kernels_c
except ImportError:  # pragma: no cover - depends on build
    _kernels_c = None

if os.environ.get("QPCAVITY_PURE_PYTHON") or _kernels_c is None:
    _impl = _kernels_py
else:
    _impl = _kernels_c

BACKEND = _impl.NAME


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Kernel module by name (default: the one selected at import)."""
    if name is None:
        return _impl
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def potential_half_step(psi, V, g, half_dt, f):
    _impl.potential_half_step(psi, V, g, half_dt, f)


def apply_factor_normalize(psi, f, dz):
    return _impl.apply_factor_normalize(psi, f, dz)


def airy_pair(x, backend=None):
    x = _c(x)
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    get_backend(backend).airy_pair(x.ravel(), ai.ravel(), aip.ravel())
    return ai, aip


def spectrum_condition(E, Lt, backend=None):
    E = _c(E)
    out = np.empty_like(E)
    get_backend(backend).spectrum_condition(E.ravel(), float(Lt), out.ravel())
    return out
