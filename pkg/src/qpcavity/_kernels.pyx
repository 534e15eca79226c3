# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels; same API as ``_kernels_py``."""
from libc.math cimport exp, sqrt, sin, cos
from scipy.special.cython_special cimport airy as _airy

NAME = "cython"


def potential_half_step(double[::1] psi, const double[::1] V, double g,
                        double half_dt, double[::1] f):
    cdef Py_ssize_t i, n = psi.shape[0]
    cdef double e
    with nogil:
        for i in range(n):
            e = exp(-(V[i] + g * psi[i] * psi[i]) * half_dt)
            f[i] = e
            psi[i] *= e


def apply_factor_normalize(double[::1] psi, const double[::1] f, double dz):
    cdef Py_ssize_t i, n = psi.shape[0]
    cdef double s = 0.0, p, scale
    with nogil:
        for i in range(n):
            p = psi[i] * f[i]
            psi[i] = p
            s += p * p
        s *= dz
        scale = 1.0 / sqrt(s)
        for i in range(n):
            psi[i] *= scale
    return s


def airy_pair(const double[::1] x, double[::1] ai, double[::1] aip):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double a, ap, b, bp
    with nogil:
        for i in range(n):
            _airy(x[i], &a, &ap, &b, &bp)
            ai[i] = a
            aip[i] = ap


def spectrum_condition(const double[::1] E, double Lt, double[::1] out):
    cdef Py_ssize_t i, n = E.shape[0]
    cdef double a, ap, b, bp, k, e
    with nogil:
        for i in range(n):
            e = E[i]
            k = sqrt(e)
            _airy(-e, &a, &ap, &b, &bp)
            out[i] = 2 * k * a * ap * cos(k * Lt) + (e * a * a - ap * ap) * sin(k * Lt)
