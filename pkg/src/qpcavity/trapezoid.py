"""Trapezoid-well toy model for high-energy modes.

Inside the box the mode is a plane-wave combination, outside it decays as an
Airy function along the linear walls.  Scaled units: z~ = a~^(1/3) z with
a~ = b q^2 / L, E~ = a~^(-2/3) k^2 and k~ = sqrt(E~).

With u_II = sqrt(2/L) (A_c cos(k~(z~+L~/2)) + A_s sin(...)) and left tail
D Ai(-z~ - L~/2 - E~), continuity at both walls gives

    A_c = sqrt(L/2) D Ai(-E~),  A_s = -sqrt(L/2) D Ai'(-E~)/k~,
    C_R = D (cos(k~L~) - Ai'(-E~) sin(k~L~) / (k~ Ai(-E~)))

and the spectrum condition

    2 Ai'(-E~) cos(k~L~) + (E~ Ai(-E~)^2 - Ai'(-E~)^2)/(k~ Ai(-E~)) sin(k~L~) = 0.

Roots are searched with the Ai(-E~) denominator cleared.  Modes are labelled
by node count + 1, so the Airy nodes in the tails are counted too.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .airy import X_MIN, airy
from .errors import ConvergenceError, DomainError
from .params import HBAR

POINTS_PER_ROOT = 32


@dataclass(frozen=True)
class ToyModel:
    steepness: float
    length: float
    reference_wavenumber: float
    mass: float

    @property
    def a_tilde(self) -> float:
        """2 m a / hbar^2 = b q^2 / L (1/m^3)."""
        return self.steepness * self.reference_wavenumber**2 / self.length

    @property
    def scale(self) -> float:
        """a~^(-1/3) in metres."""
        return self.a_tilde ** (-1 / 3)

    @property
    def length_tilde(self) -> float:
        return self.length / self.scale

    @property
    def slope(self) -> float:
        """Wall gradient a in J/m."""
        return HBAR**2 * self.a_tilde / (2 * self.mass)


@dataclass(frozen=True)
class TrapezoidMode:
    index: int
    scaled_energy: float
    A_c: float
    A_s: float
    C_R: float
    normalization: float
    bulk_normalization: float
    steepness: float
    residual: float

    @property
    def k_tilde(self) -> float:
        return math.sqrt(self.scaled_energy)

    def wavenumber(self, model: ToyModel) -> float:
        return self.k_tilde / model.scale


def condition(E, model_or_Lt, backend=None):
    """Cleared spectrum condition 2k Ai Ai' cos(kL) + (E Ai^2 - Ai'^2) sin(kL)."""
    Lt = model_or_Lt.length_tilde if isinstance(model_or_Lt, ToyModel) else float(model_or_Lt)
    E = np.asarray(E, dtype=float)
    if np.any(-E < X_MIN):
        raise DomainError("scaled energy beyond the Airy range")
    out = kernels.spectrum_condition(np.atleast_1d(E), Lt, backend)
    return float(out[0]) if E.ndim == 0 else out.reshape(E.shape)


def trapezoid_spectrum(model: ToyModel, n_min: int, n_max: int, backend=None):
    """Modes n_min..n_max (node count + 1 labelling).

    Sign changes of the cleared condition are bracketed on a grid uniform in
    k~ (``POINTS_PER_ROOT`` points per pi/L~) starting just above zero, then
    polished with Brent's method.
    """
    if n_min < 1 or n_max < n_min:
        raise ValueError("need 1 <= n_min <= n_max")
    Lt = model.length_tilde
    dk = math.pi / (Lt * POINTS_PER_ROOT)
    k_max = (n_max + 2) * math.pi / Lt
    if k_max**2 > -X_MIN:
        raise DomainError("requested modes lie beyond the Airy range")
    k = np.arange(0.5 * dk, k_max + dk, dk)
    F = condition(k**2, Lt, backend)
    s = np.sign(F)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    if len(idx) < n_max:
        raise ConvergenceError(f"only {len(idx)} roots below k~={k_max:.4g}")
    modes = []
    f = lambda kk: condition(kk * kk, Lt, backend)
    for n in range(n_min, n_max + 1):
        i = idx[n - 1]
        kr = brentq(f, k[i], k[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        modes.append(trapezoid_mode(kr * kr, model, index=n))
    return modes


def _region_two_integral(A, B, k, L):
    """int_0^L (A cos kx + B sin kx)^2 dx."""
    t = k * L
    return (A * A * (t / 2 + math.sin(2 * t) / 4) + B * B * (t / 2 - math.sin(2 * t) / 4)
            + A * B * math.sin(t) ** 2) / k


def trapezoid_mode(E: float, model: ToyModel, index: int = 0) -> TrapezoidMode:
    """Coefficients and unit-L2 normalisation of the mode at scaled energy E."""
    Lt = model.length_tilde
    kt = math.sqrt(E)
    ai, aip = airy(-E)
    c, s = math.cos(kt * Lt), math.sin(kt * Lt)
    cr = c - aip * s / (kt * ai)
    # per unit D: region II amplitudes of cos and sin in u = D(ai cos + bs sin)
    bs = -aip / kt
    tail = (aip**2 + E * ai**2) * model.scale  # int_{-E}^inf Ai^2 in metres
    k = kt / model.scale
    inner = _region_two_integral(ai, bs, k, model.length)
    D = 1 / math.sqrt(tail * (1 + cr * cr) + inner)
    bulk = 1 / math.sqrt(inner)
    root = math.sqrt(model.length / 2)
    res = float(condition(E, Lt))
    return TrapezoidMode(index, E, root * D * ai, root * D * bs, D * cr, D, bulk,
                         model.steepness, res)


def sample_mode(mode: TrapezoidMode, model: ToyModel, z) -> np.ndarray:
    """u_n(z) in 1/sqrt(m) on arbitrary points z (metres)."""
    z = np.asarray(z, dtype=float)
    L, ell, E = model.length, model.scale, mode.scaled_energy
    k = math.sqrt(E) / ell
    D = mode.normalization
    u = np.empty_like(z)
    left, right = z < -L / 2, z > L / 2
    mid = ~(left | right)
    ai_l, _ = _airy_clipped(-z[left] / ell - L / (2 * ell) - E)
    ai_r, _ = _airy_clipped(z[right] / ell - L / (2 * ell) - E)
    u[left] = D * ai_l
    u[right] = mode.C_R * ai_r
    x = k * (z[mid] + L / 2)
    u[mid] = math.sqrt(2 / L) * (mode.A_c * np.cos(x) + mode.A_s * np.sin(x))
    return u


def _airy_clipped(x):
    """Airy beyond the table's upper end is below 1e-27; treat it as zero."""
    x = np.asarray(x, dtype=float)
    ai = np.zeros_like(x)
    aip = np.zeros_like(x)
    ok = x <= 20.0
    if np.any(ok):
        ai[ok], aip[ok] = airy(x[ok])
    return ai, aip


def hard_wall_energy(n, model: ToyModel):
    """Infinite-wall limit E~_n = (n pi / L~)^2."""
    return (np.asarray(n) * math.pi / model.length_tilde) ** 2


def write_scan_csv(modes, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "E_tilde", "A_c", "A_s"])
        for m in modes:
            w.writerow([m.index, f"{m.scaled_energy:.17g}", f"{m.A_c:.17g}", f"{m.A_s:.17g}"])
