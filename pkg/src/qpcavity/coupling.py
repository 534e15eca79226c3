"""Driving and back-action coefficients.

``generic_coefficients`` evaluates the moment integrals of an oscillating
potential against sampled modes; ``box_coefficients`` gives the flat-box
closed forms.  Barred (rotating-wave) coefficients keep only the Fourier
component of the drive's time factor that resonates with each process:
cos contributes 1/2 everywhere, sin contributes -i/2 to P and L and +i/2 to
N and M.  O is reported as the bare amplitude integral.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, GridMismatch, PhysicsWarning
from .ground import GroundState
from .modes import Mode, bogoliubov_coefficients, dispersion
from .params import (
    HBAR,
    AtomSpecies,
    CavityConfig,
    DerivedScales,
    DriveConfig,
    cavity_mode_number,
    cavity_mode_profile,
    dispersive_coupling,
)

GENERIC, BOX = "GenericQuadrature", "BoxClosedForm"
#: a process is resonant when |detuning| * duration is below this (rad)
RWA_PHASE = 0.1
#: max dV / mu0 above which the light potential is no longer a small perturbation
PERTURBATIVE_LIMIT = 0.1

_RWA = {
    "cos": {"P": 0.5, "N": 0.5, "M": 0.5, "L": 0.5},
    "sin": {"P": -0.5j, "N": 0.5j, "M": 0.5j, "L": -0.5j},
}


@dataclass(frozen=True)
class PotentialDrive:
    """Oscillating potential V_osc(z) * T(t) with T = cos or sin at ``frequency``.

    ``profile`` is the spatial amplitude of V_osc in J on the ground grid and
    ``delta_mu`` the matching chemical-potential amplitude.
    """

    kind: str
    profile: np.ndarray
    delta_mu: float
    time_factor: str
    frequency: float
    params: dict = field(default_factory=dict)

    @property
    def effective(self) -> np.ndarray:
        return self.profile - self.delta_mu


@dataclass(frozen=True)
class DrivingCoefficients:
    """P, O, N per mode and M, L per ordered pair (index arrays follow ``indices``)."""

    indices: tuple
    P: np.ndarray
    O: np.ndarray
    N: np.ndarray
    M: np.ndarray
    L: np.ndarray
    provenance: str

    def _i(self, n):
        return self.indices.index(n)

    def get(self, family: str, n: int, l: Optional[int] = None) -> complex:
        arr = getattr(self, family)
        if family in ("M", "L"):
            return complex(arr[self._i(n), self._i(l)])
        return complex(arr[self._i(n)])

    def rows(self):
        """Flat records (n, l, family, real, imag, units)."""
        out = []
        for fam in ("P", "O", "N"):
            for n, val in zip(self.indices, getattr(self, fam)):
                out.append((n, "", fam, float(np.real(val)), float(np.imag(val)), "J"))
        for fam in ("M", "L"):
            arr = getattr(self, fam)
            for a, n in enumerate(self.indices):
                for b, l in enumerate(self.indices):
                    if n > l:
                        out.append((n, l, fam, float(np.real(arr[a, b])),
                                    float(np.imag(arr[a, b])), "J"))
        return out


@dataclass(frozen=True)
class BackAction:
    indices: tuple
    kappa: np.ndarray
    theta: np.ndarray
    kappa_bar: float

    def get(self, n: int) -> float:
        return float(self.kappa[self.indices.index(n)])


# ---------------------------------------------------------------- drives

def cavity_intensity_drive(cavity: CavityConfig, species: AtomSpecies, drive: DriveConfig,
                           ground: GroundState) -> PotentialDrive:
    """V_osc = hbar (sum g^2/Delta) f_cav^2 N_ph0 eta, time factor cos(omega_m t)."""
    C = dispersive_coupling(cavity, species)
    f2 = cavity_mode_profile(ground.z_m, cavity, species, ground.scales.length) ** 2
    prof = HBAR * C * drive.mean_photon_number * drive.modulation_amplitude * f2
    dmu = float(np.sum(ground.density_m * prof) * ground.dz_m)
    return PotentialDrive("CavityIntensity", prof, dmu, "cos", drive.modulation_frequency,
                          {"coupling": C, "n_cav": cavity_mode_number(cavity, species,
                                                                      ground.scales.length)})


def force_gradient_drive(G0: float, Omega: float, ground: GroundState) -> PotentialDrive:
    """V_osc = -G0 z^2, time factor sin(Omega t)."""
    z = ground.z_m
    prof = -G0 * z**2
    dmu = float(np.sum(ground.density_m * prof) * ground.dz_m)
    return PotentialDrive("ForceGradient", prof, dmu, "sin", Omega, {"G0": G0})


def oscillating_potential(kind: str, ground: GroundState, **kw) -> PotentialDrive:
    if kind in ("cavity", "CavityIntensity"):
        return cavity_intensity_drive(kw["cavity"], kw["species"], kw["drive"], ground)
    if kind in ("force_gradient", "ForceGradient"):
        return force_gradient_drive(kw["G0"], kw["Omega"], ground)
    raise ConfigError(f"unknown drive kind {kind!r}")


# ---------------------------------------------------------------- quadrature

def _stack(modes: Sequence[Mode], ground: GroundState):
    for m in modes:
        if not m.sampled:
            raise ValueError(f"mode {m.index} is not sampled")
        if len(m.u) != ground.grid.points:
            raise GridMismatch(f"mode {m.index} not on the ground-state grid")
    U = np.array([m.u for m in modes])
    V = np.array([m.v for m in modes])
    return U, V


def generic_coefficients(pdrive: PotentialDrive, modes: Sequence[Mode],
                         ground: GroundState) -> DrivingCoefficients:
    if len(pdrive.profile) != ground.grid.points:
        raise GridMismatch("drive profile not on the ground-state grid")
    U, V = _stack(modes, ground)
    w = pdrive.effective * ground.dz_m
    psi = ground.psi_m
    rwa = _RWA[pdrive.time_factor]
    n0 = ground.scales.atom_number
    P = rwa["P"] * math.sqrt(n0) * ((U + V) @ (w * psi))
    O = (np.abs(U) ** 2 + np.abs(V) ** 2) @ w
    N = rwa["N"] * ((np.conj(U) * np.conj(V)) @ w)
    M = rwa["M"] * ((np.conj(U) * w) @ U.T + (np.conj(V) * w) @ V.T)
    L = rwa["L"] * ((U * w) @ V.T + (V * w) @ U.T)
    return DrivingCoefficients(tuple(m.index for m in modes), P, O, N, M, L, GENERIC)


# ---------------------------------------------------------------- closed forms

def kappa_bar(cavity: CavityConfig, species: AtomSpecies, photon_number: float) -> float:
    """hbar (sum g^2/Delta) N_ph0 / 4 (J)."""
    return HBAR * dispersive_coupling(cavity, species) * photon_number / 4


def box_coefficients(cavity: CavityConfig, species: AtomSpecies, drive: DriveConfig,
                     indices: Sequence[int], scales: DerivedScales) -> DrivingCoefficients:
    """Flat-box closed forms with the sigma factors of each mode."""
    idx = tuple(int(n) for n in indices)
    nc = cavity_mode_number(cavity, species, scales.length)
    kb = kappa_bar(cavity, species, drive.mean_photon_number)
    eta = drive.modulation_amplitude
    n_arr = np.array(idx)
    _, s, _ = dispersion(n_arr, scales)
    s = np.atleast_1d(s)
    P = np.where(n_arr == 2 * nc, -(eta / 2) / s * kb * math.sqrt(2 * scales.atom_number), 0.0)
    O = np.zeros(len(idx))  # not needed downstream; left to the quadrature
    N = np.where(n_arr == nc, -(eta / 8) * (s**-2 - s**2) * kb, 0.0)
    sel = ((n_arr[:, None] - n_arr[None, :]) == 2 * nc).astype(float) + \
          ((n_arr[:, None] + n_arr[None, :]) == 2 * nc).astype(float)
    sel += ((n_arr[None, :] - n_arr[:, None]) == 2 * nc)
    np.fill_diagonal(sel, 0.0)
    sel = np.minimum(sel, 2.0)
    inv = 1 / s
    M = -(eta / 4) * (np.outer(inv, inv) + np.outer(s, s)) * kb * sel
    L = -(eta / 4) * (np.outer(inv, inv) - np.outer(s, s)) * kb * sel
    return DrivingCoefficients(idx, P.astype(complex), O.astype(complex), N.astype(complex),
                               M.astype(complex), L.astype(complex), BOX)


def kappa(cavity: CavityConfig, species: AtomSpecies, photon_number: float,
          modes: Sequence, ground: Optional[GroundState] = None,
          scales: Optional[DerivedScales] = None) -> BackAction:
    """Optomechanical coupling kappa_n, theta_n.

    With ``ground`` the overlap integral is evaluated on the sampled modes;
    otherwise the flat-box selection rule is used (``modes`` may then be
    plain indices).
    """
    C = dispersive_coupling(cavity, species)
    if ground is None:
        if scales is None:
            raise ValueError("closed form needs scales")
        idx = tuple(int(getattr(m, "index", m)) for m in modes)
        nc = cavity_mode_number(cavity, species, scales.length)
        _, s, _ = dispersion(np.array(idx), scales)
        amp = -HBAR * C * math.sqrt(scales.atom_number * photon_number) / (2 * math.sqrt(2))
        k = np.where(np.array(idx) == 2 * nc, amp / np.atleast_1d(s), 0.0)
        return BackAction(idx, k, np.zeros(len(idx)), HBAR * C * photon_number / 4)
    sc = ground.scales
    U, V = _stack(modes, ground)
    f2 = cavity_mode_profile(ground.z_m, cavity, species, sc.length) ** 2
    w = f2 * ground.psi_m * ground.dz_m
    vals = HBAR * C * math.sqrt(sc.atom_number * photon_number) * ((U + V) @ w)
    return _back_action(tuple(m.index for m in modes), vals, HBAR * C * photon_number / 4)


def _back_action(idx, vals, kb):
    vals = np.asarray(vals, dtype=complex)
    real = np.abs(vals.imag) <= 1e-12 * np.maximum(np.abs(vals), 1e-300)
    kap = np.where(real, vals.real, np.abs(vals))
    theta = np.where(real, 0.0, np.angle(vals))
    return BackAction(idx, kap, theta, kb)


def trapezoid_kappa(cavity_wavenumber: float, couplings: float, atom_number: float,
                    photon_number: float, samples, z, length: float, indices) -> BackAction:
    """kappa_n for sampled toy-model modes (v = 0) and a flat condensate 1/sqrt(L).

    ``couplings`` is sum g^2/Delta; ``samples`` holds u_n(z) rows on points z.
    The cavity profile uses the optical wavenumber as given (not rounded).
    """
    z = np.asarray(z)
    dz = z[1] - z[0]
    inside = np.abs(z) <= length / 2
    psi0 = np.where(inside, 1 / math.sqrt(length), 0.0)
    f2 = np.sin(cavity_wavenumber * (z + length / 2)) ** 2
    vals = HBAR * couplings * math.sqrt(atom_number * photon_number) * \
        (np.asarray(samples) @ (f2 * psi0 * dz))
    return _back_action(tuple(indices), vals, HBAR * couplings * photon_number / 4)


# ---------------------------------------------------------------- resonances

def _process_list(freqs: dict):
    procs = []
    idx = sorted(freqs)
    for n in idx:
        procs.append(("P", (n,), freqs[n]))
        procs.append(("N", (n,), 2 * freqs[n]))
    for a, n in enumerate(idx):
        for l in idx[:a]:
            hi, lo = (n, l) if freqs[n] >= freqs[l] else (l, n)
            procs.append(("M", (hi, lo), freqs[hi] - freqs[lo]))
            procs.append(("L", (n, l), freqs[n] + freqs[l]))
    return procs


def resonance_audit(omega_m: float, modes, tol_rel: float = 1e-3,
                    duration: Optional[float] = None, scales: Optional[DerivedScales] = None,
                    n_cav: Optional[int] = None) -> dict:
    """Processes resonant with a drive at ``omega_m`` and third-mode hazards.

    ``modes`` is a sequence of Mode objects or a mapping index -> omega.
    With ``duration`` the criterion is |detuning| * duration < RWA_PHASE,
    otherwise |detuning| <= tol_rel * omega_m.  A hazard is raised when a
    resonant M (L) process on (n, l) coincides with direct driving of mode
    n - l (n + l): that mode is evaluated with ``scales`` and must resonate
    with the same drive (and equal 2 n_cav if given).
    """
    if isinstance(modes, dict):
        freqs = {int(k): float(v) for k, v in modes.items()}
    else:
        freqs = {m.index: m.frequency for m in modes}

    def hit(w):
        det = w - omega_m
        if duration is not None:
            return abs(det) * duration < RWA_PHASE
        return abs(det) <= tol_rel * abs(omega_m)

    resonant, hazards = [], []
    for fam, ms, w in _process_list(freqs):
        if hit(w):
            resonant.append({"process": fam, "modes": list(ms), "detuning": w - omega_m})
            if fam in ("M", "L") and scales is not None:
                third = ms[0] - ms[1] if fam == "M" else ms[0] + ms[1]
                if third >= 1 and (n_cav is None or third == 2 * n_cav):
                    w3 = freqs.get(third)
                    if w3 is None:
                        w3 = dispersion(third, scales)[2]
                    if hit(w3):
                        hazards.append({"process": fam, "modes": list(ms), "driven_mode": third,
                                        "message": f"drive also displaces mode {third} directly"})
    return {"omega_m": omega_m, "resonant": resonant, "hazards": hazards}


# ---------------------------------------------------------------- budgets

def drive_budget(target: dict, duration: float, cavity: CavityConfig, species: AtomSpecies,
                 scales: DerivedScales, eta: float = 1.0, n_high: Optional[int] = None) -> dict:
    """Photon number needed for a target operation and the light-potential maximum.

    target kinds: {"kind": "displace", "quasiparticles": N, "n": mode}
    (mode defaults to 2 n_cav), {"kind": "swap"|"beam_split", "n_low": l,
    "n_high": h}.  Uses the box closed forms with exact sigma factors.
    """
    C = dispersive_coupling(cavity, species)
    nc = cavity_mode_number(cavity, species, scales.length)
    kb1 = HBAR * abs(C) / 4  # kappa_bar per photon
    kind = target.get("kind")
    out = {"kind": kind, "duration_s": duration, "coupling_per_s": C, "n_cav": nc}
    if kind == "displace":
        n = int(target.get("n", 2 * nc))
        _, s, _ = dispersion(n, scales)
        per = (eta / 2) / s * kb1 * math.sqrt(2 * scales.atom_number)
        nph = math.sqrt(target["quasiparticles"]) * HBAR / (duration * per)
        out.update(mode=n, sigma=s)
    elif kind in ("swap", "beam_split"):
        lo = int(target["n_low"])
        hi = int(target.get("n_high") or n_high or 0)
        if hi < 1:
            raise ConfigError("swap budget needs n_high")
        _, sl, _ = dispersion(lo, scales)
        _, sh, _ = dispersion(hi, scales)
        per = (eta / 4) * (1 / (sl * sh) + sl * sh) * kb1
        angle = math.pi / 2 if kind == "swap" else math.pi / 4
        nph = angle * HBAR / (duration * per)
        alpha = bogoliubov_coefficients(sl)[0]
        out.update(n_low=lo, n_high=hi, alpha_low=float(alpha),
                   selection_offset=int(hi - lo - 2 * nc))
    else:
        raise ConfigError(f"unknown budget target {kind!r}")
    max_dv = HBAR * abs(C) * nph / scales.mu0
    out.update(mean_photon_number=nph, max_dV_over_mu0=max_dv)
    if max_dv > PERTURBATIVE_LIMIT:
        warnings.warn(f"light potential {max_dv:.3g} mu0 is not a small perturbation",
                      PhysicsWarning, stacklevel=2)
    return out


def trapezoid_kappa_scan(model, modes, cavity: CavityConfig, species: AtomSpecies,
                         atom_number: float, photon_number: float,
                         points: int = 1 << 16, tail_scales: float = 30.0) -> BackAction:
    """kappa_n over toy-model modes with the optical (non-rounded) cavity wavenumber."""
    from .params import cavity_wavenumber
    from .trapezoid import sample_mode

    half = model.length / 2 + tail_scales * model.scale
    z = np.linspace(-half, half, points)
    samples = np.array([sample_mode(m, model, z) for m in modes])
    return trapezoid_kappa(cavity_wavenumber(cavity, species), dispersive_coupling(cavity, species),
                           atom_number, photon_number, samples, z, model.length,
                           [m.index for m in modes])
