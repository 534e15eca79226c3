"""Gaussian quasiparticle states, resonant operations and metrology bounds.

Quadratures per mode are X = b + b^dag and P = i(b^dag - b), interleaved as
(X_1, P_1, X_2, P_2, ...); the vacuum has covariance identity and
[X, P] = 2i.  Every operation is given by its mode map b' = U b U^dag in
the form b' = A b + B b^dag + c and acts on (d, Sigma) through the real
symplectic matrix built from (A, B).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, PhysicsWarning, UnknownMode
from .modes import dispersion
from .params import HBAR, DerivedScales

PHYSICALITY_TOL = 1e-9


# ---------------------------------------------------------------- states

@dataclass(frozen=True)
class GaussianState:
    mode_ids: tuple
    d: np.ndarray
    sigma: np.ndarray

    @classmethod
    def vacuum(cls, mode_ids: Sequence) -> "GaussianState":
        m = len(mode_ids)
        return cls(tuple(mode_ids), np.zeros(2 * m), np.eye(2 * m))

    @classmethod
    def coherent(cls, mode_ids: Sequence, amplitudes: dict) -> "GaussianState":
        """Coherent state with <b_i> = amplitudes[i] (missing modes in vacuum)."""
        s = cls.vacuum(mode_ids)
        d = s.d.copy()
        for mid, a in amplitudes.items():
            j = s.slot(mid)
            d[2 * j] = 2 * complex(a).real
            d[2 * j + 1] = 2 * complex(a).imag
        return cls(s.mode_ids, d, s.sigma)

    def slot(self, mode_id) -> int:
        try:
            return self.mode_ids.index(mode_id)
        except ValueError:
            raise UnknownMode(f"mode {mode_id!r} not in state {self.mode_ids}")

    def amplitude(self, mode_id) -> complex:
        j = self.slot(mode_id)
        return complex(self.d[2 * j], self.d[2 * j + 1]) / 2

    def mean_number(self, mode_id) -> float:
        j = self.slot(mode_id)
        x, p = self.d[2 * j], self.d[2 * j + 1]
        return float((x * x + p * p + self.sigma[2 * j, 2 * j]
                      + self.sigma[2 * j + 1, 2 * j + 1] - 2) / 4)

    def mean_numbers(self) -> dict:
        return {m: self.mean_number(m) for m in self.mode_ids}

    def total_number(self) -> float:
        return float(sum(self.mean_numbers().values()))

    def reduced(self, mode_ids: Sequence) -> "GaussianState":
        idx = []
        for m in mode_ids:
            j = self.slot(m)
            idx += [2 * j, 2 * j + 1]
        return GaussianState(tuple(mode_ids), self.d[idx], self.sigma[np.ix_(idx, idx)])

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        if not np.allclose(self.sigma, self.sigma.T, atol=tol):
            return False
        herm = self.sigma + 1j * symplectic_form(len(self.mode_ids))
        return bool(np.min(np.linalg.eigvalsh(herm)) >= -tol)

    def to_dict(self) -> dict:
        return {"mode_ids": list(self.mode_ids), "d": self.d.tolist(),
                "sigma": self.sigma.tolist(), "mean_numbers": list(self.mean_numbers().values())}


def symplectic_form(m: int) -> np.ndarray:
    return np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_from_modes(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real 2M x 2M matrix of b' = A b + B b^dag in the interleaved X, P basis."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    m = A.shape[0]
    cX = (A + B) / 2        # coefficient of X in b'
    cP = 1j * (A - B) / 2   # coefficient of P in b'
    S = np.empty((2 * m, 2 * m))
    S[0::2, 0::2] = 2 * cX.real
    S[0::2, 1::2] = 2 * cP.real
    S[1::2, 0::2] = 2 * cX.imag
    S[1::2, 1::2] = 2 * cP.imag
    return S


def _embed(state: GaussianState, targets: Sequence, S_local: np.ndarray, shift=None):
    m = len(state.mode_ids)
    idx = []
    for t in targets:
        j = state.slot(t)
        idx += [2 * j, 2 * j + 1]
    S = np.eye(2 * m)
    S[np.ix_(idx, idx)] = S_local
    d = S @ state.d
    if shift is not None:
        d[idx] += shift
    sig = S @ state.sigma @ S.T
    return GaussianState(state.mode_ids, d, (sig + sig.T) / 2), S


# ---------------------------------------------------------------- maps

def beam_splitter_matrix(M: complex) -> np.ndarray:
    r, th = abs(M), np.angle(M)
    A = np.array([[math.cos(r), -1j * np.exp(1j * th) * math.sin(r)],
                  [-1j * np.exp(-1j * th) * math.sin(r), math.cos(r)]])
    return symplectic_from_modes(A, np.zeros((2, 2)))


def squeeze_single_matrix(N: complex) -> np.ndarray:
    """b -> cosh r b - i e^{i phi} sinh r b^dag with N = r e^{i phi}."""
    r, ph = abs(N), np.angle(N)
    return symplectic_from_modes(np.array([[math.cosh(r)]]),
                                 np.array([[-1j * np.exp(1j * ph) * math.sinh(r)]]))


def squeeze_two_matrix(L: complex) -> np.ndarray:
    """b_n -> cosh(r) b_n - i e^{-i phi} sinh(r) b_l^dag with r = |L|/2.

    The half comes from the 1/2 in front of the generator
    (L b_n b_l + L* b_n^dag b_l^dag).
    """
    r, ph = abs(L) / 2, np.angle(L)
    c, s = math.cosh(r), -1j * np.exp(-1j * ph) * math.sinh(r)
    A = np.diag([c, c]).astype(complex)
    B = np.array([[0, s], [s, 0]])
    return symplectic_from_modes(A, B)


def phase_matrix(theta: float) -> np.ndarray:
    return symplectic_from_modes(np.array([[np.exp(-1j * theta)]]), np.zeros((1, 1)))


def apply_beam_splitter(state: GaussianState, n, l, M: complex) -> GaussianState:
    return _embed(state, (n, l), beam_splitter_matrix(M))[0]


def apply_displacement(state: GaussianState, n, P: complex) -> GaussianState:
    """b -> b - i P^*: mean number grows by |P|^2 from vacuum."""
    c = -1j * np.conj(complex(P))
    return _embed(state, (n,), np.eye(2), np.array([2 * c.real, 2 * c.imag]))[0]


def apply_squeeze_single(state: GaussianState, n, N: complex) -> GaussianState:
    return _embed(state, (n,), squeeze_single_matrix(N))[0]


def apply_squeeze_two(state: GaussianState, n, l, L: complex) -> GaussianState:
    return _embed(state, (n, l), squeeze_two_matrix(L))[0]


def apply_free_phase(state: GaussianState, n, theta: float) -> GaussianState:
    return _embed(state, (n,), phase_matrix(theta))[0]


def qnd_matrix(chi: float) -> np.ndarray:
    """Pulse exp(-i chi X_c X_b) on (cavity, mode): P_c -= 2 chi X_b, P_b -= 2 chi X_c."""
    S = np.eye(4)
    S[1, 2] = -2 * chi
    S[3, 0] = -2 * chi
    return S


def apply_qnd(state: GaussianState, cavity, mode, chi: float) -> GaussianState:
    """Linearised readout pulse; the constant sqrt(N_ph) part only shifts P_b."""
    return _embed(state, (cavity, mode), qnd_matrix(chi))[0]


# ---------------------------------------------------------------- sequences

KINDS = ("BeamSplit", "Displace", "Squeeze1", "Squeeze2", "FreePhase")


@dataclass(frozen=True)
class OperationSpec:
    kind: str
    modes: tuple
    parameter: complex
    duration: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown operation {self.kind!r}")
        need = 2 if self.kind in ("BeamSplit", "Squeeze2") else 1
        if len(self.modes) != need:
            raise ConfigError(f"{self.kind} acts on {need} mode(s)")


def apply_operation(state: GaussianState, op: OperationSpec) -> GaussianState:
    k, m, p = op.kind, op.modes, op.parameter
    if k == "BeamSplit":
        return apply_beam_splitter(state, m[0], m[1], p)
    if k == "Displace":
        return apply_displacement(state, m[0], p)
    if k == "Squeeze1":
        return apply_squeeze_single(state, m[0], p)
    if k == "Squeeze2":
        return apply_squeeze_two(state, m[0], m[1], p)
    return apply_free_phase(state, m[0], float(np.real(p)))


def protocol_run(sequence: Sequence[OperationSpec], state: GaussianState,
                 audits: Sequence[dict] = ()) -> list:
    """Fold the operations over ``state``; returns [initial, after op 1, ...]."""
    for rep in audits:
        for h in rep.get("hazards", []):
            warnings.warn(h.get("message", str(h)), PhysicsWarning, stacklevel=2)
    traj = [state]
    for op in sequence:
        state = apply_operation(state, op)
        traj.append(state)
    return traj


def total_duration(sequence: Sequence[OperationSpec]) -> float:
    return float(sum(op.duration for op in sequence))


def load_protocol(path) -> list:
    """Steps {op, modes, parameter ([re, im] or number), duration_s}."""
    with open(path) as fh:
        steps = json.load(fh)
    out = []
    for s in steps:
        p = s.get("parameter", 0.0)
        p = complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p)
        out.append(OperationSpec(s["op"], tuple(s["modes"]), p, float(s.get("duration_s", 0.0))))
    return out


def mzi_sequence(n, l, theta: float, bs: complex = math.pi / 4) -> list:
    return [OperationSpec("BeamSplit", (n, l), bs),
            OperationSpec("FreePhase", (n,), theta),
            OperationSpec("BeamSplit", (n, l), bs)]


def mzi_run(state: GaussianState, theta: float, n=None, l=None, bs: complex = math.pi / 4):
    """Beam split, phase theta on mode n, beam split.

    Returns (output state, phase bound 1/|alpha|) with alpha the coherent
    amplitude of mode n at the input (bound reached at theta = pi/2).
    """
    n = state.mode_ids[0] if n is None else n
    l = state.mode_ids[1] if l is None else l
    out = protocol_run(mzi_sequence(n, l, theta, bs), state)[-1]
    a = abs(state.amplitude(n))
    return out, (1 / a if a > 0 else math.inf)


def swap_displace_swap(n_low, n_high, P: complex) -> list:
    return [OperationSpec("BeamSplit", (n_low, n_high), math.pi / 2),
            OperationSpec("Displace", (n_low,), P),
            OperationSpec("BeamSplit", (n_low, n_high), math.pi / 2)]


# ---------------------------------------------------------------- readout

def pulsed_readout(kappa: float, dt: float, state: GaussianState, mode, photon_number: float,
                   phase: float = 0.0, omega: Optional[float] = None) -> dict:
    """Mean shift of the cavity momentum quadrature and the derived figures.

    ``phase`` is omega t_m - theta (zero at the stroboscopic instants).
    """
    if omega is not None and dt * omega > 0.1:
        warnings.warn("readout pulse not short compared with the mode period",
                      PhysicsWarning, stacklevel=2)
    quad = 2 * (state.amplitude(mode) * np.exp(-1j * phase)).real
    dP = -(2 * kappa / HBAR) * quad * dt
    dphi = 1 / math.sqrt(photon_number)
    phi = dP / (2 * math.sqrt(photon_number))
    return {"delta_P_L": dP, "phi_ba": phi, "delta_phi": dphi,
            "snr": abs(phi) / dphi, "chi": kappa * dt / HBAR}


def readout_threshold(kappa: float) -> float:
    """Pulse duration hbar/(2|kappa|) giving SNR 1 for <b> = 1."""
    return HBAR / (2 * abs(kappa))


def readout_state(chi: float, displacement: float) -> GaussianState:
    """Reduced cavity state after the pulse for mode amplitude <b> = displacement."""
    s = GaussianState.coherent(("cavity", "mode"), {"mode": displacement})
    return apply_qnd(s, "cavity", "mode", chi).reduced(("cavity",))


def qfi_displacement(chi: float) -> float:
    return 16 * chi * chi / (1 + 4 * chi * chi)


def cramer_rao(chi: float, n_meas: float = 1) -> float:
    """(Delta P)^2 >= (1/N_meas)(1/4 + 1/(16 chi^2)); infinite at chi = 0."""
    if n_meas < 1:
        raise ValueError("n_meas must be >= 1")
    if chi == 0:
        warnings.warn("chi = 0 carries no information: variance bound is infinite",
                      PhysicsWarning, stacklevel=2)
        return math.inf
    return (0.25 + 1 / (16 * chi * chi)) / n_meas


def displacement_qfi(dd: np.ndarray, sigma: np.ndarray) -> float:
    """QFI of a parameter entering only the mean: dd^T Sigma^-1 dd."""
    dd = np.asarray(dd, dtype=float)
    return float(dd @ np.linalg.solve(sigma, dd))


# ---------------------------------------------------------------- sensing

@dataclass(frozen=True)
class SensitivityReport:
    quantity: str
    value: float
    units: str
    inputs: dict
    assumptions: tuple = ()
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("sensitivity bound must be positive")

    def to_dict(self) -> dict:
        return {"quantity": self.quantity, "value": self.value, "units": self.units,
                "inputs": self.inputs, "assumptions": list(self.assumptions),
                **self.extras}


def scattering_length_precision(omega_low: float, t_int: float,
                                quasiparticles: float) -> SensitivityReport:
    """Relative bound 2/(omega t sqrt(N)) from omega proportional to sqrt(a_sc)."""
    val = 2 / (omega_low * t_int * math.sqrt(quasiparticles))
    return SensitivityReport("scattering_length_relative_precision", val, "1",
                             {"omega_low": omega_low, "t_int": t_int, "N_high": quasiparticles},
                             ("omega_low proportional to sqrt(a_sc)",
                              "high mode frequency unaffected",
                              "MZI bound 1/|alpha| at theta = pi/2"))


def force_gradient_pi(G0: float, n: int, scales: DerivedScales) -> complex:
    """Pi_n = i sqrt(2 N0) G0 / (sigma_n k_n^2), zero for odd n."""
    if n % 2:
        return 0j
    k, s, _ = dispersion(n, scales)
    return 1j * math.sqrt(2 * scales.atom_number) * G0 / (s * k * k)


def force_gradient_amplitude(G0: float, t: float, n: int, scales: DerivedScales) -> complex:
    return force_gradient_pi(G0, n, scales) * t / HBAR


def min_force_gradient(scales: DerivedScales, t_int: float, n_low: int = 20,
                       n_meas: float = 1) -> SensitivityReport:
    """Gradient creating one quasiparticle in mode n_low after t_int.

    Inverts |Pi t / hbar| = 1 exactly; the phonon-limit closed form
    (m w)^{3/2} / (t sqrt(2 pi hbar N0 rho0 a)) is reported alongside.
    Repetitions scale the bound by 1/sqrt(n_meas).
    """
    if n_low % 2:
        raise ValueError("odd modes are not driven by a force gradient")
    k, s, w = dispersion(n_low, scales)
    g1 = s * k * k * HBAR / (t_int * math.sqrt(2 * scales.atom_number))
    phonon = (scales.mass * w) ** 1.5 / (
        t_int * math.sqrt(2 * math.pi * HBAR * scales.atom_number * scales.peak_density
                          * scales.scattering_length))
    g = g1 / math.sqrt(n_meas)
    f1 = math.sqrt(g1 / scales.mass) / (2 * math.pi)
    f = math.sqrt(g / scales.mass) / (2 * math.pi)
    return SensitivityReport(
        "min_force_gradient", g, "N/m",
        {"t_int": t_int, "n_low": n_low, "n_meas": n_meas},
        ("single-quasiparticle readout precision", "Omega resonant with omega_n_low",
         "repetitions reduce the bound as 1/sqrt(n_meas)"),
        {"single_shot_N_per_m": g1, "phonon_limit_N_per_m": phonon,
         "equivalent_frequency_hz": f, "single_shot_frequency_hz": f1},
    )
