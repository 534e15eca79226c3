"""Expected-values table for the Rb-87 worked example and its evaluation.

Each row computes one quantity from an ExperimentConfig and compares it with
the rounded published value.  Tolerance kinds:

``rel``     |x/e - 1| <= tol
``factor``  e/f <= x <= e*f
``range``   lo <= x <= hi
``abs``     |x - e| <= tol

``--tolerance-scale`` multiplies ``rel``/``abs`` tolerances and raises factors
to that power.  A relative slack of 1e-9 keeps values sitting exactly on a
boundary (rounding in the last digit) on the inclusive side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import coupling, damping, dynamics
from .config import ExperimentConfig
from .modes import bogoliubov_coefficients, dispersion, energy_ratio
from .params import cavity_mode_number, rabi_frequency, to_hz

SLACK = 1e-9


@dataclass(frozen=True)
class Row:
    key: str
    criterion: str
    units: str
    expected: float
    kind: str
    tol: tuple
    compute: Callable


def _drive_cavity(cfg, name):
    return cfg.drive(name).cavity


def _n_high(cfg):
    cav = _drive_cavity(cfg, "displacement")
    return 2 * cavity_mode_number(cav, cfg.species, cfg.trap.length)


def _budget(cfg, name, duration=None):
    nd = cfg.drive(name)
    sc = cfg.scales()
    t = nd.target
    dur = nd.drive.duration if duration is None else duration
    if t.get("kind") == "displace":
        target = {"kind": "displace", "quasiparticles": t["quasiparticles"]}
    else:
        lo = int(t["n_low"])
        nc = cavity_mode_number(nd.cavity, cfg.species, sc.length)
        target = {"kind": t["kind"], "n_low": lo, "n_high": lo + 2 * nc}
    return coupling.drive_budget(target, dur, nd.cavity, cfg.species, sc,
                                 eta=nd.drive.modulation_amplitude)


def _swap_duration(cfg):
    return float(cfg.protocol.get("t_bs_budget_s", 0.2))


def _kappa_readout(cfg):
    nd = cfg.drive("readout")
    sc = cfg.scales()
    n = 2 * cavity_mode_number(nd.cavity, cfg.species, sc.length)
    ba = coupling.kappa(nd.cavity, cfg.species, nd.drive.mean_photon_number, [n], scales=sc)
    return ba.get(n)


def _omega_hz(cfg, n):
    return to_hz(dispersion(n, cfg.scales())[2])


def _force(cfg, n_meas=1):
    p = cfg.protocol
    return dynamics.min_force_gradient(cfg.scales(), float(p.get("t_int_s", 0.1)),
                                       int(p.get("n_low_prime", 20)), n_meas)


def _readout_snr(cfg):
    k = _kappa_readout(cfg)
    state = dynamics.GaussianState.coherent(("c",), {"c": 1.0})
    nph = cfg.drive("readout").drive.mean_photon_number
    return dynamics.pulsed_readout(k, dynamics.readout_threshold(k), state, "c", nph)["snr"]


def _mzi(cfg):
    p = cfg.protocol
    w = dispersion(int(p.get("n_low", 50)), cfg.scales())[2]
    return dynamics.scattering_length_precision(w, float(p.get("t_int_s", 0.1)),
                                                float(p.get("probe_quasiparticles", 10))).value


ROWS = [
    Row("healing_length_m", "1", "m", 2.77e-7, "rel", (0.01,),
        lambda c: c.scales().healing_length),
    Row("n_high", "2", "1", 1022.5, "range", (1015, 1030), lambda c: float(_n_high(c))),
    Row("omega_high_hz", "2", "Hz", 15e3, "rel", (0.10,), lambda c: _omega_hz(c, _n_high(c))),
    Row("kinetic_over_interaction_high", "2", "1", 40.0, "rel", (0.15,),
        lambda c: float(energy_ratio(_n_high(c), c.scales()))),
    Row("omega_50_hz", "2", "Hz", 170.0, "rel", (0.10,), lambda c: _omega_hz(c, 50)),
    Row("omega_20_hz", "2", "Hz", 70.0, "rel", (0.10,), lambda c: _omega_hz(c, 20)),
    Row("g0_D2_per_s", "3", "1/s", 1.8e5, "rel", (0.10,),
        lambda c: rabi_frequency(_drive_cavity(c, "displacement"), c.species, "D2")),
    Row("g0_D1_per_s", "3", "1/s", 1.3e5, "rel", (0.10,),
        lambda c: rabi_frequency(_drive_cavity(c, "swap_d1"), c.species, "D1")),
    Row("readout_threshold_s", "4", "s", 8e-7, "rel", (0.30,),
        lambda c: dynamics.readout_threshold(_kappa_readout(c))),
    Row("readout_snr_unit_amplitude", "4", "1", 1.0, "abs", (1e-12,), _readout_snr),
    Row("displacement_photons", "5", "1", 1e3, "factor", (2.0,),
        lambda c: _budget(c, "displacement")["mean_photon_number"]),
    Row("displacement_max_dV_over_mu0", "5", "1", 0.008, "rel", (0.30,),
        lambda c: _budget(c, "displacement")["max_dV_over_mu0"]),
    Row("swap_two_line_photons", "5", "1", 1e5, "factor", (2.0,),
        lambda c: _budget(c, "swap_two_line", _swap_duration(c))["mean_photon_number"]),
    Row("swap_two_line_max_dV_over_mu0", "5", "1", 0.02, "rel", (0.30,),
        lambda c: _budget(c, "swap_two_line", _swap_duration(c))["max_dV_over_mu0"]),
    Row("swap_d1_photons", "5", "1", 4e3, "factor", (2.0,),
        lambda c: _budget(c, "swap_d1", _swap_duration(c))["mean_photon_number"]),
    Row("swap_d1_max_dV_over_mu0", "5", "1", 0.02, "rel", (0.30,),
        lambda c: _budget(c, "swap_d1", _swap_duration(c))["max_dV_over_mu0"]),
    Row("bogoliubov_alpha_50", "5", "1", 1.3, "rel", (0.05,),
        lambda c: float(bogoliubov_coefficients(dispersion(50, c.scales())[1])[0])),
    Row("bogoliubov_alpha_20", "5", "1", 1.8, "rel", (0.05,),
        lambda c: float(bogoliubov_coefficients(dispersion(20, c.scales())[1])[0])),
    Row("scattering_length_precision", "6", "1", 0.006, "rel", (0.30,), _mzi),
    Row("min_force_gradient_N_per_m", "7", "N/m", 1e-23, "factor", (2.0,),
        lambda c: _force(c).value),
    Row("force_equivalent_frequency_hz", "7", "Hz", 1.0, "factor", (2.0,),
        lambda c: _force(c).extras["equivalent_frequency_hz"]),
    Row("force_equivalent_frequency_repeated_hz", "7", "Hz", 0.01, "factor", (2.0,),
        lambda c: _force(c, float(c.protocol.get("repetitions", 1e4)))
        .extras["equivalent_frequency_hz"]),
    Row("gamma_sc_1d_per_s", "8", "1/s", 0.5, "factor", (2.0,),
        lambda c: damping.gamma_sc_1d(c.scales())),
    Row("gamma_3b_rb_per_s", "8", "1/s", 0.2, "rel", (0.20,),
        lambda c: damping.gamma_three_body(c.species, c.scales().peak_density)),
    Row("gamma_3b_yb_per_s", "8", "1/s", 0.1, "rel", (0.20,),
        lambda c: damping.gamma_three_body(
            float(c.protocol.get("yb_three_body_constant_m6_per_s", 4e-42)),
            c.scales().peak_density)),
    Row("protocol_margin_at_half_per_s", "8", "1", 0.25, "abs", (1e-12,),
        lambda c: damping.budget(float(c.protocol.get("total_duration_s", 0.5)), 0.5)
        .margins["gamma_sc_1d"]),
]


def check(value: float, row: Row, scale: float = 1.0) -> bool:
    e = row.expected
    if not math.isfinite(value):
        return False
    if row.kind == "rel":
        return abs(value / e - 1) <= row.tol[0] * scale * (1 + SLACK)
    if row.kind == "abs":
        return abs(value - e) <= row.tol[0] * scale
    if row.kind == "factor":
        f = row.tol[0] ** scale
        return e / f * (1 - SLACK) <= value <= e * f * (1 + SLACK)
    if row.kind == "range":
        return row.tol[0] <= value <= row.tol[1]
    raise ValueError(f"unknown tolerance kind {row.kind!r}")


def evaluate(cfg: ExperimentConfig, scale: float = 1.0, rows=ROWS) -> list:
    out = []
    for r in rows:
        try:
            v = float(r.compute(cfg))
            err = None
        except Exception as exc:  # reported as a failing row
            v, err = math.nan, f"{type(exc).__name__}: {exc}"
        rec = {"key": r.key, "criterion": r.criterion, "units": r.units, "value": v,
               "expected": r.expected, "tolerance": {"kind": r.kind, "values": list(r.tol)},
               "pass": check(v, r, scale)}
        if err:
            rec["error"] = err
        out.append(rec)
    return out
