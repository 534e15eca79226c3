"""Command-line front end.

Every subcommand takes a config (a JSON path or the name of a bundled
preset), prints a JSON report and writes it to ``--out`` when given.
Exit codes: 0 ok, 1 numerical failure, 2 usage or config error,
3 reproduction mismatch.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import warnings
from importlib import resources

import numpy as np

from . import __version__, coupling, damping, dynamics, modes, reproduce, trapezoid
from .config import ExperimentConfig, load_config, load_preset
from .errors import ConfigError, ConvergenceError, DomainError, QPCavityError, RegimeViolation
from .ground import solve_ground_state
from .params import (
    IdealBox,
    cavity_mode_number,
    cavity_wavenumber,
    derive_scales,
    power_from_photon_number,
    rabi_frequency,
)

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3


# ---------------------------------------------------------------- serialisation

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, floats as %.17g."""
    import json

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return _fmt_float(o)
        return json.dumps(o)

    return enc(_plain(obj), 0) + "\n"


# ---------------------------------------------------------------- helpers

def resolve_config(spec: str) -> ExperimentConfig:
    if os.path.exists(spec):
        return load_config(spec)
    name = os.path.basename(spec)
    name = name[:-5] if name.endswith(".json") else name
    if resources.files("qpcavity").joinpath("data", f"{name}.json").is_file():
        return load_preset(name)
    raise ConfigError(f"no config file or bundled preset named {spec!r}")


def _ground(cfg: ExperimentConfig, wall: str = "config"):
    c = cfg.with_wall(IdealBox()) if wall == "box" else cfg
    sc = c.scales()
    return solve_ground_state(c.trap, sc, cfg.grid.grid(sc), cfg.grid.options())


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([("%.17g" % v) if isinstance(v, float) else v for v in r])


def _classify(n, scales):
    r = float(modes.energy_ratio(n, scales))
    if r < modes.LOW_ENERGY_MAX:
        return modes.LOW
    if r > modes.HIGH_ENERGY_MIN:
        return modes.HIGH
    return modes.UNIFORM


def _default_indices(cfg):
    p = cfg.protocol
    nh = 2 * cavity_mode_number(cfg.drive("displacement").cavity, cfg.species, cfg.trap.length) \
        if "displacement" in cfg.drives else None
    out = [int(p.get("n_low_prime", 20)), int(p.get("n_low", 50))]
    return out + ([nh] if nh else [])


# ---------------------------------------------------------------- scenarios

def cmd_ground_state(cfg, args):
    g = _ground(cfg, args.wall)
    out = dict(g.summary())
    out["mu_over_mu0"] = g.mu_tilde
    out["wall"] = args.wall
    csv_data = ("ground_state.csv", ["z_m", "psi_sq_per_m"], zip(g.z_m, g.density_m))
    return {"inputs": {"wall": args.wall}, "outputs": out}, [csv_data]


def cmd_modes(cfg, args):
    sc = cfg.scales()
    idx = args.n or _default_indices(cfg)
    ms = []
    for n in idx:
        k, s, w = modes.dispersion(n, sc)
        a, b = modes.bogoliubov_coefficients(s)
        ms.append(modes.Mode(n, k, w, s, float(a), float(b), _classify(n, sc)))
    rows = modes.mode_table_rows(ms)
    cols = ["n", "k_n", "omega_hz", "sigma", "alpha", "beta", "regime"]
    csv_data = ("modes.csv", cols, ([r[c] for c in cols] for r in rows))
    return {"inputs": {"n": idx}, "outputs": {"modes": rows}}, [csv_data]


def _toy(cfg, args):
    toy = cfg.protocol.get("toy_model", {})
    nd = cfg.drive(toy.get("drive", "displacement"))
    q = 2 * cavity_wavenumber(nd.cavity, cfg.species)
    b = args.steepness if args.steepness is not None else float(toy.get("steepness", 108.5))
    L = args.length if args.length is not None else float(toy.get("length_m", cfg.trap.length))
    return trapezoid.ToyModel(b, L, q, cfg.species.mass), nd


def cmd_trapezoid(cfg, args):
    model, nd = _toy(cfg, args)
    centre = int(round(2 * cavity_wavenumber(nd.cavity, cfg.species) * model.length / math.pi))
    lo = args.n_min if args.n_min is not None else centre - 10
    hi = args.n_max if args.n_max is not None else centre + 20
    ms = trapezoid.trapezoid_spectrum(model, lo, hi)
    nph = nd.drive.mean_photon_number or 1.0
    ba = coupling.trapezoid_kappa_scan(model, ms, nd.cavity, cfg.species,
                                       cfg.trap.atom_number, nph)
    rows = [{"n": m.index, "E_tilde": m.scaled_energy, "A_c": m.A_c, "A_s": m.A_s,
             "kappa_joule": float(k), "residual": m.residual}
            for m, k in zip(ms, ba.kappa)]
    imin = min(rows, key=lambda r: abs(r["A_s"] / r["A_c"]))["n"]
    ipk = max(rows, key=lambda r: abs(r["kappa_joule"]))["n"]
    out = {"scale_m": model.scale, "length_tilde": model.length_tilde, "modes": rows,
           "argmin_abs_As_over_Ac": imin, "argmax_abs_kappa": ipk,
           "photon_number": nph}
    csv_data = ("trapezoid.csv", ["n", "E_tilde", "A_c", "A_s"],
                ([r["n"], r["E_tilde"], r["A_c"], r["A_s"]] for r in rows))
    return {"inputs": {"steepness": model.steepness, "length_m": model.length,
                       "n_min": lo, "n_max": hi}, "outputs": out}, [csv_data]


def _drive_with_photons(cfg, name):
    nd = cfg.drive(name)
    if nd.drive.mean_photon_number > 0 or not nd.target:
        return nd
    b = reproduce._budget(cfg, name)
    from dataclasses import replace
    return replace(nd, drive=replace(nd.drive, mean_photon_number=b["mean_photon_number"]))


def cmd_coefficients(cfg, args):
    nd = _drive_with_photons(cfg, args.drive)
    sc = cfg.scales()
    nc = cavity_mode_number(nd.cavity, cfg.species, sc.length)
    idx = args.n or sorted({nc, 2 * nc, 50, 50 + 2 * nc})
    box = coupling.box_coefficients(nd.cavity, cfg.species, nd.drive, idx, sc)
    out = {"n_cav": nc, "photon_number": nd.drive.mean_photon_number,
           "box": [dict(zip(("n", "l", "family", "real", "imag", "units"), r))
                   for r in box.rows()]}
    rows = [("BoxClosedForm",) + r for r in box.rows()]
    if not args.box_only:
        g = _ground(cfg)
        ms = [modes.sigma_mode(n, g) for n in idx]
        pd = coupling.cavity_intensity_drive(nd.cavity, cfg.species, nd.drive, g)
        gen = coupling.generic_coefficients(pd, ms, g)
        out["generic"] = [dict(zip(("n", "l", "family", "real", "imag", "units"), r))
                          for r in gen.rows()]
        rows += [("GenericQuadrature",) + r for r in gen.rows()]
    csv_data = ("coefficients.csv", ["provenance", "n", "l", "family", "real", "imag", "units"],
                rows)
    return {"inputs": {"drive": args.drive, "n": idx}, "outputs": out}, [csv_data]


def cmd_budget(cfg, args):
    res = {}
    for name, nd in sorted(cfg.drives.items()):
        if not nd.target:
            continue
        dur = None if nd.target.get("kind") == "displace" else reproduce._swap_duration(cfg)
        b = reproduce._budget(cfg, name, dur)
        b["power_w"] = float(power_from_photon_number(b["mean_photon_number"], nd.cavity,
                                                      cfg.species))
        res[name] = b
    return {"inputs": {"t_bs_budget_s": reproduce._swap_duration(cfg)}, "outputs": res}, []


def cmd_mzi(cfg, args):
    p = cfg.protocol
    nl, sc = int(p.get("n_low", 50)), cfg.scales()
    nh = _default_indices(cfg)[-1]
    amp = args.amplitude if args.amplitude is not None else \
        math.sqrt(float(p.get("probe_quasiparticles", 10)))
    state = dynamics.GaussianState.coherent((nh, nl), {nh: amp})
    out_state, bound = dynamics.mzi_run(state, args.theta, nh, nl)
    w = modes.dispersion(nl, sc)[2]
    prec = dynamics.scattering_length_precision(w, float(p.get("t_int_s", 0.1)), amp * amp)
    return {"inputs": {"theta": args.theta, "amplitude": amp, "modes": [nh, nl]},
            "outputs": {"mean_numbers": list(out_state.mean_numbers().values()),
                        "phase_bound": bound, "scattering_length": prec.to_dict()}}, []


def cmd_pulsed_readout(cfg, args):
    nd = cfg.drive("readout")
    sc = cfg.scales()
    n = 2 * cavity_mode_number(nd.cavity, cfg.species, sc.length)
    nph = nd.drive.mean_photon_number
    k = coupling.kappa(nd.cavity, cfg.species, nph, [n], scales=sc).get(n)
    dt = args.dt if args.dt is not None else dynamics.readout_threshold(k)
    state = dynamics.GaussianState.coherent(("b",), {"b": args.amplitude})
    r = dynamics.pulsed_readout(k, dt, state, "b", nph, omega=modes.dispersion(n, sc)[2])
    r.update(kappa_joule=k, threshold_s=dynamics.readout_threshold(k), dt_s=dt, mode=n,
             qfi=dynamics.qfi_displacement(r["chi"]),
             cramer_rao=dynamics.cramer_rao(r["chi"], args.n_meas),
             power_w=float(power_from_photon_number(nph, nd.cavity, cfg.species)))
    return {"inputs": {"amplitude": args.amplitude, "n_meas": args.n_meas}, "outputs": r}, []


def cmd_force_gradient(cfg, args):
    p, sc = cfg.protocol, cfg.scales()
    t = float(p.get("t_int_s", 0.1))
    nl = int(p.get("n_low_prime", 20))
    nh = _default_indices(cfg)[-1]
    rep = dynamics.min_force_gradient(sc, t, nl, args.n_meas or float(p.get("repetitions", 1)))
    single = rep.extras["single_shot_N_per_m"]
    P = dynamics.force_gradient_amplitude(single, t, nl, sc)
    tbs = float(p.get("t_bs_protocol_s", 0.2))
    seq = dynamics.swap_displace_swap(nl, nh, P)
    seq = [dynamics.OperationSpec(o.kind, o.modes, o.parameter,
                                  tbs if o.kind == "BeamSplit" else t) for o in seq]
    traj = dynamics.protocol_run(seq, dynamics.GaussianState.vacuum((nl, nh)))
    dur = dynamics.total_duration(seq)
    dmp = damping.damping_report(sc, cfg.species, dur)
    return {"inputs": {"t_int_s": t, "n_low": nl, "n_high": nh},
            "outputs": {"report": rep.to_dict(), "displacement": P,
                        "trajectory": [s.to_dict() for s in traj],
                        "protocol_duration_s": dur, "damping": dmp.to_dict()}}, []


def cmd_damping(cfg, args):
    dur = args.duration if args.duration is not None else \
        float(cfg.protocol.get("total_duration_s", 0.5))
    rep = damping.damping_report(cfg.scales(), cfg.species, dur)
    return {"inputs": {"duration_s": dur}, "outputs": rep.to_dict()}, []


def cmd_reproduce(cfg, args):
    rows = reproduce.evaluate(cfg, args.tolerance_scale)
    return {"inputs": {"tolerance_scale": args.tolerance_scale},
            "outputs": {"rows": rows, "all_pass": all(r["pass"] for r in rows)}}, []


COMMANDS = {
    "ground-state": cmd_ground_state,
    "modes": cmd_modes,
    "trapezoid": cmd_trapezoid,
    "coefficients": cmd_coefficients,
    "budget": cmd_budget,
    "mzi": cmd_mzi,
    "pulsed-readout": cmd_pulsed_readout,
    "force-gradient": cmd_force_gradient,
    "damping": cmd_damping,
    "reproduce-paper": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="config JSON path or bundled preset name")
    common.add_argument("--out", help="directory for report files")
    common.add_argument("--tolerance-scale", type=float, default=1.0)
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="csv also writes plot-data tables")
    common.add_argument("--quiet", action="store_true")

    ap = argparse.ArgumentParser(prog="qpcavity", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ground-state", parents=[common])
    p.add_argument("--wall", choices=("config", "box"), default="config")
    p = sub.add_parser("modes", parents=[common])
    p.add_argument("--n", type=int, nargs="+")
    p = sub.add_parser("trapezoid", parents=[common])
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--steepness", type=float)
    p.add_argument("--length", type=float)
    p = sub.add_parser("coefficients", parents=[common])
    p.add_argument("--drive", default="displacement")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--box-only", action="store_true")
    sub.add_parser("budget", parents=[common])
    p = sub.add_parser("mzi", parents=[common])
    p.add_argument("--theta", type=float, default=math.pi / 2)
    p.add_argument("--amplitude", type=float)
    p = sub.add_parser("pulsed-readout", parents=[common])
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--dt", type=float)
    p.add_argument("--n-meas", type=float, default=1.0)
    p = sub.add_parser("force-gradient", parents=[common])
    p.add_argument("--n-meas", type=float)
    p = sub.add_parser("damping", parents=[common])
    p.add_argument("--duration", type=float)
    p = sub.add_parser("reproduce-paper", parents=[common])
    p.add_argument("--no-fail-on-mismatch", action="store_true",
                   help="exit 0 even when a row misses its tolerance")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args.config)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report, tables = COMMANDS[args.command](cfg, args)
    except (ConfigError, RegimeViolation, KeyError, ValueError) as exc:
        print(f"qpcavity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, DomainError, QPCavityError, FloatingPointError) as exc:
        print(f"qpcavity: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    report = {"scenario": args.command, **report,
              "warnings": sorted({str(w.message) for w in caught}),
              "provenance": {"version": __version__, "config": os.path.basename(args.config)}}
    text = dumps(report)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"{args.command}.json"), "w") as fh:
            fh.write(text)
        if args.format == "csv":
            for name, header, rows in tables:
                _write_csv(os.path.join(args.out, name), header, rows)
    if not args.quiet:
        if args.command == "reproduce-paper":
            for r in report["outputs"]["rows"]:
                flag = "PASS" if r["pass"] else "FAIL"
                print(f"{flag} [{r['criterion']}] {r['key']}: {r['value']:.6g} "
                      f"(expected {r['expected']:.6g} {r['units']})")
        else:
            sys.stdout.write(text)
    if args.command == "reproduce-paper" and not report["outputs"]["all_pass"] \
            and not args.no_fail_on_mismatch:
        return EXIT_MISMATCH
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
