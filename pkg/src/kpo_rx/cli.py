"""Command-line front end: reproduce the spectra, matrix elements, gate
dynamics, continuous-gate scans, loss scans, and calibration searches as
CSV files with JSON run manifests.

Every CSV starts with a `# manifest-digest:` comment (sha256 over the
physical parameters and tolerances, so identical runs give identical
bytes) followed by a header row; floats are printed with round-trip
precision.  Exit codes: 0 success, 3 integration failure, 4 truncation
failure, 5 calibration failure, 1 other errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .adiabatic import two_level_reduction
from .dynamics import evolve_lindblad, evolve_schrodinger
from .errors import CalibrationError, IntegrationError, TruncationError
from .fock import DriveKind
from .gate import extract_gate_pure, trajectory_observables
from .pulse import DriveSpec, PulseParams
from .scans import (
    HIGH_FIDELITY,
    ScanGrid,
    adiabatic_check,
    calibrate,
    default_kappa_grid,
    gate_scan,
    linear_loss_fit,
    loss_scan,
)
from .spectrum import KpoParams, computational_basis, kpo_spectrum, xi

EXIT_INTEGRATION = 3
EXIT_TRUNCATION = 4
EXIT_CALIBRATION = 5

# Sec. III.C shortest-gate-time parameter sets, used as loss-scan defaults
FAST_GATE = {
    DriveKind.SINGLE: dict(p0_over_k=2.9, wd_over_k=7.78, pd1_over_k=0.848, k_tau=2.3, k_t=9.1),
    DriveKind.TWO: dict(p0_over_k=4.2, wd_over_k=20.51, pd1_over_k=0.732, k_tau=1.0, k_t=6.4),
}


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def write_csv(path: str, header: list[str], rows, digest: str) -> str:
    lines = [f"# manifest-digest: {digest}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    data = ("\n".join(lines) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(data)
    return hashlib.sha256(data).hexdigest()


def write_manifest(out_path: str, params: dict, outputs: dict, wall_s: float, digest: str):
    manifest = {
        "tool": "kpo-rx",
        "version": __version__,
        "parameters": params,
        "digest": digest,
        "wall_clock_s": wall_s,
        "outputs": outputs,
    }
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config(path: str) -> dict:
    """Flat key=value file; keys use flag spelling with - or _."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--p0-over-k", type=float, default=None)
    p.add_argument("--dim", type=int, default=31)
    p.add_argument("--drive", choices=["single", "two"], default=None)
    p.add_argument("--wd-over-k", type=float, default=None)
    p.add_argument("--pd1-over-k", type=float, default=None)
    p.add_argument("--k-tau", type=float, default=None)
    p.add_argument("--k-t", type=float, default=None)
    p.add_argument("--kappa-over-k", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="reserved; recorded only")
    p.add_argument("--config", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kpo-rx", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues vs p0/K")
    _add_common(p)
    p.add_argument("--p0-min", type=float, default=0.0)
    p.add_argument("--p0-max", type=float, default=7.0)
    p.add_argument("--p0-step", type=float, default=0.1)
    p.add_argument("--k-max", type=int, default=8)

    p = sub.add_parser("matrix-elements", help="ground-to-excited drive matrix elements vs p0/K")
    _add_common(p)
    p.add_argument("--p0-min", type=float, default=0.5)
    p.add_argument("--p0-max", type=float, default=7.0)
    p.add_argument("--p0-step", type=float, default=0.1)
    p.add_argument("--k-max", type=int, default=8)

    p = sub.add_parser("evolve", help="single gate run with trajectory observables")
    _add_common(p)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--top-m", type=int, default=5)

    p = sub.add_parser("gate-scan", help="theta*/fidelity over a (wd, pd1) grid")
    _add_common(p)
    p.add_argument("--wd-min", type=float, default=None)
    p.add_argument("--wd-max", type=float, default=None)
    p.add_argument("--wd-step", type=float, default=0.05)
    p.add_argument("--pd1-min", type=float, default=0.0)
    p.add_argument("--pd1-max", type=float, default=2.0)
    p.add_argument("--pd1-step", type=float, default=0.05)
    p.add_argument("--xi-ref", type=int, default=None,
                   help="center the wd window (+-1.5) on this xi_k when wd-min/max are omitted")

    p = sub.add_parser("loss-scan", help="1-F vs kappa/K")
    _add_common(p)
    p.add_argument("--kappa-min", type=float, default=1e-5)
    p.add_argument("--kappa-max", type=float, default=1e-2)
    p.add_argument("--per-decade", type=int, default=8)
    p.add_argument("--both-drives", action="store_true",
                   help="run the fast-gate parameter sets for both drive kinds")

    p = sub.add_parser("calibrate", help="find (wd, pd1) realizing a target angle")
    _add_common(p)
    p.add_argument("--target-theta", type=float, required=True)
    p.add_argument("--wd-min", type=float, default=None)
    p.add_argument("--wd-max", type=float, default=None)
    p.add_argument("--wd-step", type=float, default=0.05)
    p.add_argument("--pd1-min", type=float, default=0.0)
    p.add_argument("--pd1-max", type=float, default=2.0)
    p.add_argument("--pd1-step", type=float, default=0.05)
    p.add_argument("--xi-ref", type=int, default=None)

    p = sub.add_parser("adiabatic-check", help="two-level phase prediction vs full dynamics")
    _add_common(p)
    p.add_argument("--pd1-list", type=str, default="0,0.02,0.05,0.1")

    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # first pass to find --config, second pass with config as defaults
    args = ap.parse_args(argv)
    if args.config:
        cfg = _load_config(args.config)
        ap2 = build_parser()
        for sp in ap2._subparsers._group_actions[0].choices.values():  # noqa: SLF001
            known = {a.dest for a in sp._actions}  # noqa: SLF001
            sp.set_defaults(**{
                k: _coerce(sp, k, v) for k, v in cfg.items() if k in known
            })
        args = ap2.parse_args(argv)
    return args


def _coerce(sp, dest, val):
    for act in sp._actions:  # noqa: SLF001
        if act.dest == dest and act.type is not None:
            return act.type(val)
    return val


def _param_block(args, extra=None) -> dict:
    block = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "config", "jobs")}
    if extra:
        block.update(extra)
    return block


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise SystemExit(f"missing required options: {flags}")


def cmd_spectrum(args) -> int:
    t0 = time.time()
    _require(args, "out")
    p0s = np.arange(args.p0_min, args.p0_max + args.p0_step / 2, args.p0_step)
    digest = _digest(_param_block(args))
    rows = []
    for p0 in p0s:
        spec = kpo_spectrum(KpoParams(float(p0), args.dim))
        for k in range(args.k_max + 1):
            rows.append((float(p0), k, spec.energies[k], spec.parities[k]))
    sha = write_csv(args.out, ["p0_over_K", "k", "E_k_over_K", "parity"], rows, digest)
    write_manifest(args.out, _param_block(args), {args.out: sha}, time.time() - t0, digest)
    return 0


def cmd_matrix_elements(args) -> int:
    t0 = time.time()
    _require(args, "out", "drive")
    kind = DriveKind(args.drive)
    p0s = np.arange(args.p0_min, args.p0_max + args.p0_step / 2, args.p0_step)
    digest = _digest(_param_block(args))
    rows = []
    from .spectrum import drive_matrix_element

    for p0 in p0s:
        spec = kpo_spectrum(KpoParams(float(p0), args.dim))
        for g in (0, 1):
            for k in range(args.k_max + 1):
                val = drive_matrix_element(spec, kind, g, k)
                rows.append((float(p0), g, k, val.real))
    sha = write_csv(args.out, ["p0_over_K", "g", "k", "value"], rows, digest)
    write_manifest(args.out, _param_block(args), {args.out: sha}, time.time() - t0, digest)
    return 0


def cmd_evolve(args) -> int:
    t0 = time.time()
    _require(args, "out", "drive", "p0_over_k", "wd_over_k", "pd1_over_k", "k_tau", "k_t")
    tol = args.tol if args.tol is not None else 1e-10
    params = KpoParams(args.p0_over_k, args.dim)
    drive = DriveSpec(DriveKind(args.drive), args.wd_over_k,
                      PulseParams(args.pd1_over_k, args.k_tau, args.k_t))
    spec = kpo_spectrum(params)
    z0, z1 = computational_basis(spec)
    ts = np.linspace(0.0, args.k_t, args.samples)
    if args.kappa_over_k > 0:
        traj = evolve_lindblad(np.outer(z0, z0.conj()), params, drive, args.kappa_over_k, ts, tol=tol)
        from .gate import extract_gate_mixed

        res = extract_gate_mixed(traj.states[-1], (z0, z1), z0)
        header = ["Kt", "pop_0tilde", "pop_1tilde", "leakage"]
        rows = []
        from .gate import leakage as leak_fn

        for t, rho in zip(traj.times, traj.states):
            rows.append((t, float((z0.conj() @ rho @ z0).real), float((z1.conj() @ rho @ z1).real),
                         leak_fn(rho, spec)))
    else:
        traj = evolve_schrodinger(z0, params, drive, ts, tol=tol)
        obs = trajectory_observables(traj, spec, top_m=args.top_m)
        psif = traj.states[-1] / np.linalg.norm(traj.states[-1])
        res = extract_gate_pure(psif, (z0, z1), z0)
        header = (["Kt"]
                  + [f"pop_E{k}" for k in obs["top_indices"]]
                  + ["theta_0", "theta_1", "pop_0tilde", "pop_1tilde", "phi"])
        rows = []
        for i, t in enumerate(obs["times"]):
            rows.append((t, *(obs["populations"][j][i] for j in range(len(obs["top_indices"]))),
                         obs["theta_0"][i], obs["theta_1"][i],
                         obs["pop_0tilde"][i], obs["pop_1tilde"][i], obs["phi"][i]))
    gate = {"theta_star": res.theta_star, "fidelity": res.fidelity, "leakage": res.leakage}
    digest = _digest(_param_block(args))
    sha = write_csv(args.out, header, rows, digest)
    write_manifest(args.out, _param_block(args, {"gate_result": gate}),
                   {args.out: sha}, time.time() - t0, digest)
    print(f"theta* = {res.theta_star:.6f} rad, 1-F = {1 - res.fidelity:.3e}, "
          f"leakage = {res.leakage:.3e}")
    return 0


def _default_wd_window(args, kind: DriveKind):
    spec = kpo_spectrum(KpoParams(args.p0_over_k, args.dim))
    k_ref = args.xi_ref if args.xi_ref is not None else (4 if kind is DriveKind.SINGLE else 5)
    center = xi(spec, k_ref)
    return center - 1.5, center + 1.5


def cmd_gate_scan(args) -> int:
    t0 = time.time()
    _require(args, "out", "drive", "p0_over_k", "k_tau", "k_t")
    kind = DriveKind(args.drive)
    tol = args.tol if args.tol is not None else 1e-8
    wd_min, wd_max = args.wd_min, args.wd_max
    if wd_min is None or wd_max is None:
        wd_min, wd_max = _default_wd_window(args, kind)
    grid = ScanGrid(wd_min, wd_max, args.wd_step, args.pd1_min, args.pd1_max, args.pd1_step)
    params = KpoParams(args.p0_over_k, args.dim)
    pts = gate_scan(params, kind, grid, args.k_tau, args.k_t, tol=tol, jobs=args.jobs)
    digest = _digest(_param_block(args, {"wd_min": wd_min, "wd_max": wd_max}))
    rows = [(p.wd_over_K, p.pd1_over_K, p.theta_star, p.one_minus_F, p.leakage, int(p.failed))
            for p in pts]
    sha = write_csv(args.out, ["wd_over_K", "pd1_over_K", "theta_star", "one_minus_F",
                               "leakage", "failed"], rows, digest)
    outputs = {args.out: sha}
    # per-wd best record: largest |theta*| among the high-fidelity points
    best_rows = []
    for wd in grid.wd_values:
        hi = [p for p in pts if p.wd_over_K == wd and not p.failed
              and p.one_minus_F < HIGH_FIDELITY]
        if hi:
            b = max(hi, key=lambda p: abs(p.theta_star))
            best_rows.append((float(wd), b.pd1_over_K, b.theta_star, b.one_minus_F))
    outputs[args.out + ".best.csv"] = write_csv(
        args.out + ".best.csv",
        ["wd_over_K", "pd1_over_K", "theta_star", "one_minus_F"], best_rows, digest)
    spec = kpo_spectrum(params)
    xi_rows = [(k, xi(spec, k)) for k in range(min(9, params.dim))]
    outputs[args.out + ".xi.csv"] = write_csv(
        args.out + ".xi.csv", ["k", "xi_k_over_K"], xi_rows, digest)
    write_manifest(args.out, _param_block(args, {"wd_min": wd_min, "wd_max": wd_max}),
                   outputs, time.time() - t0, digest)
    n_failed = sum(p.failed for p in pts)
    print(f"{len(pts)} points, {n_failed} failed, "
          f"{sum(1 for p in pts if not p.failed and p.one_minus_F < HIGH_FIDELITY)} "
          f"with 1-F < {HIGH_FIDELITY}")
    return 0


def cmd_loss_scan(args) -> int:
    t0 = time.time()
    _require(args, "out")
    tol = args.tol if args.tol is not None else 1e-8
    kappas = default_kappa_grid(args.kappa_min, args.kappa_max, args.per_decade)
    if args.both_drives:
        kinds = [DriveKind.SINGLE, DriveKind.TWO]
    else:
        _require(args, "drive")
        kinds = [DriveKind(args.drive)]
    rows = []
    fits = {}
    for kind in kinds:
        defaults = FAST_GATE[kind]
        p0 = args.p0_over_k if args.p0_over_k is not None else defaults["p0_over_k"]
        wd = args.wd_over_k if args.wd_over_k is not None else defaults["wd_over_k"]
        pd1 = args.pd1_over_k if args.pd1_over_k is not None else defaults["pd1_over_k"]
        ktau = args.k_tau if args.k_tau is not None else defaults["k_tau"]
        kt = args.k_t if args.k_t is not None else defaults["k_t"]
        params = KpoParams(p0, args.dim)
        drive = DriveSpec(kind, wd, PulseParams(pd1, ktau, kt))
        pts = loss_scan(params, drive, kappas, tol=tol)
        eps, eta, resid = linear_loss_fit(pts)
        fits[kind.value] = {"eps": eps, "eta": eta, "max_residual": resid}
        for p in pts:
            rows.append((p.kappa_over_K, kind.value, p.theta_star, p.one_minus_F, p.leakage))
    digest = _digest(_param_block(args))
    sha = write_csv(args.out, ["kappa_over_K", "drive", "theta_star", "one_minus_F", "leakage"],
                    rows, digest)
    write_manifest(args.out, _param_block(args, {"linear_fit": fits}),
                   {args.out: sha}, time.time() - t0, digest)
    for kind, fit in fits.items():
        print(f"{kind}: 1-F ~ {fit['eps']:.3e} + {fit['eta']:.3e} kappa/K "
              f"(max residual {fit['max_residual']:.1e})")
    return 0


def cmd_calibrate(args) -> int:
    t0 = time.time()
    _require(args, "drive", "p0_over_k", "k_tau", "k_t")
    kind = DriveKind(args.drive)
    wd_min, wd_max = args.wd_min, args.wd_max
    if wd_min is None or wd_max is None:
        wd_min, wd_max = _default_wd_window(args, kind)
    params = KpoParams(args.p0_over_k, args.dim)
    tol = args.tol if args.tol is not None else 1e-8
    result = calibrate(
        params, kind, args.target_theta, args.k_tau, args.k_t,
        (wd_min, wd_max, args.wd_step), (args.pd1_min, args.pd1_max, args.pd1_step), tol=tol,
    )
    payload = {
        "wd_over_K": result.wd_over_K,
        "pd1_over_K": result.pd1_over_K,
        "theta_star": result.gate.theta_star,
        "one_minus_F": 1 - result.gate.fidelity,
        "leakage": result.gate.leakage,
        "target_theta": result.target_theta,
        "shortfall": result.shortfall,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        digest = _digest(_param_block(args, {"wd_min": wd_min, "wd_max": wd_max}))
        sha = write_csv(args.out,
                        ["wd_over_K", "pd1_over_K", "theta_star", "one_minus_F", "shortfall"],
                        [(result.wd_over_K, result.pd1_over_K, result.gate.theta_star,
                          1 - result.gate.fidelity, int(result.shortfall))], digest)
        write_manifest(args.out, _param_block(args, {"wd_min": wd_min, "wd_max": wd_max}),
                       {args.out: sha}, time.time() - t0, digest)
    return 0


def cmd_adiabatic_check(args) -> int:
    t0 = time.time()
    _require(args, "out", "drive", "p0_over_k", "wd_over_k", "k_tau", "k_t")
    kind = DriveKind(args.drive)
    pd1s = [float(x) for x in args.pd1_list.split(",") if x.strip()]
    params = KpoParams(args.p0_over_k, args.dim)
    tol = args.tol if args.tol is not None else 1e-10
    pts = adiabatic_check(params, kind, args.wd_over_k, pd1s, args.k_tau, args.k_t, tol=tol)
    digest = _digest(_param_block(args))
    rows = [(p.pd1_over_K, p.theta_predicted, p.theta_full, p.abs_error) for p in pts]
    sha = write_csv(args.out, ["pd1_over_K", "theta_predicted", "theta_full", "abs_error"],
                    rows, digest)
    write_manifest(args.out, _param_block(args), {args.out: sha}, time.time() - t0, digest)
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "matrix-elements": cmd_matrix_elements,
    "evolve": cmd_evolve,
    "gate-scan": cmd_gate_scan,
    "loss-scan": cmd_loss_scan,
    "calibrate": cmd_calibrate,
    "adiabatic-check": cmd_adiabatic_check,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = _apply_config(ap, sys.argv[1:] if argv is None else list(argv))
    try:
        return COMMANDS[args.command](args)
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except CalibrationError as exc:
        print(f"calibration failure: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION


if __name__ == "__main__":
    sys.exit(main())
