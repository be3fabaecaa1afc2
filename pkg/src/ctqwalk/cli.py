"""Command-line interface.

Subcommands: evolve, sweep, contour, omega-scan, parrondo, reproduce, verify.
Flag values override config-file values, which override built-in defaults;
the config file is a flat JSON object whose keys mirror flag names.  Angles
accept a "pi" suffix ("1.2pi" means 1.2*pi).  Exit codes: 0 success, 2 usage
error, 3 numeric failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import ConvergenceFailure, CtqwalkError, LatticeTooSmall, UsageError, VerificationError
from .experiments import (
    STRATEGIES,
    InitialStateSpec,
    SweepAxis,
    SweepGrid,
    contour_map,
    default_schedule,
    omega_scan,
    parrondo_compare,
    run_single,
    sweep_1d,
)
from .figures import BUNDLE_IDS, reproduce
from .model import DefectSpec
from .propagator import PropagatorConfig
from .serialize import RunManifest, sha256_file, verify_manifest, write_manifest, write_table, write_rows
from .svgplot import render_plot


def parse_angle(text: str) -> float:
    """Float with an optional trailing "pi" multiplier, e.g. "1.2pi" -> 1.2*pi."""
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            head = t[:-2].strip()
            if head in ("", "+", "-"):
                head += "1"
            return float(head) * math.pi
        return float(t)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def parse_defect(text: str) -> DefectSpec:
    """Comma-joined key=value tokens: xi, tm, tp, and optional site."""
    fields = {"xi": None, "tm": None, "tp": None, "site": 0}
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "=" not in token:
            raise UsageError(f"defect token {token!r} is not key=value")
        key, value = token.split("=", 1)
        key = key.strip()
        if key not in fields:
            raise UsageError(f"unknown defect key {key!r}")
        fields[key] = int(value) if key == "site" else parse_angle(value)
    missing = [k for k in ("xi", "tm", "tp") if fields[k] is None]
    if missing:
        raise UsageError(f"defect spec {text!r} missing {missing}")
    return DefectSpec(fields["xi"], fields["tm"], fields["tp"], fields["site"])


def parse_axis(text: str) -> SweepAxis:
    """name:start:stop:count with optional :log; angle values may carry "pi"."""
    parts = text.split(":")
    log = False
    if parts and parts[-1] == "log":
        log = True
        parts = parts[:-1]
    if len(parts) != 4:
        raise UsageError(f"axis {text!r} must be name:start:stop:count[:log]")
    name, start, stop, count = parts
    try:
        return SweepAxis(name, parse_angle(start), parse_angle(stop), int(count), log)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctqwalk", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ctqwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON file with default flag values")
        p.add_argument("--out", help="output directory for artifacts")
        p.add_argument("--engine", choices=["chebyshev", "reference"])
        p.add_argument("--tolerance", type=float)
        p.add_argument("--workers", type=int)
        p.add_argument("--gamma", type=float)
        p.add_argument("--epsilon", type=float)

    def state_flags(p):
        p.add_argument("--sigma0", type=float)
        p.add_argument("--localized", action="store_true", default=None)

    p = sub.add_parser("evolve", help="single run under one (possibly defective) chain")
    common(p)
    state_flags(p)
    p.add_argument("--defect", help="xi=..,tm=..,tp=..[,site=..]; omitted = homogeneous")
    p.add_argument("--t", type=float, help="end time in units of 1/gamma")
    p.add_argument("--samples", type=int)

    p = sub.add_parser("sweep", help="1D parameter sweep of the spreading ratio")
    common(p)
    state_flags(p)
    p.add_argument("--axis", action="append", help="name:start:stop:count[:log]")
    p.add_argument("--mode", choices=["equal", "opposite"])
    p.add_argument("--xi", type=float)
    p.add_argument("--theta")
    p.add_argument("--t", type=float)

    p = sub.add_parser("contour", help="(xi, theta) map of the spreading ratio")
    common(p)
    state_flags(p)
    p.add_argument("--axis", action="append", help="two axes: xi:... and theta:...")
    p.add_argument("--t", type=float)

    p = sub.add_parser("omega-scan", help="alternation ratio vs switching frequency")
    common(p)
    state_flags(p)
    p.add_argument("--a", help="defect spec or catalog name A-D")
    p.add_argument("--b", help="defect spec or catalog name A-D")
    p.add_argument("--omega-range", help="lo:hi:count (log-spaced)")
    p.add_argument("--t", type=float)

    p = sub.add_parser("parrondo", help="compare two strategies with their alternation")
    common(p)
    state_flags(p)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--omega")
    p.add_argument("--t", type=float)

    p = sub.add_parser("reproduce", help="run a named result bundle")
    common(p)
    p.add_argument("--id", choices=list(BUNDLE_IDS))
    p.add_argument("--scale", choices=["full", "desk"])

    p = sub.add_parser("verify", help="re-check manifest digests")
    p.add_argument("manifests", nargs="+")
    return parser


_DEFAULTS = {
    "engine": "chebyshev",
    "tolerance": 1e-13,
    "gamma": 1.0,
    "epsilon": 0.0,
    "sigma0": 1.0,
    "t": 200.0,
    "samples": 13,
    "mode": "opposite",
    "xi": 1.0,
    "theta": "0.5pi",
    "omega_range": "0.05:20:60",
    "scale": "desk",
    "id": "table1",
    "out": ".",
}


def parse_config(argv, config_text: str | None = None) -> argparse.Namespace:
    """Resolve flags over config-file values over defaults; reject unknown keys."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return args
    file_values = {}
    if config_text is None and args.config:
        with open(args.config, encoding="utf-8") as fh:
            config_text = fh.read()
    if config_text:
        try:
            raw = json.loads(config_text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must be a flat JSON object")
        file_values = {k.replace("-", "_"): v for k, v in raw.items()}
        known = set(vars(args))
        for key in file_values:
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
    for key, value in vars(args).items():
        if value is not None:
            continue
        if key in file_values:
            setattr(args, key, file_values[key])
        elif key in _DEFAULTS:
            setattr(args, key, _DEFAULTS[key])
    for key in ("t", "sigma0", "gamma", "epsilon", "tolerance"):
        value = getattr(args, key, None)
        if value is not None and not math.isfinite(float(value)):
            raise UsageError(f"--{key} must be finite")
    return args


def _init_from(args) -> InitialStateSpec:
    if getattr(args, "localized", None):
        return InitialStateSpec(kind="localized")
    return InitialStateSpec(kind="gaussian", sigma0=float(args.sigma0))


def _cfg_from(args) -> PropagatorConfig:
    return PropagatorConfig(engine=args.engine, tolerance=float(args.tolerance))


def _strategy(text: str) -> DefectSpec:
    if text is None:
        raise UsageError("missing strategy spec")
    if text.upper() in STRATEGIES:
        return STRATEGIES[text.upper()]
    return parse_defect(text)


def _emit(out_dir, command, config, derived, tables: dict, plots: list, t0: float) -> None:
    os.makedirs(out_dir, exist_ok=True)
    files = []
    for name, payload in tables.items():
        path = os.path.join(out_dir, name)
        if isinstance(payload, tuple):
            write_rows(path, payload[0], payload[1])
        else:
            write_table(payload, path)
        files.append(name)
    for name, result, kind, labels in plots:
        render_plot(result, kind, os.path.join(out_dir, name), **labels)
        files.append(name)
    digests = {n: sha256_file(os.path.join(out_dir, n)) for n in sorted(files)}
    manifest = RunManifest(
        version=__version__, command=command, config=config, derived=derived,
        digests=digests, wall_clock=time.monotonic() - t0,
    )
    write_manifest(manifest, os.path.join(out_dir, "manifest.json"))


def _echo_config(args) -> dict:
    skip = {"command", "config", "out", "workers"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _cmd_evolve(args) -> int:
    t0 = time.monotonic()
    cfg = _cfg_from(args)
    init = _init_from(args)
    defect = parse_defect(args.defect) if args.defect else None
    t_end = float(args.t)
    schedule = tuple(np.linspace(0.0, t_end, int(args.samples)))
    series = run_single(defect, init, t_end, schedule, cfg,
                        gamma=float(args.gamma), epsilon=float(args.epsilon))
    derived = {
        "half_width": series.meta["half_width"],
        "n_sites": 2 * series.meta["half_width"] + 1,
        "cheb_order_max": series.meta["cheb_order_max"],
        "leakage_max": float(series.leakage.max()),
        "sigma_final": float(series.sigma[-1]),
    }
    _emit(args.out, "evolve", _echo_config(args), derived,
          {"evolve.csv": series},
          [("evolve.svg", (series.times, series.sigma), "line",
            {"title": "packet width vs time", "xlabel": "gamma*t", "ylabel": "sigma"})],
          t0)
    print(f"sigma({t_end:g}) = {series.sigma[-1]:.6g}  (artifacts in {args.out})")
    return 0


def _sweep_common(args):
    axes = tuple(parse_axis(a) for a in (args.axis or ()))
    if not axes:
        raise UsageError("at least one --axis required")
    theta = getattr(args, "theta", 0.0)
    theta = parse_angle(theta) if isinstance(theta, str) else float(theta)
    grid = SweepGrid(
        axes=axes, init=_init_from(args), t_end=float(args.t),
        gamma=float(args.gamma), epsilon=float(args.epsilon),
        xi=float(getattr(args, "xi", 1.0)), theta=theta,
    )
    return grid


def _cmd_sweep(args) -> int:
    t0 = time.monotonic()
    grid = _sweep_common(args)
    result = sweep_1d(grid, args.mode, _cfg_from(args), args.workers)
    xs = [r["params"][grid.axes[0].name] for r in result.records]
    ys = [r["sigma_ratio"] for r in result.records]
    derived = {"sigma_h_final": result.meta["sigma_h_final"],
               "ratio_min": min(ys), "ratio_max": max(ys)}
    _emit(args.out, "sweep", _echo_config(args), derived,
          {"sweep.csv": result},
          [("sweep.svg", (xs, ys), "line",
            {"title": f"spreading ratio ({args.mode} phases)",
             "xlabel": grid.axes[0].name, "ylabel": "sigma_d/sigma"})],
          t0)
    print(f"{len(ys)} points; ratio range [{min(ys):.4g}, {max(ys):.4g}]")
    return 0


def _cmd_contour(args) -> int:
    t0 = time.monotonic()
    grid = _sweep_common(args)
    result = contour_map(grid, "opposite", _cfg_from(args), args.workers)
    n0, n1 = grid.axes[0].count, grid.axes[1].count
    z = np.array([r["sigma_ratio"] for r in result.records]).reshape(n0, n1)
    derived = {"ratio_min": float(z.min()), "ratio_max": float(z.max())}
    _emit(args.out, "contour", _echo_config(args), derived,
          {"contour.csv": result},
          [("contour.svg", (grid.axes[1].values(), grid.axes[0].values(), z), "heatmap",
            {"title": "spreading ratio over (xi, theta)",
             "xlabel": grid.axes[1].name, "ylabel": grid.axes[0].name})],
          t0)
    print(f"{z.size} points; ratio range [{z.min():.4g}, {z.max():.4g}]")
    return 0


def _parse_omegas(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"omega range {text!r} must be lo:hi:count")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if lo <= 0 or hi <= lo or count < 2:
        raise UsageError(f"bad omega range {text!r}")
    return np.logspace(math.log10(lo), math.log10(hi), count)


def _cmd_omega_scan(args) -> int:
    t0 = time.monotonic()
    a, b = _strategy(args.a), _strategy(args.b)
    omegas = _parse_omegas(args.omega_range)
    result = omega_scan(a, b, omegas, _init_from(args), float(args.t), _cfg_from(args),
                        args.workers, gamma=float(args.gamma), epsilon=float(args.epsilon))
    ys = [r["sigma_ratio"] for r in result.records]
    derived = {"best_omega": result.meta["best_omega"], "best_ratio": result.meta["best_ratio"]}
    _emit(args.out, "omega-scan", _echo_config(args), derived,
          {"scan.csv": result},
          [("scan.svg", (list(omegas), ys), "line",
            {"title": "alternation spreading ratio vs omega",
             "xlabel": "omega", "ylabel": "sigma_d/sigma"})],
          t0)
    print(f"best omega = {derived['best_omega']:.6g} with ratio {derived['best_ratio']:.4g}")
    return 0


def _cmd_parrondo(args) -> int:
    t0 = time.monotonic()
    name_a = args.a.upper() if args.a and args.a.upper() in STRATEGIES else None
    name_b = args.b.upper() if args.b and args.b.upper() in STRATEGIES else None
    if name_a is None or name_b is None:
        raise UsageError("parrondo needs catalog strategy names (A-D) for --a and --b")
    if args.omega is None:
        raise UsageError("parrondo needs --omega")
    omega = parse_angle(str(args.omega))
    t_end = float(args.t)
    runs = parrondo_compare((name_a, name_b), omega, _init_from(args), t_end,
                            default_schedule(t_end), _cfg_from(args),
                            gamma=float(args.gamma), epsilon=float(args.epsilon))
    times = runs["a"].times
    labels = {"a": name_a, "b": name_b, "ab": name_a + name_b, "h": "H"}
    header = ["t[1/gamma]"] + [f"sigma_{labels[k]}[sites]" for k in ("a", "b", "ab", "h")]
    rows = [[float(times[i])] + [float(runs[k].sigma[i]) for k in ("a", "b", "ab", "h")]
            for i in range(len(times))]
    sigma_h = float(runs["h"].sigma[-1])
    derived = {f"ratio_{labels[k]}": float(runs[k].sigma[-1]) / sigma_h for k in ("a", "b", "ab")}
    _emit(args.out, "parrondo", _echo_config(args), derived,
          {"parrondo_sigma.csv": (header, rows)},
          [("parrondo_sigma.svg",
            {labels[k]: (times, runs[k].sigma) for k in ("a", "b", "ab", "h")}, "multiline",
            {"title": f"alternation {labels['ab']} at omega={omega:.4g}",
             "xlabel": "gamma*t", "ylabel": "sigma"})],
          t0)
    print("  ".join(f"{labels[k]}: {derived[f'ratio_{labels[k]}']:.4g}" for k in ("a", "b", "ab")))
    return 0


def _cmd_reproduce(args) -> int:
    summary = reproduce(args.id, args.scale, _cfg_from(args), args.out, args.workers)
    print(json.dumps({k: v for k, v in summary.items() if k not in ("figure_id", "scale")},
                     sort_keys=True, default=str))
    return 0


def _cmd_verify(args) -> int:
    failed = False
    for path in args.manifests:
        problems = verify_manifest(path)
        if problems:
            failed = True
            for problem in problems:
                print(f"{path}: {problem}", file=sys.stderr)
        else:
            print(f"{path}: ok")
    if failed:
        raise VerificationError("digest verification failed")
    return 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "contour": _cmd_contour,
    "omega-scan": _cmd_omega_scan,
    "parrondo": _cmd_parrondo,
    "reproduce": _cmd_reproduce,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = parse_config(argv if argv is not None else sys.argv[1:])
        return _COMMANDS[args.command](args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (LatticeTooSmall, ConvergenceFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, CtqwalkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
