"""Named result reproductions: data tables, plots, and a manifest per bundle.

Each bundle id maps to one campaign.  "full" scale runs the production
parameters (long times, fine grids); "desk" runs the same physics at
gamma*t=200 with coarser grids so a laptop finishes in minutes.  With an
output directory the bundle writes CSV tables, SVG plots, and manifest.json;
without one it only returns the summary dict.
"""

from __future__ import annotations

import math
import os
import time

import numpy as np

from . import __version__
from .analytics import ContinuumParams, alpha_asymptotic, alpha_corrected
from .errors import UsageError
from .experiments import (
    DEFAULT_OMEGA_POINTS,
    STRATEGIES,
    InitialStateSpec,
    SweepAxis,
    SweepGrid,
    _run_tasks,
    contour_map,
    default_omegas,
    default_schedule,
    omega_scan,
    parrondo_compare,
    run_single,
    sweep_1d,
)
from .observables import spreading_rate
from .propagator import PropagatorConfig
from .serialize import RunManifest, sha256_file, write_manifest, write_rows
from .svgplot import render_plot

BUNDLE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1")

_SCALES = {
    "full": {"t": 1000.0, "axis": 101, "contour": 81, "t_scan": 2000.0,
             "t_collapse": (250.0, 500.0, 1000.0), "states": ("localized", 1.0, 5.0, 10.0)},
    "desk": {"t": 200.0, "axis": 41, "contour": 41, "t_scan": 500.0,
             "t_collapse": (50.0, 100.0, 200.0), "states": ("localized", 1.0)},
}

_SIGMA0_LIST = (0.25, 0.5, 1.0, 2.0, 5.0, 10.0)
_PAIRS = (("A", "B"), ("C", "B"), ("C", "D"))
_THETA_FIXED = math.pi / 2  # phase used when a sweep holds theta constant


def _state(label) -> InitialStateSpec:
    if label == "localized":
        return InitialStateSpec(kind="localized")
    return InitialStateSpec(kind="gaussian", sigma0=float(label))


def _state_name(label) -> str:
    return "loc" if label == "localized" else f"g{float(label):g}"


class _Bundle:
    """Collects tables and plots, then writes files plus the manifest."""

    def __init__(self, figure_id: str, scale: str, out_dir, config: dict):
        self.figure_id = figure_id
        self.scale = scale
        self.out_dir = out_dir
        self.config = config
        self.files: list[str] = []
        self.t0 = time.monotonic()
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)

    def table(self, name: str, header: list[str], rows) -> None:
        if self.out_dir is None:
            return
        path = os.path.join(self.out_dir, name)
        write_rows(path, header, rows)
        self.files.append(name)

    def plot(self, name: str, result, kind: str, **labels) -> None:
        if self.out_dir is None:
            return
        path = os.path.join(self.out_dir, name)
        render_plot(result, kind, path, **labels)
        self.files.append(name)

    def finish(self, derived: dict) -> None:
        if self.out_dir is None:
            return
        digests = {n: sha256_file(os.path.join(self.out_dir, n)) for n in sorted(self.files)}
        manifest = RunManifest(
            version=__version__,
            command=f"reproduce {self.figure_id} {self.scale}",
            config=self.config,
            derived=derived,
            digests=digests,
            wall_clock=time.monotonic() - self.t0,
        )
        write_manifest(manifest, os.path.join(self.out_dir, "manifest.json"))


def reproduce(
    figure_id: str,
    scale: str = "desk",
    cfg: PropagatorConfig | None = None,
    out_dir=None,
    workers: int | None = None,
) -> dict:
    """Run one named campaign; return its summary dict (and write artifacts)."""
    if figure_id not in BUNDLE_IDS:
        raise UsageError(f"unknown bundle {figure_id!r}; expected one of {BUNDLE_IDS}")
    if scale not in _SCALES:
        raise UsageError(f"unknown scale {scale!r}; expected full or desk")
    cfg = cfg or PropagatorConfig()
    params = _SCALES[scale]
    config = {"figure_id": figure_id, "scale": scale, "engine": cfg.engine,
              "tolerance": cfg.tolerance}
    bundle = _Bundle(figure_id, scale, out_dir, config)
    summary = _RUNNERS[figure_id](bundle, params, cfg, workers)
    bundle.finish(_jsonable(summary))
    summary["figure_id"] = figure_id
    summary["scale"] = scale
    return summary


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _run_fig2(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end = params["t"]
    rows = []
    curves = {"numerical": [], "corrected": [], "asymptotic": []}
    for sigma0 in _SIGMA0_LIST:
        series = run_single(None, _state(sigma0), t_end, None, cfg)
        alpha = spreading_rate(series).alpha
        p = ContinuumParams(sigma0)
        a_c, a_a = alpha_corrected(p), alpha_asymptotic(p)
        rows.append([sigma0, alpha, a_c, a_a])
        curves["numerical"].append(alpha)
        curves["corrected"].append(a_c)
        curves["asymptotic"].append(a_a)
    bundle.table("fig2.csv", ["sigma0[sites]", "alpha[-]", "alpha_c[-]", "alpha_a[-]"], rows)
    x = list(_SIGMA0_LIST)
    bundle.plot(
        "fig2.svg",
        {k: (x, v) for k, v in curves.items()},
        "multiline",
        title=f"spreading rate vs initial width (gamma*t={t_end:g})",
        xlabel="sigma0", ylabel="alpha",
    )
    rel = [abs(n / c - 1.0) for n, c in zip(curves["numerical"], curves["corrected"])]
    return {"sigma0": x, **curves, "max_rel_dev_corrected": max(rel)}


def _sweep_bundle_tables(bundle, name, axis_name, sweeps: dict, value_key: str, title, ylabel):
    """One CSV + one plot for a family of sweeps sharing the same axis."""
    labels = list(sweeps)
    first = sweeps[labels[0]]
    xs = [r["params"][axis_name] for r in first.records]
    header = [f"{axis_name}[-]"] + [f"{value_key}_{lab}[-]" for lab in labels]
    cols = {lab: [r[value_key] for r in sweeps[lab].records] for lab in labels}
    rows = [[xs[i]] + [cols[lab][i] for lab in labels] for i in range(len(xs))]
    bundle.table(f"{name}.csv", header, rows)
    bundle.plot(
        f"{name}.svg", {lab: (xs, cols[lab]) for lab in labels}, "multiline",
        title=title, xlabel=axis_name, ylabel=ylabel,
    )
    return xs, cols


def _run_fig3(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end, n_axis = params["t"], params["axis"]
    axis = SweepAxis("xi", -2.5, 2.5, n_axis)
    summary = {}
    for mode in ("equal", "opposite"):
        sweeps = {}
        for label in params["states"]:
            grid = SweepGrid(axes=(axis,), init=_state(label), t_end=t_end, theta=_THETA_FIXED)
            sweeps[_state_name(label)] = sweep_1d(grid, mode, cfg, workers)
        xs, cols = _sweep_bundle_tables(
            bundle, f"fig3_{mode}", "xi", sweeps, "p_defect",
            f"defect-site probability vs xi ({mode} phases, gamma*t={t_end:g})", "P0",
        )
        summary[mode] = {lab: max(col) for lab, col in cols.items()}
    return {"p0_max": summary}


def _fig4_point(task) -> dict:
    theta, t_samples, cfg = task
    from .model import DefectSpec

    defect = DefectSpec(1.0, theta, theta)
    series = run_single(defect, InitialStateSpec(), t_samples[-1], t_samples, cfg)
    return {
        "params": {"theta": theta},
        "p0": [float(v) for v in series.p_defect],
        "leakage_max": float(series.leakage.max()),
    }


def _run_fig4(bundle: _Bundle, params, cfg, workers) -> dict:
    n_axis = params["axis"]
    t_samples = params["t_collapse"]
    thetas = np.linspace(0.0, 2.0 * math.pi, n_axis)
    tasks = [(float(th), tuple(t_samples), cfg) for th in thetas]
    records = _run_tasks(_fig4_point, tasks, workers)
    rescaled = np.array([[t * r["p0"][i] for r in records] for i, t in enumerate(t_samples)])
    header = ["theta[rad]"] + [f"tp0_t{t:g}[-]" for t in t_samples]
    rows = [[float(thetas[j])] + [float(rescaled[i, j]) for i in range(len(t_samples))]
            for j in range(len(thetas))]
    bundle.table("fig4.csv", header, rows)
    bundle.plot(
        "fig4.svg",
        {f"gamma*t={t:g}": (thetas, rescaled[i]) for i, t in enumerate(t_samples)},
        "multiline",
        title="rescaled defect-site probability vs phase (xi=1, equal phases)",
        xlabel="theta", ylabel="gamma*t * P0",
    )
    ratios = rescaled[1:] / rescaled[0]
    return {
        "t_samples": list(t_samples),
        "collapse_ratio_min": float(ratios.min()),
        "collapse_ratio_max": float(ratios.max()),
    }


def _run_fig5(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end, n_axis = params["t"], params["axis"]
    panels = {
        "xi": SweepAxis("xi", -2.5, 2.5, n_axis),
        "theta": SweepAxis("theta", -2.0 * math.pi, 2.0 * math.pi, n_axis),
    }
    summary = {}
    for axis_name, axis in panels.items():
        for mode in ("equal", "opposite"):
            sweeps = {}
            for label in params["states"]:
                grid = SweepGrid(axes=(axis,), init=_state(label), t_end=t_end,
                                 xi=1.0, theta=_THETA_FIXED)
                sweeps[_state_name(label)] = sweep_1d(grid, mode, cfg, workers)
            xs, cols = _sweep_bundle_tables(
                bundle, f"fig5_{axis_name}_{mode}", axis_name, sweeps, "sigma_ratio",
                f"spreading ratio vs {axis_name} ({mode} phases, gamma*t={t_end:g})",
                "sigma_d/sigma",
            )
            summary[f"{axis_name}_{mode}"] = {
                lab: {"min": min(col), "max": max(col)} for lab, col in cols.items()
            }
    return {"ratio_extrema": summary}


def _run_fig6(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end, n = params["t"], params["contour"]
    grid = SweepGrid(
        axes=(SweepAxis("xi", -2.5, 2.5, n), SweepAxis("theta", 0.0, 2.0 * math.pi, n)),
        init=InitialStateSpec(), t_end=t_end,
    )
    result = contour_map(grid, "opposite", cfg, workers)
    xis = grid.axes[0].values()
    thetas = grid.axes[1].values()
    ratios = np.array([r["sigma_ratio"] for r in result.records]).reshape(n, n)
    header = ["xi[-]", "theta[rad]", "sigma_ratio[-]"]
    rows = [[r["params"]["xi"], r["params"]["theta"], r["sigma_ratio"]] for r in result.records]
    bundle.table("fig6.csv", header, rows)
    bundle.plot(
        "fig6.svg", (thetas, xis, ratios), "heatmap",
        title=f"spreading ratio over (xi, theta), opposite phases, gamma*t={t_end:g}",
        xlabel="theta", ylabel="xi",
    )
    return {"ratio_min": float(ratios.min()), "ratio_max": float(ratios.max())}


def _run_fig7(bundle: _Bundle, params, cfg, workers) -> dict:
    t_scan = params["t_scan"]
    omegas = default_omegas(DEFAULT_OMEGA_POINTS)
    init = InitialStateSpec()
    curves = {}
    summary = {}
    for pair in _PAIRS:
        name = "".join(pair).lower()
        scan = omega_scan(STRATEGIES[pair[0]], STRATEGIES[pair[1]], omegas, init, t_scan,
                          cfg, workers)
        ratios = [r["sigma_ratio"] for r in scan.records]
        curves[name.upper()] = (list(omegas), ratios)
        header = ["omega[gamma]", "sigma_ratio[-]"]
        bundle.table(f"fig7_{name}.csv", header,
                     [[float(w), float(r)] for w, r in zip(omegas, ratios)])
        summary[name] = {"best_omega": scan.meta["best_omega"],
                         "best_ratio": scan.meta["best_ratio"]}
    bundle.plot(
        "fig7.svg", curves, "multiline",
        title=f"alternation spreading ratio vs omega (gamma*t={t_scan:g})",
        xlabel="omega", ylabel="sigma_d/sigma",
    )
    return {"scan": summary}


def _run_fig8(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end, t_scan = params["t"], params["t_scan"]
    omegas = default_omegas(DEFAULT_OMEGA_POINTS)
    init = InitialStateSpec()
    schedule = default_schedule(t_end)
    summary = {}
    for pair in _PAIRS:
        name = "".join(pair).lower()
        scan = omega_scan(STRATEGIES[pair[0]], STRATEGIES[pair[1]], omegas, init, t_scan,
                          cfg, workers)
        best = scan.meta["best_omega"]
        runs = parrondo_compare(pair, best, init, t_end, schedule, cfg)
        labels = {"a": pair[0], "b": pair[1], "ab": "".join(pair), "h": "H"}
        sigma_header = ["t[1/gamma]"] + [f"sigma_{labels[k]}[sites]" for k in ("a", "b", "ab", "h")]
        times = runs["a"].times
        sigma_rows = [
            [float(times[i])] + [float(runs[k].sigma[i]) for k in ("a", "b", "ab", "h")]
            for i in range(len(times))
        ]
        bundle.table(f"fig8_{name}_sigma.csv", sigma_header, sigma_rows)
        half = runs["a"].meta["half_width"]
        sites = np.arange(-half, half + 1)
        dist_header = ["j[sites]"] + [f"p_{labels[k]}[-]" for k in ("a", "b", "ab", "h")]
        dist_rows = [
            [int(sites[i])] + [float(runs[k].final_distribution[i]) for k in ("a", "b", "ab", "h")]
            for i in range(len(sites))
        ]
        bundle.table(f"fig8_{name}_dist.csv", dist_header, dist_rows)
        bundle.plot(
            f"fig8_{name}_sigma.svg",
            {labels[k]: (times, runs[k].sigma) for k in ("a", "b", "ab", "h")},
            "multiline",
            title=f"sigma(t): {pair[0]}, {pair[1]}, alternation (omega={best:.4g}), uniform",
            xlabel="gamma*t", ylabel="sigma",
        )
        sigma_h = float(runs["h"].sigma[-1])
        summary[name] = {
            "omega": best,
            "ratio_a": float(runs["a"].sigma[-1]) / sigma_h,
            "ratio_b": float(runs["b"].sigma[-1]) / sigma_h,
            "ratio_ab": float(runs["ab"].sigma[-1]) / sigma_h,
            "trapped_a": float(runs["a"].trapped[-1]),
            "trapped_ab": float(runs["ab"].trapped[-1]),
        }
    return {"pairs": summary}


def _run_table1(bundle: _Bundle, params, cfg, workers) -> dict:
    t_end = params["t"]
    init = InitialStateSpec()
    schedule = default_schedule(t_end)
    twin = run_single(None, init, t_end, schedule, cfg)
    sigma_h = float(twin.sigma[-1])
    rows = []
    ratios = {}
    for name, defect in STRATEGIES.items():
        series = run_single(defect, init, t_end, schedule, cfg)
        ratio = float(series.sigma[-1]) / sigma_h
        ratios[name] = ratio
        rows.append([name, defect.xi, defect.theta_minus, defect.theta_plus, ratio])
    bundle.table(
        "table1.csv",
        ["strategy[-]", "xi[-]", "theta_minus[rad]", "theta_plus[rad]", "sigma_ratio[-]"],
        rows,
    )
    return {"ratios": ratios, "sigma_h": sigma_h}


_RUNNERS = {
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "fig4": _run_fig4,
    "fig5": _run_fig5,
    "fig6": _run_fig6,
    "fig7": _run_fig7,
    "fig8": _run_fig8,
    "table1": _run_table1,
}
