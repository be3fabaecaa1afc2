"""Campaign drivers: sweeps, contour maps, omega scans, figure reproductions.

All external times are quoted as gamma*t (the dimensionless time used in every
result table); conversion to physical time happens here.  Grid points of a
sweep are independent tasks executed by a process pool; results land in
pre-allocated slots in row-major grid order, so output is bitwise identical
for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConflictError, LatticeTooSmall
from .model import DefectSpec, SiteGrid, build_defective, build_homogeneous
from .observables import TimeSeries, spreading_rate, spreading_ratio
from .propagator import PropagatorConfig, ProtocolSpec, sample_series
from .states import WaveState, gaussian_state, localized_state

STRATEGIES: dict[str, DefectSpec] = {
    "A": DefectSpec(xi=-1.8, theta_minus=-1.2 * math.pi, theta_plus=1.2 * math.pi),
    "B": DefectSpec(xi=1.4, theta_minus=-1.5 * math.pi, theta_plus=1.5 * math.pi),
    "C": DefectSpec(xi=-1.0, theta_minus=1.1 * math.pi, theta_plus=1.1 * math.pi),
    "D": DefectSpec(xi=-1.0, theta_minus=0.9 * math.pi, theta_plus=0.9 * math.pi),
}

_AXIS_NAMES = {"xi", "theta", "theta_minus", "theta_plus", "omega", "sigma0"}

DEFAULT_OMEGA_RANGE = (0.05, 20.0)
DEFAULT_OMEGA_POINTS = 60


@dataclass(frozen=True)
class InitialStateSpec:
    """Which initial state to build: a delta or a Gaussian of width sigma0."""

    kind: str = "gaussian"
    sigma0: float = 1.0
    center: int = 0

    def __post_init__(self):
        if self.kind not in ("localized", "gaussian"):
            raise ValueError(f"unknown initial state kind {self.kind!r}")
        if self.kind == "gaussian" and self.sigma0 <= 0:
            raise ValueError("sigma0 must be > 0")

    @property
    def width(self) -> float:
        return self.sigma0 if self.kind == "gaussian" else 0.0

    def build(self, grid: SiteGrid) -> WaveState:
        if self.kind == "localized":
            return localized_state(grid, self.center)
        return gaussian_state(grid, self.sigma0, self.center)

    def label(self) -> str:
        if self.kind == "localized":
            return f"localized@{self.center}"
        return f"gaussian(sigma0={self.sigma0:g})@{self.center}"


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name plus an inclusive linear or log range."""

    name: str
    start: float
    stop: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.name not in _AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {sorted(_AXIS_NAMES)}")
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")
        if self.log and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log axis needs positive endpoints")

    def values(self) -> np.ndarray:
        if self.log:
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepGrid:
    """Axis definitions plus everything held fixed across the sweep."""

    axes: tuple[SweepAxis, ...]
    init: InitialStateSpec
    t_end: float
    gamma: float = 1.0
    epsilon: float = 0.0
    xi: float = 1.0
    theta: float = 0.0
    defect_site: int = 0
    schedule: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.axes:
            raise ValueError("at least one axis required")
        if self.t_end <= 0 or self.gamma <= 0:
            raise ValueError("t_end and gamma must be positive")


@dataclass
class SweepResult:
    """Per-point records in row-major grid order plus provenance."""

    grid: SweepGrid
    phase_mode: str
    records: list[dict]
    meta: dict


def required_half_width(t_end: float, gamma: float = 1.0, sigma0: float = 0.0, safety: int = 0) -> int:
    """Half-width that keeps the ballistic cone plus Gaussian tails off the guard band."""
    if t_end <= 0 or gamma <= 0 or sigma0 < 0 or safety < 0:
        raise ValueError("arguments must be positive (sigma0 and safety nonnegative)")
    return math.ceil(2.0 * gamma * t_end) + max(64, math.ceil(8.0 * sigma0)) + safety


def default_schedule(t_end: float, n_fit: int = 12) -> tuple[float, ...]:
    """Sample times (gamma*t units): t=0 plus n_fit points across the fit window."""
    return (0.0,) + tuple(np.linspace(t_end / 2.0, t_end, n_fit))


def _phases(phase_mode: str, theta: float) -> tuple[float, float]:
    if phase_mode == "equal":
        return theta, theta
    if phase_mode == "opposite":
        return theta, -theta
    raise ValueError(f"unknown phase_mode {phase_mode!r}")


def run_single(
    defect: DefectSpec | None,
    init: InitialStateSpec,
    t_end: float,
    schedule: tuple[float, ...] | None = None,
    cfg: PropagatorConfig | None = None,
    *,
    gamma: float = 1.0,
    epsilon: float = 0.0,
    safety: int = 0,
) -> TimeSeries:
    """One full run: size the grid, build H and the state, sample observables."""
    schedule = schedule if schedule is not None else default_schedule(t_end)
    t_phys = np.asarray(schedule, dtype=float) / gamma
    m = required_half_width(t_end / gamma, gamma, init.width, safety)
    grid = SiteGrid(m)
    if defect is None:
        h = build_homogeneous(grid, gamma, epsilon)
        site = 0
    else:
        h = build_defective(grid, gamma, epsilon, defect)
        site = defect.site
    psi0 = init.build(grid)
    series = sample_series(h, psi0, t_phys, cfg, defect_site=site)
    series.meta["init"] = init.label()
    series.meta["t_end"] = t_end
    series.meta["half_width"] = m
    return series


def run_protocol(
    a: DefectSpec,
    b: DefectSpec,
    omega: float,
    init: InitialStateSpec,
    t_end: float,
    schedule: tuple[float, ...] | None = None,
    cfg: PropagatorConfig | None = None,
    *,
    gamma: float = 1.0,
    epsilon: float = 0.0,
    safety: int = 0,
) -> TimeSeries:
    """One alternation run (strategy a first), sampled like run_single."""
    schedule = schedule if schedule is not None else default_schedule(t_end)
    t_phys = np.asarray(schedule, dtype=float) / gamma
    m = required_half_width(t_end / gamma, gamma, init.width, safety)
    grid = SiteGrid(m)
    spec = ProtocolSpec(a, b, omega, grid, gamma, epsilon)
    psi0 = init.build(grid)
    series = sample_series(spec, psi0, t_phys, cfg, defect_site=a.site)
    series.meta["init"] = init.label()
    series.meta["t_end"] = t_end
    series.meta["omega"] = omega
    series.meta["half_width"] = m
    return series


def _record_from_series(series: TimeSeries, sigma_h_final: float, params: dict) -> dict:
    fit = spreading_rate(series)
    return {
        "params": params,
        "sigma_ratio": float(series.sigma[-1] / sigma_h_final),
        "p_defect": float(series.p_defect[-1]),
        "trapped": float(series.trapped[-1]),
        "mean_pos": float(series.mean_pos[-1]),
        "alpha": fit.alpha,
        "leakage_max": float(series.leakage.max()),
    }


def _sweep_point(task) -> dict:
    defect, init, t_end, schedule, cfg, gamma, epsilon, sigma_h_final, params = task
    series = run_single(defect, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon)
    return _record_from_series(series, sigma_h_final, params)


def _protocol_point(task) -> dict:
    a, b, omega, init, t_end, schedule, cfg, gamma, epsilon, sigma_h_final, params = task
    series = run_protocol(a, b, omega, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon)
    return _record_from_series(series, sigma_h_final, params)


def resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("CTQWALK_WORKERS")
    if env:
        return max(1, int(env))
    return min(os.cpu_count() or 1, 8)


def _run_tasks(fn, tasks, workers: int | None) -> list[dict]:
    n = resolve_workers(workers)
    if n <= 1 or len(tasks) <= 1:
        records = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            # map() preserves input order, so records land in grid order
            records = list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * n))))
    bad = [r for r in records if r["leakage_max"] >= 1e-8]
    if bad:
        raise LatticeTooSmall(
            f"{len(bad)} of {len(records)} records exceed the 1e-8 leakage bound; "
            f"worst {max(r['leakage_max'] for r in bad):.3e} at {bad[0]['params']}"
        )
    return records


def _homogeneous_twin(grid: SweepGrid, cfg) -> TimeSeries:
    return run_single(
        None, grid.init, grid.t_end, grid.schedule, cfg, gamma=grid.gamma, epsilon=grid.epsilon
    )


def sweep_1d(
    grid: SweepGrid,
    phase_mode: str = "opposite",
    cfg: PropagatorConfig | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Sweep one defect parameter; every record also carries the ratio to the
    homogeneous twin, which is computed once and reused."""
    if len(grid.axes) != 1:
        raise ConflictError(f"1D sweep needs exactly one axis, got {len(grid.axes)}")
    axis = grid.axes[0]
    if axis.name in ("omega",):
        raise ConflictError("omega axes belong to omega_scan")
    twin = _homogeneous_twin(grid, cfg)
    sigma_h = float(twin.sigma[-1])
    tasks = []
    for v in axis.values():
        v = float(v)
        if axis.name == "sigma0":
            init = replace(grid.init, kind="gaussian", sigma0=v)
            defect = None
            params = {"sigma0": v}
            tasks.append((defect, init, grid.t_end, grid.schedule, cfg, grid.gamma,
                          grid.epsilon, sigma_h, params))
            continue
        if axis.name == "xi":
            tm, tp = _phases(phase_mode, grid.theta)
            defect = DefectSpec(v, tm, tp, grid.defect_site)
        elif axis.name == "theta":
            tm, tp = _phases(phase_mode, v)
            defect = DefectSpec(grid.xi, tm, tp, grid.defect_site)
        elif axis.name == "theta_minus":
            defect = DefectSpec(grid.xi, v, grid.theta, grid.defect_site)
        else:  # theta_plus
            defect = DefectSpec(grid.xi, grid.theta, v, grid.defect_site)
        params = {axis.name: v}
        tasks.append((defect, grid.init, grid.t_end, grid.schedule, cfg, grid.gamma,
                      grid.epsilon, sigma_h, params))
    records = _run_tasks(_sweep_point, tasks, workers)
    meta = _provenance(grid, cfg, twin)
    return SweepResult(grid, phase_mode, records, meta)


def contour_map(
    grid: SweepGrid,
    phase_mode: str = "opposite",
    cfg: PropagatorConfig | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Two-axis (xi, theta) map of the spreading ratio, row-major in (xi, theta)."""
    if len(grid.axes) != 2:
        raise ConflictError(f"contour needs exactly two axes, got {len(grid.axes)}")
    names = tuple(a.name for a in grid.axes)
    if names != ("xi", "theta"):
        raise ConflictError(f"contour axes must be (xi, theta), got {names}")
    twin = _homogeneous_twin(grid, cfg)
    sigma_h = float(twin.sigma[-1])
    tasks = []
    for xi in grid.axes[0].values():
        for theta in grid.axes[1].values():
            tm, tp = _phases(phase_mode, float(theta))
            defect = DefectSpec(float(xi), tm, tp, grid.defect_site)
            params = {"xi": float(xi), "theta": float(theta)}
            tasks.append((defect, grid.init, grid.t_end, grid.schedule, cfg, grid.gamma,
                          grid.epsilon, sigma_h, params))
    records = _run_tasks(_sweep_point, tasks, workers)
    return SweepResult(grid, phase_mode, records, _provenance(grid, cfg, twin))


def default_omegas(count: int = DEFAULT_OMEGA_POINTS) -> np.ndarray:
    lo, hi = DEFAULT_OMEGA_RANGE
    return np.logspace(math.log10(lo), math.log10(hi), count)


def omega_scan(
    a: DefectSpec,
    b: DefectSpec,
    omegas,
    init: InitialStateSpec,
    t_end: float,
    cfg: PropagatorConfig | None = None,
    workers: int | None = None,
    *,
    gamma: float = 1.0,
    epsilon: float = 0.0,
    schedule: tuple[float, ...] | None = None,
) -> SweepResult:
    """Spreading ratio of the a/b alternation for each omega; argmax recorded."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0 or np.any(omegas <= 0):
        raise ValueError("omegas must be nonempty and positive")
    grid = SweepGrid(
        axes=(SweepAxis("omega", float(omegas.min()), float(omegas.max()), max(2, omegas.size)),),
        init=init, t_end=t_end, gamma=gamma, epsilon=epsilon, schedule=schedule,
    )
    twin = _homogeneous_twin(grid, cfg)
    sigma_h = float(twin.sigma[-1])
    tasks = [
        (a, b, float(w), init, t_end, grid.schedule, cfg, gamma, epsilon, sigma_h,
         {"omega": float(w)})
        for w in omegas
    ]
    records = _run_tasks(_protocol_point, tasks, workers)
    ratios = [r["sigma_ratio"] for r in records]
    best = int(np.argmax(ratios))
    meta = _provenance(grid, cfg, twin)
    meta["best_omega"] = float(omegas[best])
    meta["best_ratio"] = float(ratios[best])
    return SweepResult(grid, "protocol", records, meta)


def parrondo_compare(
    pair: tuple[str, str],
    omega: float,
    init: InitialStateSpec,
    t_end: float,
    schedule: tuple[float, ...] | None = None,
    cfg: PropagatorConfig | None = None,
    *,
    gamma: float = 1.0,
    epsilon: float = 0.0,
) -> dict[str, TimeSeries]:
    """Aligned series for strategy a, strategy b, their alternation, and the
    homogeneous lattice, all from identical initial states and schedules."""
    name_a, name_b = pair
    a, b = STRATEGIES[name_a], STRATEGIES[name_b]
    schedule = schedule if schedule is not None else default_schedule(t_end)
    return {
        "a": run_single(a, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon),
        "b": run_single(b, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon),
        "ab": run_protocol(a, b, omega, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon),
        "h": run_single(None, init, t_end, schedule, cfg, gamma=gamma, epsilon=epsilon),
    }


def _provenance(grid: SweepGrid, cfg: PropagatorConfig | None, twin: TimeSeries) -> dict:
    cfg = cfg or PropagatorConfig()
    return {
        "engine": cfg.engine,
        "tolerance": cfg.tolerance,
        "max_terms": cfg.max_terms,
        "t_end": grid.t_end,
        "gamma": grid.gamma,
        "epsilon": grid.epsilon,
        "init": grid.init.label(),
        "sigma_h_final": float(twin.sigma[-1]),
        "twin_leakage_max": float(twin.leakage.max()),
    }
