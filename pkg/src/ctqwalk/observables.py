"""Transport observables: position distribution, moments, spreading fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamples, MismatchedSeries, NegativeVariance
from .states import WaveState


@dataclass
class TimeSeries:
    """Sampled observables over a time grid (times in units of 1/gamma)."""

    times: np.ndarray
    sigma: np.ndarray
    mean_pos: np.ndarray
    p_defect: np.ndarray
    trapped: np.ndarray
    leakage: np.ndarray
    final_distribution: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in ("sigma", "mean_pos", "p_defect", "trapped", "leakage"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length differs from times")
        if np.any(np.diff(self.times) < 0):
            raise ValueError("times must be ascending")

    @property
    def final_time(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class SpreadFit:
    """Least-squares line through sigma(t) over a trailing window."""

    alpha: float
    intercept: float
    window: tuple[float, float]
    residual_rms: float


def position_distribution(psi: WaveState) -> np.ndarray:
    """P(j) = |amp(j)|^2 over the grid."""
    return np.abs(psi.amp) ** 2


def moments(psi: WaveState) -> tuple[float, float]:
    """Mean position and standard deviation of the site distribution."""
    p = position_distribution(psi)
    j = psi.grid.sites()
    mean = float(np.dot(j, p))
    var = float(np.dot(j * j, p)) - mean * mean
    if var < -1e-12:
        raise NegativeVariance(f"variance {var} below roundoff floor")
    return mean, float(np.sqrt(max(var, 0.0)))


def spreading_rate(series: TimeSeries, window_fraction: float = 0.5) -> SpreadFit:
    """OLS slope of sigma(t) over the trailing window_fraction of the series."""
    if not 0 < window_fraction < 1:
        raise ValueError("window_fraction must be in (0, 1)")
    t_max = series.final_time
    t_lo = (1.0 - window_fraction) * t_max
    mask = series.times >= t_lo
    if np.count_nonzero(mask) < 8:
        raise InsufficientSamples(
            f"{np.count_nonzero(mask)} samples in window [{t_lo:g}, {t_max:g}], need >= 8"
        )
    t = series.times[mask]
    s = series.sigma[mask]
    slope, intercept = np.polyfit(t, s, 1)
    resid = s - (slope * t + intercept)
    return SpreadFit(float(slope), float(intercept), (float(t_lo), float(t_max)),
                     float(np.sqrt(np.mean(resid**2))))


def window_probability(psi: WaveState, center: int = 0, radius: int = 0) -> float:
    """Total probability within |j - center| <= radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    j = psi.grid.sites()
    p = position_distribution(psi)
    return float(p[np.abs(j - center) <= radius].sum())


def spreading_ratio(defective: TimeSeries, homogeneous: TimeSeries) -> float:
    """sigma_d / sigma at the shared final sample time."""
    if defective.final_time != homogeneous.final_time:
        raise MismatchedSeries(
            f"final times differ: {defective.final_time} vs {homogeneous.final_time}"
        )
    if defective.meta.get("init") != homogeneous.meta.get("init"):
        raise MismatchedSeries(
            f"initial states differ: {defective.meta.get('init')} vs {homogeneous.meta.get('init')}"
        )
    return float(defective.sigma[-1] / homogeneous.sigma[-1])


def boundary_leakage(psi: WaveState, guard_width: int) -> float:
    """Probability in the outermost guard_width sites on each side."""
    if not 0 < guard_width < psi.grid.half_width:
        raise ValueError("guard_width must be in (0, half_width)")
    p = position_distribution(psi)
    return float(p[:guard_width].sum() + p[-guard_width:].sum())
