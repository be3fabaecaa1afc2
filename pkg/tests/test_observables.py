import numpy as np
import pytest

from ctqwalk.errors import InsufficientSamples, MismatchedSeries
from ctqwalk.model import SiteGrid
from ctqwalk.observables import (
    TimeSeries,
    boundary_leakage,
    moments,
    position_distribution,
    spreading_rate,
    spreading_ratio,
    window_probability,
)
from ctqwalk.states import WaveState, gaussian_state, localized_state


def _series(times, sigma, **overrides):
    times = np.asarray(times, dtype=float)
    fields = dict(
        times=times,
        sigma=np.asarray(sigma, dtype=float),
        mean_pos=np.zeros_like(times),
        p_defect=np.zeros_like(times),
        trapped=np.zeros_like(times),
        leakage=np.zeros_like(times),
    )
    fields.update(overrides)
    return TimeSeries(**fields)


def test_position_distribution_sums_to_one():
    psi = gaussian_state(SiteGrid(30), 2.0)
    p = position_distribution(psi)
    assert p.sum() == pytest.approx(1.0, abs=1e-14)


def test_moments_two_point_state():
    grid = SiteGrid(5)
    amp = np.zeros(grid.n_sites, dtype=complex)
    amp[grid.index_of(-1)] = amp[grid.index_of(3)] = 1 / np.sqrt(2)
    amp.setflags(write=False)
    mean, sigma = moments(WaveState(grid, amp))
    assert mean == pytest.approx(1.0, abs=1e-12)
    assert sigma == pytest.approx(2.0, abs=1e-12)


def test_moments_localized_state_zero_width():
    mean, sigma = moments(localized_state(SiteGrid(5), 2))
    assert mean == 2.0
    assert sigma == 0.0


def test_spreading_rate_recovers_line():
    t = np.linspace(0, 100, 21)
    fit = spreading_rate(_series(t, 0.8 * t + 3.0))
    assert fit.alpha == pytest.approx(0.8, abs=1e-12)
    assert fit.intercept == pytest.approx(3.0, abs=1e-9)
    assert fit.residual_rms < 1e-10
    assert fit.window == (50.0, 100.0)


def test_spreading_rate_needs_samples():
    t = np.linspace(0, 100, 6)
    with pytest.raises(InsufficientSamples):
        spreading_rate(_series(t, t))
    with pytest.raises(ValueError):
        spreading_rate(_series(np.linspace(0, 1, 20), np.ones(20)), window_fraction=1.5)


def test_window_probability():
    grid = SiteGrid(6)
    psi = localized_state(grid, 2)
    assert window_probability(psi, 2, 0) == 1.0
    assert window_probability(psi, 0, 1) == 0.0
    assert window_probability(psi, 0, 2) == 1.0
    with pytest.raises(ValueError):
        window_probability(psi, 0, -1)


def test_spreading_ratio_checks_alignment():
    a = _series([0, 10], [1.0, 4.0])
    b = _series([0, 10], [1.0, 5.0])
    a.meta["init"] = b.meta["init"] = "gaussian(sigma0=1)@0"
    assert spreading_ratio(a, b) == pytest.approx(0.8)
    c = _series([0, 20], [1.0, 5.0])
    c.meta["init"] = a.meta["init"]
    with pytest.raises(MismatchedSeries):
        spreading_ratio(a, c)
    b.meta["init"] = "localized@0"
    with pytest.raises(MismatchedSeries):
        spreading_ratio(a, b)


def test_boundary_leakage():
    grid = SiteGrid(5)
    psi = localized_state(grid, -5)
    assert boundary_leakage(psi, 1) == pytest.approx(1.0)
    assert boundary_leakage(localized_state(grid, 0), 2) == 0.0
    with pytest.raises(ValueError):
        boundary_leakage(psi, 0)


def test_time_series_validation():
    with pytest.raises(ValueError):
        _series([0, 10], [1.0])
    with pytest.raises(ValueError):
        _series([10, 0], [1.0, 2.0])
    s = _series([0, 10], [1.0, 2.0])
    assert s.final_time == 10.0
