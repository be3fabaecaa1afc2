import numpy as np
import pytest

from ctqwalk.errors import GridTooSmall, SiteOutOfGrid
from ctqwalk.model import SiteGrid
from ctqwalk.states import (
    continuum_norm_constant,
    gaussian_state,
    localized_state,
    reflect,
    sublattice_flip,
)


def test_localized_state():
    grid = SiteGrid(5)
    psi = localized_state(grid, 2)
    assert psi.norm() == pytest.approx(1.0, abs=1e-15)
    assert psi.amplitude_at(2) == 1.0
    assert np.count_nonzero(psi.amp) == 1


def test_localized_out_of_grid():
    with pytest.raises(SiteOutOfGrid):
        localized_state(SiteGrid(3), 4)


def test_gaussian_normalization_exact():
    grid = SiteGrid(40)
    for sigma0 in (0.3, 0.5, 1.0, 2.0, 4.0):
        psi = gaussian_state(grid, sigma0)
        assert psi.norm() == pytest.approx(1.0, abs=1e-14)


def test_gaussian_profile_and_center():
    grid = SiteGrid(50)
    psi = gaussian_state(grid, 2.0, center=3)
    p = np.abs(psi.amp) ** 2
    assert grid.sites()[np.argmax(p)] == 3
    # ratio between neighboring sites follows the quoted exponent
    a0 = abs(psi.amplitude_at(3))
    a1 = abs(psi.amplitude_at(4))
    assert a1 / a0 == pytest.approx(np.exp(-1.0 / 16.0), rel=1e-12)


def test_gaussian_needs_room_for_tails():
    with pytest.raises(GridTooSmall):
        gaussian_state(SiteGrid(10), 2.0)
    with pytest.raises(ValueError):
        gaussian_state(SiteGrid(40), -1.0)


def test_continuum_norm_constant_matches_wide_limit():
    grid = SiteGrid(200)
    sigma0 = 10.0
    psi = gaussian_state(grid, sigma0)
    assert abs(psi.amplitude_at(0)) == pytest.approx(continuum_norm_constant(sigma0), rel=1e-6)


def test_sublattice_flip_is_involution():
    grid = SiteGrid(20)
    psi = gaussian_state(grid, 1.5, center=1)
    flipped = sublattice_flip(psi)
    assert not np.array_equal(flipped.amp, psi.amp)
    np.testing.assert_array_equal(sublattice_flip(flipped).amp, psi.amp)
    np.testing.assert_allclose(np.abs(flipped.amp), np.abs(psi.amp), atol=1e-15)


def test_reflect_is_involution():
    grid = SiteGrid(20)
    psi = gaussian_state(grid, 1.5, center=4)
    mirrored = reflect(psi)
    assert abs(mirrored.amplitude_at(-4)) == pytest.approx(abs(psi.amplitude_at(4)), abs=1e-15)
    np.testing.assert_array_equal(reflect(mirrored).amp, psi.amp)
