import numpy as np
import pytest

from ctqwalk.errors import DefectOutOfGrid
from ctqwalk.model import (
    DefectSpec,
    SiteGrid,
    build_defective,
    build_homogeneous,
    gauge_reduce,
    spectral_bounds,
)


def test_grid_basics():
    grid = SiteGrid(3)
    assert grid.n_sites == 7
    assert list(grid.sites()) == [-3, -2, -1, 0, 1, 2, 3]
    assert grid.index_of(-3) == 0
    assert grid.index_of(0) == 3
    with pytest.raises(IndexError):
        grid.index_of(4)


def test_grid_rejects_nonpositive_half_width():
    with pytest.raises(ValueError):
        SiteGrid(0)


def test_homogeneous_bands():
    grid = SiteGrid(4)
    h = build_homogeneous(grid, gamma=0.7, epsilon=0.3)
    assert np.all(h.diag == 0.3)
    assert np.all(h.lower == -0.7)
    dense = h.to_dense()
    assert np.array_equal(dense, dense.conj().T)


def test_matvec_matches_dense():
    rng = np.random.default_rng(7)
    grid = SiteGrid(6)
    h = build_defective(grid, 1.0, 0.2, DefectSpec(-1.3, 0.4, -2.1))
    x = rng.standard_normal(grid.n_sites) + 1j * rng.standard_normal(grid.n_sites)
    np.testing.assert_allclose(h.matvec(x.copy()), h.to_dense() @ x, rtol=0, atol=1e-14)


def test_defect_bond_values():
    grid = SiteGrid(5)
    d = DefectSpec(xi=1.5, theta_minus=0.4, theta_plus=-0.9, site=1)
    h = build_defective(grid, 2.0, 0.0, d)
    i = grid.index_of(1)
    # both rightward hops through the defect carry the phase factor
    assert h.lower[i - 1] == pytest.approx(-3.0 * np.exp(0.4j), abs=1e-15)
    assert h.lower[i] == pytest.approx(-3.0 * np.exp(-0.9j), abs=1e-15)
    untouched = [k for k in range(grid.n_sites - 1) if k not in (i - 1, i)]
    assert np.all(h.lower[untouched] == -2.0)


def test_null_defect_is_homogeneous():
    grid = SiteGrid(8)
    h0 = build_homogeneous(grid, 1.0, 0.0)
    h1 = build_defective(grid, 1.0, 0.0, DefectSpec(1.0, 0.0, 0.0))
    np.testing.assert_allclose(h1.lower, h0.lower, rtol=0, atol=1e-15)


def test_defect_must_fit_with_neighbors():
    grid = SiteGrid(4)
    with pytest.raises(DefectOutOfGrid):
        build_defective(grid, 1.0, 0.0, DefectSpec(1.0, 0.0, 0.0, site=4))


def test_defect_spec_rejects_nonfinite():
    with pytest.raises(ValueError):
        DefectSpec(np.inf, 0.0, 0.0)


def test_gauge_reduce_round_trip():
    rng = np.random.default_rng(11)
    grid = SiteGrid(7)
    for _ in range(5):
        d = DefectSpec(
            float(rng.uniform(-2.5, 2.5)) or 0.5,
            float(rng.uniform(-2 * np.pi, 2 * np.pi)),
            float(rng.uniform(-2 * np.pi, 2 * np.pi)),
        )
        h = build_defective(grid, 1.0, 0.1, d)
        red = gauge_reduce(h)
        assert red.phases[0] == 0.0
        np.testing.assert_allclose(red.reconstruct_lower(), h.lower, rtol=0, atol=1e-12)


def test_gauge_reduce_preserves_spectrum():
    grid = SiteGrid(6)
    h = build_defective(grid, 1.0, 0.0, DefectSpec(-1.8, -1.2 * np.pi, 1.2 * np.pi))
    red = gauge_reduce(h)
    t = np.diag(red.tridiag_diag.astype(float)) - np.diag(red.tridiag_offdiag, 1) \
        - np.diag(red.tridiag_offdiag, -1)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(t), np.linalg.eigvalsh(h.to_dense()), atol=1e-10
    )


def test_gauge_reduce_handles_cut_bond():
    grid = SiteGrid(4)
    h = build_defective(grid, 1.0, 0.0, DefectSpec(0.0, 1.0, 2.0))
    red = gauge_reduce(h)
    np.testing.assert_allclose(red.reconstruct_lower(), h.lower, rtol=0, atol=1e-12)


def test_spectral_bounds_enclose_eigenvalues():
    rng = np.random.default_rng(3)
    grid = SiteGrid(9)
    for _ in range(5):
        d = DefectSpec(
            float(rng.uniform(-2.5, 2.5)),
            float(rng.uniform(-6, 6)),
            float(rng.uniform(-6, 6)),
        )
        h = build_defective(grid, 1.0, float(rng.uniform(-0.5, 0.5)), d)
        lo, hi = spectral_bounds(h)
        ev = np.linalg.eigvalsh(h.to_dense())
        assert lo <= ev.min() and ev.max() <= hi


def test_sublattice_conjugation_negates_bands():
    # with zero on-site energy, flipping the sign of every other site negates H
    grid = SiteGrid(6)
    h = build_defective(grid, 1.0, 0.0, DefectSpec(1.4, -1.5 * np.pi, 1.5 * np.pi))
    s = np.diag(np.where(grid.sites() % 2 == 0, 1.0, -1.0))
    np.testing.assert_allclose(s @ h.to_dense() @ s, -h.to_dense(), atol=1e-14)
