import math

import numpy as np
import pytest
import scipy.special

from ctqwalk.analytics import (
    ContinuumParams,
    alpha_asymptotic,
    alpha_corrected,
    bessel_jn_array,
    bessel_oracle,
    bessel_walk_amplitudes,
    bessel_walk_distribution,
    continuum_sigma,
    erf,
)


def test_erf_frozen_value():
    assert erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-12)


def test_erf_against_scipy_grid():
    xs = np.linspace(-6.5, 6.5, 1301)
    ours = np.array([erf(float(x)) for x in xs])
    np.testing.assert_allclose(ours, scipy.special.erf(xs), rtol=0, atol=1e-12)


def test_erf_odd_and_saturating():
    for x in (0.3, 1.7, 2.9, 4.2):
        assert erf(-x) == -erf(x)
    assert erf(0.0) == 0.0
    assert erf(7.0) == 1.0
    assert erf(-10.0) == -1.0


def test_erf_rejects_nonfinite():
    with pytest.raises(ValueError):
        erf(float("nan"))


def test_continuum_sigma():
    p = ContinuumParams(sigma0=2.0, gamma=1.0)
    assert continuum_sigma(p, 0.0) == 2.0
    assert continuum_sigma(p, 4.0) == pytest.approx(math.sqrt(4.0 + 4.0), abs=1e-15)
    with pytest.raises(ValueError):
        continuum_sigma(p, -1.0)


def test_alpha_limits():
    # wide packets: corrected rate approaches gamma/sigma0
    wide = ContinuumParams(10.0)
    assert alpha_corrected(wide) == pytest.approx(alpha_asymptotic(wide), rel=1e-12)
    # narrow limit tends to sqrt(2)*gamma
    narrow = ContinuumParams(1e-4)
    assert alpha_corrected(narrow) == pytest.approx(math.sqrt(2.0), rel=1e-6)
    with pytest.raises(ValueError):
        ContinuumParams(-1.0)


def test_bessel_array_against_scipy():
    for x in (0.5, 3.0, 20.0, 137.0, 500.0):
        nmax = int(x) + 60
        ours = bessel_jn_array(x, nmax)
        ref = scipy.special.jv(np.arange(nmax + 1), x)
        np.testing.assert_allclose(ours, ref, rtol=0, atol=1e-12)


def test_bessel_array_edge_cases():
    out = bessel_jn_array(0.0, 5)
    assert out[0] == 1.0 and np.all(out[1:] == 0.0)
    with pytest.raises(ValueError):
        bessel_jn_array(-1.0, 3)
    with pytest.raises(ValueError):
        bessel_jn_array(1.0, -1)


def test_bessel_normalization_identity():
    for x in (1.0, 10.0, 250.0):
        jn = bessel_jn_array(x, int(x) + 80)
        assert jn[0] + 2.0 * np.sum(jn[2::2]) == pytest.approx(1.0, abs=1e-14)


def test_bessel_oracle_symmetric_in_site():
    assert bessel_oracle(3, 2.0) == bessel_oracle(-3, 2.0)
    assert bessel_oracle(0, 0.0) == 1.0


def test_walk_distribution_normalized():
    p = bessel_walk_distribution(120, 25.0)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert len(p) == 241
    np.testing.assert_allclose(p, p[::-1], atol=1e-15)


def test_walk_amplitudes_match_reference_phases():
    half = 60
    t = 12.0
    amp = bessel_walk_amplitudes(half, t)
    j = np.arange(-half, half + 1)
    ref = (1j**j) * scipy.special.jv(j, 2.0 * t)
    np.testing.assert_allclose(amp, ref, rtol=0, atol=1e-12)
    assert np.linalg.norm(amp) == pytest.approx(1.0, abs=1e-10)
