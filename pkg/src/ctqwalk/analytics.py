"""Closed-form references and independent oracles for the numerical engines.

Everything here is dependency-free on purpose: the error function uses its
power series and a continued fraction, and the Bessel values come from Miller's
downward recurrence.  These routines validate the propagation engines, so they
must not share code paths with them beyond the Bessel table itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class ContinuumParams:
    """Free-particle Gaussian packet: initial width sigma0, hopping energy gamma."""

    sigma0: float
    gamma: float = 1.0

    def __post_init__(self):
        if self.sigma0 <= 0 or self.gamma <= 0:
            raise ValueError("sigma0 and gamma must be positive")


def erf(x: float) -> float:
    """Error function, absolute error below 1e-12.

    |x| < 3 uses the cancellation-free series
    erf(x) = (2x/sqrt(pi)) e^{-x^2} sum_n (2x^2)^n / (2n+1)!!,
    larger |x| the Lentz continued fraction for erfc.
    """
    if not math.isfinite(x):
        raise ValueError(f"erf argument must be finite, got {x}")
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    sign = 1.0 if x > 0 else -1.0
    if ax >= 6.5:
        # erfc(6.5) < 4e-20: indistinguishable from 1 in double precision
        return sign
    if ax < 3.0:
        x2 = 2.0 * ax * ax
        term = 1.0
        total = 1.0
        n = 0
        while abs(term) > 1e-18 * total:
            n += 1
            term *= x2 / (2 * n + 1)
            total += term
            if n > 300:  # pragma: no cover - series converges far earlier
                break
        return sign * _TWO_OVER_SQRT_PI * ax * math.exp(-ax * ax) * total
    return sign * (1.0 - _erfc_cf(ax))


def _erfc_cf(x: float) -> float:
    # erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    # evaluated with modified Lentz iteration; reliable for x >= 2.
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    for n in range(0, 200):
        a = 1.0 if n == 0 else n / 2.0
        b = x
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(-x * x) / math.sqrt(math.pi) * f


def continuum_sigma(p: ContinuumParams, t: float) -> float:
    """Width of a spreading free Gaussian packet at time t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return math.sqrt(p.sigma0**2 + (p.gamma * t / p.sigma0) ** 2)


def alpha_asymptotic(p: ContinuumParams) -> float:
    """Long-time spreading rate gamma / sigma0 of the continuum packet."""
    return p.gamma / p.sigma0


def alpha_corrected(p: ContinuumParams) -> float:
    """Erf-renormalized spreading rate, finite in the narrow-width limit.

    Tends to gamma/sigma0 for wide packets and to sqrt(2)*gamma as sigma0 -> 0.
    """
    return p.gamma / p.sigma0 * erf(math.sqrt(math.pi / 2.0) * p.sigma0)


def bessel_jn_array(x: float, nmax: int) -> np.ndarray:
    """J_0(x) .. J_nmax(x) for x >= 0 by Miller's normalized downward recurrence.

    The recurrence starts well above max(nmax, x), runs down with periodic
    rescaling against overflow, and is normalized with
    J_0 + 2*sum_k J_{2k} = 1.  Entries rescaled below ~1e-250 flush to zero,
    which is harmless: they are that small relative to the O(1) head.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    top = max(nmax, int(math.ceil(x)))
    start = top + 24 + int(2.5 * math.sqrt(top))
    if start % 2:
        start += 1
    vals = np.zeros(start + 1)
    jp = 0.0
    jc = 1e-30
    vals[start] = jc
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * jc - jp
        jp = jc
        jc = jm
        vals[k - 1] = jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            vals[k - 1 :] *= 1e-250
    total = vals[0] + 2.0 * np.sum(vals[2::2])
    vals /= total
    return vals[: nmax + 1]


def bessel_oracle(j: int, t: float, gamma: float = 1.0) -> float:
    """Probability J_j(2 gamma t)^2 of the uniform-chain walk started at site 0."""
    n = abs(int(j))
    x = 2.0 * gamma * t
    return float(bessel_jn_array(x, n)[n] ** 2)


def bessel_walk_distribution(half_width: int, t: float, gamma: float = 1.0) -> np.ndarray:
    """Full oracle distribution over sites [-M, M] for the uniform-chain walk."""
    x = 2.0 * gamma * t
    j = bessel_jn_array(x, half_width)
    p = j**2
    return np.concatenate([p[:0:-1], p])


def bessel_walk_amplitudes(half_width: int, t: float, gamma: float = 1.0) -> np.ndarray:
    """Oracle amplitudes i^j J_j(2 gamma t) over sites [-M, M]."""
    x = 2.0 * gamma * t
    jn = bessel_jn_array(x, half_width)
    j = np.arange(-half_width, half_width + 1)
    # J_{-n} = (-1)^n J_n; i^j evaluated mod 4 keeps negative j exact
    mag = jn[np.abs(j)] * np.where((j < 0) & (np.abs(j) % 2 == 1), -1.0, 1.0)
    i_pow = np.array([1.0, 1.0j, -1.0, -1.0j])
    return i_pow[np.mod(j, 4)] * mag
