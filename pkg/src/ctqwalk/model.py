"""Lattice Hamiltonians: homogeneous chain and single complex-phase defect.

The walker hops on sites j in [-M, M] with hopping energy gamma and constant
on-site energy epsilon.  A defect at site d rescales the two bonds attached to
d: both rightward hops, d-1 -> d and d -> d+1, are multiplied by xi*exp(i*theta)
with independent phases theta_minus (left bond) and theta_plus (right bond).
Putting both phases on the same lattice direction means equal phases act like a
local momentum kick (chiral transport for spatially extended states) while
opposite phases cancel along any crossing path and keep the dynamics
reflection-symmetric.

Only the lower off-diagonal band is stored; the upper band is its conjugate by
construction, so hermiticity is a storage contract rather than a runtime check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectOutOfGrid


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SiteGrid:
    """Symmetric finite grid of 2M+1 sites, j in [-M, M], stored at i = j + M."""

    half_width: int

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError(f"half_width must be >= 1, got {self.half_width}")

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    def sites(self) -> np.ndarray:
        m = self.half_width
        return np.arange(-m, m + 1)

    def index_of(self, j: int) -> int:
        if abs(j) > self.half_width:
            raise IndexError(f"site {j} outside grid of half-width {self.half_width}")
        return j + self.half_width


@dataclass(frozen=True)
class DefectSpec:
    """Defect parameters (xi, theta_minus, theta_plus) at a given site."""

    xi: float
    theta_minus: float
    theta_plus: float
    site: int = 0

    def __post_init__(self):
        for name in ("xi", "theta_minus", "theta_plus"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class Hamiltonian:
    """Complex-Hermitian tridiagonal operator on a SiteGrid.

    lower[i] holds the matrix element <j_(i+1)|H|j_i>; the superdiagonal is its
    conjugate and is never stored.
    """

    grid: SiteGrid
    gamma: float
    epsilon: float
    diag: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        n = self.grid.n_sites
        if self.diag.shape != (n,) or self.lower.shape != (n - 1,):
            raise ValueError("band shapes inconsistent with grid")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.lower))):
            raise ValueError("Hamiltonian entries must be finite")

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.lower * x[:-1]
        y[:-1] += np.conj(self.lower) * x[1:]
        return y

    def expectation(self, x: np.ndarray) -> float:
        return float(np.real(np.vdot(x, self.matvec(x))))

    def to_dense(self) -> np.ndarray:
        """Dense N x N array; test and diagnostics path only."""
        h = np.diag(self.diag.astype(complex))
        n = self.grid.n_sites
        idx = np.arange(n - 1)
        h[idx + 1, idx] = self.lower
        h[idx, idx + 1] = np.conj(self.lower)
        return h


def build_homogeneous(grid: SiteGrid, gamma: float = 1.0, epsilon: float = 0.0) -> Hamiltonian:
    """Uniform chain: diagonal epsilon, every bond -gamma, open boundaries."""
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    n = grid.n_sites
    diag = _readonly(np.full(n, float(epsilon)))
    lower = _readonly(np.full(n - 1, -float(gamma), dtype=complex))
    return Hamiltonian(grid, float(gamma), float(epsilon), diag, lower)


def build_defective(
    grid: SiteGrid, gamma: float, epsilon: float, defect: DefectSpec
) -> Hamiltonian:
    """Uniform chain with the two bonds at the defect rescaled by xi*e^{i theta}.

    Both rightward hops across the defect carry the phase factor:
    <d|H|d-1> = -gamma*xi*e^{i theta_minus}, <d+1|H|d> = -gamma*xi*e^{i theta_plus}.
    """
    if abs(defect.site) >= grid.half_width:
        raise DefectOutOfGrid(
            f"defect site {defect.site} needs both neighbors inside half-width {grid.half_width}"
        )
    h = build_homogeneous(grid, gamma, epsilon)
    lower = h.lower.copy()
    i = grid.index_of(defect.site)
    scale = defect.xi * gamma
    lower[i - 1] = -scale * np.exp(1j * defect.theta_minus)
    lower[i] = -scale * np.exp(1j * defect.theta_plus)
    return Hamiltonian(grid, float(gamma), float(epsilon), h.diag, _readonly(lower))


@dataclass(frozen=True)
class GaugeReduction:
    """Diagonal phase map plus the real symmetric tridiagonal it leaves behind.

    H = U T U* with U = diag(e^{i phases}) and T the tridiagonal with diagonal
    tridiag_diag and off-diagonal entries -tridiag_offdiag (magnitudes stored).
    """

    phases: np.ndarray
    tridiag_diag: np.ndarray
    tridiag_offdiag: np.ndarray

    def reconstruct_lower(self) -> np.ndarray:
        dphi = np.diff(self.phases)
        return -self.tridiag_offdiag * np.exp(1j * dphi)


def gauge_reduce(h: Hamiltonian) -> GaugeReduction:
    """Strip every bond phase into a diagonal unitary.

    The leftmost phase is 0; each step absorbs the current bond's phase,
    including the pi needed when a bond has positive real part.  Zero bonds
    contribute phase 0 and reduced magnitude 0.
    """
    n = h.grid.n_sites
    phases = np.zeros(n)
    offdiag = np.abs(h.lower)
    dphi = np.where(offdiag > 0, np.angle(-h.lower), 0.0)
    phases[1:] = np.cumsum(dphi)
    return GaugeReduction(
        _readonly(phases), h.diag, _readonly(offdiag)
    )


def spectral_bounds(h: Hamiltonian) -> tuple[float, float]:
    """Gershgorin interval guaranteed to enclose the spectrum."""
    r = np.zeros(h.grid.n_sites)
    mags = np.abs(h.lower)
    r[1:] += mags
    r[:-1] += mags
    return float(np.min(h.diag - r)), float(np.max(h.diag + r))
