"""Continuous-time quantum walks on a chain with one complex-phase defect.

Core objects: a tight-binding Hamiltonian with an optional defect whose bonds
are rescaled and phase-twisted, Chebyshev and spectral propagation engines,
transport observables, and campaign drivers for parameter sweeps and
alternation (Parrondo-style) protocols.
"""

__version__ = "0.1.0"

from .errors import CtqwalkError
from .model import DefectSpec, Hamiltonian, SiteGrid, build_defective, build_homogeneous
from .observables import TimeSeries, moments, position_distribution, spreading_rate
from .propagator import PropagatorConfig, ProtocolSpec, evolve, evolve_protocol, sample_series
from .states import WaveState, gaussian_state, localized_state

__all__ = [
    "CtqwalkError",
    "DefectSpec",
    "Hamiltonian",
    "SiteGrid",
    "build_defective",
    "build_homogeneous",
    "TimeSeries",
    "moments",
    "position_distribution",
    "spreading_rate",
    "PropagatorConfig",
    "ProtocolSpec",
    "evolve",
    "evolve_protocol",
    "sample_series",
    "WaveState",
    "gaussian_state",
    "localized_state",
    "__version__",
]
