"""Stochastic flows ``d phi = alpha(phi) dt + dw`` with bounded-variation drift.

Simulation with shared noise, local-time estimation, the local-time
representation of the spatial derivative, stationary laws and Lyapunov
exponents.
"""

from .drift import BVDrift, MollifiedDrift, catalog, evaluate, integrate_against, mollify, total_variation
from .flow import FlowTrajectory, NoisePath, TimeGrid, make_noise, make_noise_batch, simulate_flow
from .local_time import LocalTimeProfile, occupation_estimate, tanaka_estimate
from .derivative import DerivativeEstimate, derivative_via_local_time, finite_difference, newton_leibniz_check
from .stationary import (
    StationarySpec,
    derivative_growth_rate,
    ergodic_average_target,
    lyapunov_formula,
    scale_function,
    stationary_density,
)
from .lyapunov import LyapunovRun, empirical_lyapunov, ergodic_average_check, occupation_vs_stationary

__version__ = "0.1.0"
