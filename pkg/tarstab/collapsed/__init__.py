"""The collapsed chain on the sphere and the Lyapounov exponent log ρ."""

from .chain import (
    LOG_FLOOR,
    CollapsedChain,
    ErrorBuffer,
    StepCounts,
    clamped_log,
    collapse,
    propagate,
    step,
)
from .diagnostics import (
    Order1Frequencies,
    StationarityReport,
    order1_frequencies,
    stationarity_diagnostic,
    stationary_power_moment,
)
from .lyapunov import (
    LyapEstimate,
    Verdict,
    estimate_lyapunov,
    estimate_lyapunov_alt,
    sign_verdict,
)
from .nu import EquilibriumCheck, NuFunction, build_nu, check_near_equilibrium, q_values

__all__ = [
    "LOG_FLOOR",
    "CollapsedChain",
    "EquilibriumCheck",
    "ErrorBuffer",
    "LyapEstimate",
    "NuFunction",
    "Order1Frequencies",
    "StationarityReport",
    "StepCounts",
    "Verdict",
    "build_nu",
    "check_near_equilibrium",
    "clamped_log",
    "collapse",
    "estimate_lyapunov",
    "estimate_lyapunov_alt",
    "order1_frequencies",
    "propagate",
    "q_values",
    "sign_verdict",
    "stationarity_diagnostic",
    "stationary_power_moment",
    "step",
]
