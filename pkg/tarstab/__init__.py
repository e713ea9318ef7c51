"""tarstab: stability analysis of threshold AR-ARCH models."""

from .collapsed import (
    LyapEstimate,
    NuFunction,
    Verdict,
    build_nu,
    check_near_equilibrium,
    estimate_lyapunov,
    estimate_lyapunov_alt,
    stationarity_diagnostic,
    step,
)
from .errors import (
    BracketError,
    ConfigError,
    ConstructionError,
    DomainError,
    MissingRegimeError,
    MomentOrderError,
    NotApplicableError,
    PreconditionError,
    TarstabError,
)
from .fullchain import PathRecord, empirical_drift, simulate
from .innovations import ErrorDist, make_dist
from .matrixprod import CompanionProduct, build_B, estimate_gamma, verify_T_recursion
from .model import (
    ModelSpec,
    RegimeCoeffs,
    SphereState,
    check_assumptions,
    eval_ab,
    eval_w,
    eval_z,
    fcar_representation,
)
from .moments import (
    KappaSolution,
    MomentGrowth,
    Order1Analysis,
    build_lambda,
    check_drift_3_6,
    corollary22_check,
    growth_rate,
    order1_analysis,
    solve_kappa,
    tarch_delay1_condition,
    theorem21_test_function,
)
from .streams import RandomStream

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "CompanionProduct",
    "ConfigError",
    "ConstructionError",
    "DomainError",
    "ErrorDist",
    "KappaSolution",
    "LyapEstimate",
    "MissingRegimeError",
    "ModelSpec",
    "MomentGrowth",
    "MomentOrderError",
    "NotApplicableError",
    "NuFunction",
    "Order1Analysis",
    "PathRecord",
    "PreconditionError",
    "RandomStream",
    "RegimeCoeffs",
    "SphereState",
    "TarstabError",
    "Verdict",
    "build_B",
    "build_lambda",
    "build_nu",
    "check_assumptions",
    "check_drift_3_6",
    "check_near_equilibrium",
    "corollary22_check",
    "empirical_drift",
    "estimate_gamma",
    "estimate_lyapunov",
    "estimate_lyapunov_alt",
    "eval_ab",
    "eval_w",
    "eval_z",
    "fcar_representation",
    "growth_rate",
    "make_dist",
    "order1_analysis",
    "simulate",
    "solve_kappa",
    "stationarity_diagnostic",
    "step",
    "tarch_delay1_condition",
    "theorem21_test_function",
    "verify_T_recursion",
]
