"""Moment conditions: growth rates, drift test functions, κ and closed forms."""

from .closed_form import (
    Corollary22Result,
    TarchDelay1Result,
    TarchTestFunction,
    Theorem21TestFunction,
    corollary22_check,
    solve_beta,
    tarch_delay1_condition,
    theorem21_test_function,
)
from .drift import (
    DriftCheck,
    DriftVerdict,
    LambdaTable,
    build_lambda,
    check_drift_3_6,
    constant_lambda,
)
from .growth import (
    MomentGrowth,
    MomentVerdict,
    default_starts,
    fit_rate,
    growth_rate,
    rate_verdict,
)
from .kappa import GrowthParams, KappaSolution, scalar_kappa, solve_kappa
from .order1 import Order1Analysis, order1_analysis
from .smc import log_product_moments, proposal_for, systematic_resample

__all__ = [
    "Corollary22Result",
    "DriftCheck",
    "DriftVerdict",
    "GrowthParams",
    "KappaSolution",
    "LambdaTable",
    "MomentGrowth",
    "MomentVerdict",
    "Order1Analysis",
    "TarchDelay1Result",
    "TarchTestFunction",
    "Theorem21TestFunction",
    "build_lambda",
    "check_drift_3_6",
    "constant_lambda",
    "corollary22_check",
    "default_starts",
    "fit_rate",
    "growth_rate",
    "log_product_moments",
    "order1_analysis",
    "proposal_for",
    "rate_verdict",
    "scalar_kappa",
    "solve_beta",
    "systematic_resample",
    "tarch_delay1_condition",
    "theorem21_test_function",
]
