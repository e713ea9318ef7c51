"""Threshold AR-ARCH model specifications and assumption checks."""

from .assumptions import (
    AssumptionReport,
    AssumptionResult,
    AssumptionStatus,
    check_assumptions,
)
from .builders import (
    ar_arch,
    arch,
    delay_specific_tarch2,
    mixture_arch2_equivalent,
    tar_arch1,
    tarch_delay1,
)
from .fcar import FcarCoefficients, fcar_representation, threshold_bounds
from .spec import ModelSpec, Pattern, RegimeCoeffs, SphereState, eval_ab, eval_w, eval_z

__all__ = [
    "AssumptionReport",
    "AssumptionResult",
    "AssumptionStatus",
    "FcarCoefficients",
    "ModelSpec",
    "Pattern",
    "RegimeCoeffs",
    "SphereState",
    "ar_arch",
    "arch",
    "check_assumptions",
    "delay_specific_tarch2",
    "eval_ab",
    "eval_w",
    "eval_z",
    "fcar_representation",
    "mixture_arch2_equivalent",
    "tar_arch1",
    "tarch_delay1",
    "threshold_bounds",
]
