"""Machine checks of the standing assumptions A.1 to A.6.

Some checks are exact consequences of the threshold family (A.4, A.6),
some rely on what an error law declares about itself (A.1, A.2), and the
A.5 check is numerical evidence gathered on a sphere grid. Each result
says which kind it is.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..innovations import ErrorDist
from ..sphere import axial_probes, sphere_grid
from .spec import ModelSpec

logger = logging.getLogger("tarstab")

A5_GRID_SIZE = 10_000
A5_AXIAL_BAND = 1e-3
A5_THRESHOLD = 1e-9


class AssumptionStatus(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    WARN = "warn"
    NOT_CHECKABLE = "not-checkable"


@dataclass(frozen=True)
class AssumptionResult:
    name: str
    status: AssumptionStatus
    evidence: str
    numerical: bool = False


@dataclass(frozen=True)
class AssumptionReport:
    """Per-assumption results keyed ``"A.1"`` ... ``"A.6"``."""

    results: dict[str, AssumptionResult] = field(default_factory=dict)

    def __getitem__(self, name: str) -> AssumptionResult:
        return self.results[name]

    @property
    def passed(self) -> bool:
        """No assumption failed (warnings and not-checkable entries allowed)."""
        return all(r.status is not AssumptionStatus.FAIL for r in self.results.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, r in self.results.items() if r.status is AssumptionStatus.FAIL]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "assumptions": {
                k: {"status": r.status.value, "evidence": r.evidence, "numerical": r.numerical}
                for k, r in sorted(self.results.items())
            },
        }


def _check_a1(spec: ModelSpec, dist: ErrorDist) -> AssumptionResult:
    problems = []
    if not dist.density_positive:
        problems.append(f"{dist.family} density is not bounded away from 0 on compacts")
    for pattern, coeffs in sorted(spec.regimes.items()):
        if not coeffs.b_bounded_below:
            problems.append(
                f"regime {list(pattern)}: b0 = {coeffs.b0:g} and some b_i = 0, "
                "so b is not bounded away from 0"
            )
    if problems:
        return AssumptionResult("A.1", AssumptionStatus.FAIL, "; ".join(problems))
    return AssumptionResult(
        "A.1",
        AssumptionStatus.PASS,
        f"{dist.family} density declared positive; every regime has b0 > 0 or all b_i > 0",
    )


def _check_a2(dist: ErrorDist) -> AssumptionResult:
    bound = dist.sup_weighted_density()
    if not math.isfinite(bound) or not dist.r0 > 0:
        return AssumptionResult(
            "A.2", AssumptionStatus.FAIL, f"sup (1+|u|) f(u) = {bound}, r0 = {dist.r0}"
        )
    return AssumptionResult(
        "A.2",
        AssumptionStatus.PASS,
        f"sup (1+|u|) f(u) = {bound:.6g}; E|e|^r finite for r <= {dist.r0:g}",
    )


def _check_a5(
    spec: ModelSpec, grid_size: int, band: float, threshold: float
) -> AssumptionResult:
    if spec.p == 1:
        thetas = np.array([[-1.0], [1.0]])
        a_star, b_star = spec.homogeneous(thetas)
        if np.all(b_star > threshold):
            return AssumptionResult("A.5", AssumptionStatus.PASS, "p = 1: b*(±1) > 0 (exact)")
        return AssumptionResult(
            "A.5",
            AssumptionStatus.WARN,
            f"p = 1: b*(±1) = {b_star.tolist()}; A.5 only constrains p > 1",
        )

    grid = sphere_grid(spec.p, grid_size, band=band)
    a_star, b_star = spec.homogeneous(grid)
    off_axial_max = float(np.min(np.maximum(np.abs(a_star), b_star)))
    off_axial_b = float(np.min(b_star))
    if off_axial_max <= threshold or off_axial_b <= threshold:
        return AssumptionResult(
            "A.5",
            AssumptionStatus.FAIL,
            f"off the axial planes min max(|a*|, b*) = {off_axial_max:.3g}, "
            f"min b* = {off_axial_b:.3g} on {len(grid)} grid points",
            numerical=True,
        )

    evidence = (
        f"min max(|a*|, b*) = {off_axial_max:.3g}, min b* = {off_axial_b:.3g} "
        f"on {len(grid)} points off the axial planes"
    )
    # Axial planes are probed separately; trouble there is flagged, not failed.
    probes = axial_probes(grid)
    pa, pb = spec.homogeneous(probes)
    axial_max = float(np.min(np.maximum(np.abs(pa), pb)))
    axial_b = float(np.min(pb))
    notes = []
    if axial_max <= threshold:
        notes.append(f"max(|a*|, b*) vanishes on an axial plane (min {axial_max:.3g})")
    if axial_b <= threshold:
        notes.append(f"b* = 0 at some axial points (min {axial_b:.3g}), B_0 is nonempty")
    if notes:
        return AssumptionResult(
            "A.5", AssumptionStatus.WARN, "; ".join([evidence, *notes]), numerical=True
        )
    return AssumptionResult("A.5", AssumptionStatus.PASS, evidence, numerical=True)


def check_assumptions(
    spec: ModelSpec,
    dist: ErrorDist,
    *,
    grid_size: int = A5_GRID_SIZE,
    band: float = A5_AXIAL_BAND,
    threshold: float = A5_THRESHOLD,
) -> AssumptionReport:
    """Check A.1 to A.6 for a model and error law."""
    results = {
        "A.1": _check_a1(spec, dist),
        "A.2": _check_a2(dist),
        "A.4": AssumptionResult(
            "A.4",
            AssumptionStatus.PASS,
            "a*, b* are the homogeneous parts of piecewise-linear a "
            "and piecewise-quadratic b², x* = 0",
        ),
        "A.5": _check_a5(spec, grid_size, band, threshold),
        "A.6": AssumptionResult(
            "A.6",
            AssumptionStatus.PASS,
            f"regimes are cut by {spec.m} homogeneous hyperplane(s)",
        ),
    }
    results["A.3"] = AssumptionResult(
        "A.3", AssumptionStatus.PASS, "implied by A.4 (linear growth of a and b)"
    )
    report = AssumptionReport(results)
    for name in report.failures:
        logger.warning("assumption %s fails: %s", name, report[name].evidence)
    return report
