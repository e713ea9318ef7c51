"""The λ test function and the moment drift condition.

A finite r-th moment follows when some bounded-away-from-0 λ on Θ gives

    sup_θ E(λ(θ*_1)/λ(θ) · w(θ, e_1)^r | θ*_0 = θ) < 1.

``build_lambda`` constructs such a λ from the growth rate: with
Q_t = (δ + w(θ*_{t-1}, e_t))^r and q_t(θ) = E(Q_t ··· Q_1 | θ),

    λ(θ) = ∏_{t=1}^{n-1} q_t(θ)^{1/n},

and ``check_drift_3_6`` estimates the drift expectation for any λ.
"""

from __future__ import annotations

import enum
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..collapsed import CollapsedChain, propagate
from ..errors import ConstructionError
from ..innovations import ErrorDist
from ..model import ModelSpec
from ..sphere import GridFunction
from ..streams import RandomStream
from .smc import DEFAULT_PARTICLES, log_product_moments

logger = logging.getLogger("tarstab")

DELTA_FRACTION = 0.01
MAX_HALVINGS = 20
MEDIAN_SAMPLES = 10_000
# Relative slack allowed when checking Monte Carlo λ against its bounds.
BOUND_SLACK = 1e-6

LambdaFn = Callable[[np.ndarray], np.ndarray]


class DriftVerdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


def constant_lambda(value: float = 1.0) -> LambdaFn:
    """λ ≡ value."""

    def fn(thetas: np.ndarray) -> np.ndarray:
        return np.full(len(np.atleast_2d(thetas)), float(value))

    return fn


@dataclass(frozen=True, eq=False)
class LambdaTable(GridFunction):
    """λ tabulated on a sphere grid."""

    r: float = 1.0
    n: int = 1
    delta: float = 0.0
    inflated_rate: float = math.nan
    lower_bound: float = 0.0
    upper_bound: float = math.inf

    @property
    def bounds_ok(self) -> bool:
        lo = self.lower_bound * (1 - BOUND_SLACK)
        hi = self.upper_bound * (1 + BOUND_SLACK)
        return bool(np.all((self.values >= lo) & (self.values <= hi)))

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "delta": self.delta,
            "inflated_rate": self.inflated_rate,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "bounds_ok": self.bounds_ok,
            "grid": self.grid,
            "values": self.values,
        }


def _median_w(spec: ModelSpec, dist: ErrorDist, stream: RandomStream) -> float:
    chain = CollapsedChain(spec, dist, stream.spawn(16))
    chain.burn(200)
    ws = np.concatenate([chain.step().w for _ in range(MEDIAN_SAMPLES // 16)])
    return float(np.median(ws))


def build_lambda(
    spec: ModelSpec,
    dist: ErrorDist,
    r: float,
    n: int,
    delta: float | None,
    sphere_grid: np.ndarray,
    inner_samples: int,
    stream: RandomStream,
) -> LambdaTable:
    """Construct λ on ``sphere_grid`` from n-step (δ + w)^r products.

    ``delta=None`` searches: start at 0.01·median(w) and halve until the
    δ-inflated n-step rate sup_θ q_n(θ)^{1/n} is below 1, at most 20 times.
    ``inner_samples`` is the SMC particle count per grid point.

    Raises:
        ConstructionError: No δ gives an inflated n-step rate below 1.
    """
    dist.check_order(r)
    grid = np.atleast_2d(np.asarray(sphere_grid, dtype=float))
    if n <= 1:
        return LambdaTable(
            grid,
            np.ones(len(grid)),
            r=r,
            n=max(n, 1),
            delta=delta or 0.0,
            lower_bound=1.0,
            upper_bound=1.0,
        )

    particles = inner_samples or DEFAULT_PARTICLES
    candidates = (
        [delta]
        if delta is not None
        else [DELTA_FRACTION * _median_w(spec, dist, stream.child("median")) / 2**k
              for k in range(MAX_HALVINGS + 1)]
    )
    for d in candidates:
        logq = log_product_moments(
            spec, dist, grid, r, n, stream.child("lambda"), particles=particles, delta=d
        )
        # sup_θ q_n(θ)^{1/n} < 1 is what makes the built λ satisfy the drift bound.
        rate = math.exp(float(np.max(logq[:, n - 1])) / n)
        logger.debug("lambda: delta=%.4g inflated rate %.6f", d, rate)
        if rate < 1:
            break
    else:
        raise ConstructionError(
            f"no delta gives an inflated growth rate below 1 (last rate {rate:.6g})"
        )

    # λ(θ) = exp((1/n) Σ_{t=1}^{n-1} log q_t(θ))
    values = np.exp(logq[:, : n - 1].sum(axis=1) / n)
    k6 = float(np.exp(np.max(logq[:, 0])))
    table = LambdaTable(
        grid,
        values,
        r=r,
        n=n,
        delta=d,
        inflated_rate=rate,
        lower_bound=d ** (r * (n - 1) / 2),
        upper_bound=k6 ** ((n - 1) / 2),
    )
    if not table.bounds_ok:
        logger.warning("lambda values fall outside their bounds on the grid")
    return table


@dataclass(frozen=True, eq=False)
class DriftCheck:
    """Per-probe estimates of E(λ(θ*_1)/λ(θ) · w(θ, e_1)^r | θ)."""

    r: float
    table: pd.DataFrame

    @property
    def sup(self) -> float:
        return float(self.table["expectation"].max())

    @property
    def spread(self) -> float:
        """max - min over probes; near 0 when the expectation is constant in θ."""
        col = self.table["expectation"]
        return float(col.max() - col.min())

    @property
    def verdict(self) -> DriftVerdict:
        upper = self.table["expectation"] + 3 * self.table["stderr"]
        lower = self.table["expectation"] - 3 * self.table["stderr"]
        if float(upper.max()) < 1:
            return DriftVerdict.HOLDS
        if float(lower.max()) > 1:
            return DriftVerdict.FAILS
        return DriftVerdict.INCONCLUSIVE

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "sup": self.sup,
            "spread": self.spread,
            "verdict": self.verdict,
            "probes": self.table,
        }


def check_drift_3_6(
    spec: ModelSpec,
    dist: ErrorDist,
    r: float,
    lambda_table: LambdaFn,
    probe_thetas: np.ndarray,
    inner_samples: int,
    stream: RandomStream,
) -> DriftCheck:
    """Estimate E(λ(θ*_1)/λ(θ) · w(θ, e_1)^r | θ*_0 = θ) at each probe.

    ``lambda_table`` is any callable on an (n, p) array of sphere points:
    a ``LambdaTable``, ``constant_lambda()``, or a closed-form test
    function. One set of ``inner_samples`` errors is shared by all probes.
    """
    dist.check_order(r)
    probes = np.atleast_2d(np.asarray(probe_thetas, dtype=float))
    n_probes = len(probes)
    u = np.tile(dist.sample(stream.child("drift"), inner_samples), n_probes)
    states = np.repeat(probes, inner_samples, axis=0)
    nxt, w = propagate(spec, states, u)
    here = np.repeat(np.asarray(lambda_table(probes)), inner_samples)
    ratio = np.asarray(lambda_table(nxt)) / here
    terms = (ratio * w**r).reshape(n_probes, inner_samples)
    table = pd.DataFrame(probes, columns=[f"theta_{i + 1}" for i in range(spec.p)])
    table["expectation"] = terms.mean(axis=1)
    table["stderr"] = terms.std(axis=1, ddof=1) / math.sqrt(inner_samples)
    return DriftCheck(float(r), table)
