"""Lyapounov exponent estimates from the collapsed chain.

log ρ is the stationary mean of log w(θ*_{t-1}, e_t). Two estimators are
offered: the direct ergodic average of log w, and the average of
log(|z(θ*_{t-1}, e_t)| / |θ*_{t-1,1}|), which has the same stationary mean.
Both run independent lanes and report a batch-means standard error.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..errors import ConfigError
from ..innovations import ErrorDist
from ..model import ModelSpec
from ..parallel import chunks, map_ordered
from ..stats import DEFAULT_BATCHES, lane_batch_means
from ..streams import RandomStream
from .chain import CollapsedChain, StepCounts, clamped_log

logger = logging.getLogger("tarstab")

DEFAULT_REPLICATES = 32
DEFAULT_BURN_IN = 10_000
MIN_STEPS = 10_000
MIN_BURN_IN = 1_000
MIN_LANE_LENGTH = 1_000
# Underflow rates: below CLEAN the estimate is marked clean, above
# UNRELIABLE it is flagged.
CLEAN_UNDERFLOW_RATE = 1e-4
UNRELIABLE_UNDERFLOW_RATE = 1e-2

Estimator = Literal["logw", "ratio"]


class Verdict(enum.Enum):
    ERGODIC = "geometrically-ergodic"
    TRANSIENT = "transient"
    INCONCLUSIVE = "inconclusive"


def sign_verdict(value: float, stderr: float, k: float = 3.0) -> Verdict:
    """Classify log ρ̂ by whether value ± k·stderr excludes 0."""
    if value + k * stderr < 0:
        return Verdict.ERGODIC
    if value - k * stderr > 0:
        return Verdict.TRANSIENT
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class LyapEstimate:
    """Monte Carlo estimate of log ρ."""

    mean_logw: float
    stderr: float
    n_steps: int
    burn_in: int
    replicates: int
    underflow_count: int
    degenerate_count: int
    restart_count: int
    estimator: str
    seed: dict
    trace: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def underflow_rate(self) -> float:
        return self.underflow_count / self.n_steps

    @property
    def clean(self) -> bool:
        return self.underflow_rate < CLEAN_UNDERFLOW_RATE

    @property
    def reliable(self) -> bool:
        return self.underflow_rate <= UNRELIABLE_UNDERFLOW_RATE

    def verdict(self, k: float = 3.0) -> Verdict:
        if not self.reliable:
            return Verdict.INCONCLUSIVE
        return sign_verdict(self.mean_logw, self.stderr, k)

    def to_dict(self) -> dict:
        return {
            "log_rho": self.mean_logw,
            "stderr": self.stderr,
            "n_steps": self.n_steps,
            "burn_in": self.burn_in,
            "replicates": self.replicates,
            "underflow_count": self.underflow_count,
            "degenerate_count": self.degenerate_count,
            "restart_count": self.restart_count,
            "clean": self.clean,
            "reliable": self.reliable,
            "estimator": self.estimator,
            "seed": self.seed,
        }


def lane_layout(n_steps: int, replicates: int) -> tuple[int, int]:
    """Split ``n_steps`` into (lanes, steps per lane), lanes of at least MIN_LANE_LENGTH."""
    lanes = max(1, min(replicates, n_steps // MIN_LANE_LENGTH))
    return lanes, math.ceil(n_steps / lanes)


def _run_lanes(
    spec: ModelSpec,
    dist: ErrorDist,
    streams: list[RandomStream],
    length: int,
    burn_in: int,
    estimator: Estimator,
    trace: bool,
) -> tuple[np.ndarray, StepCounts, np.ndarray | None]:
    chain = CollapsedChain(spec, dist, streams)
    chain.burn(burn_in)
    top = np.empty((chain.lanes, length))
    bottom = np.ones((chain.lanes, length)) if estimator == "ratio" else None
    rows = np.empty((length, spec.p + 2)) if trace else None
    for t in range(length):
        rec = chain.step()
        if bottom is None:
            top[:, t] = rec.w
        else:
            top[:, t] = np.abs(rec.z)
            bottom[:, t] = np.abs(rec.prev[:, 0])
        if rows is not None:
            rows[t, 0] = t + 1
            rows[t, 1 : spec.p + 1] = chain.thetas[0]
            rows[t, -1] = rec.w[0]
    values = clamped_log(top, chain.counts)
    if bottom is not None:
        # |z| and |θ_1| are clamped separately so 0/0 never appears.
        values -= clamped_log(bottom, chain.counts)
    if rows is not None:
        rows[:, -1] = clamped_log(rows[:, -1])
    return values, chain.counts, rows


def _estimate(
    spec: ModelSpec,
    dist: ErrorDist,
    n_steps: int,
    burn_in: int,
    stream: RandomStream,
    *,
    estimator: Estimator,
    replicates: int,
    threads: int,
    trace: bool,
    n_batches: int = DEFAULT_BATCHES,
) -> LyapEstimate:
    if n_steps < MIN_STEPS:
        raise ConfigError(f"n_steps must be at least {MIN_STEPS}, got {n_steps}")
    if burn_in < MIN_BURN_IN:
        raise ConfigError(f"burn_in must be at least {MIN_BURN_IN}, got {burn_in}")
    lanes, length = lane_layout(n_steps, replicates)
    lane_streams = stream.spawn(lanes)
    groups = chunks(lane_streams, math.ceil(lanes / max(threads, 1)))
    logger.info(
        "estimating log rho (%s): %d lanes x %d steps, burn-in %d, %r",
        estimator, lanes, length, burn_in, stream,
    )
    results = map_ordered(
        lambda group: _run_lanes(
            spec, dist, group, length, burn_in, estimator, trace and group is groups[0]
        ),
        groups,
        threads,
    )
    values = np.concatenate([r[0] for r in results])
    counts = StepCounts()
    for _, c, _ in results:
        counts = counts.merge(c)
    mean, se = lane_batch_means(values, n_batches)
    total = lanes * length
    est = LyapEstimate(
        mean_logw=mean,
        stderr=se,
        n_steps=total,
        burn_in=burn_in,
        replicates=lanes,
        underflow_count=counts.underflow,
        degenerate_count=counts.degenerate,
        restart_count=counts.restarts,
        estimator=estimator,
        seed=stream.record(),
        trace=results[0][2],
    )
    if counts.restarts:
        logger.warning("%d degenerate steps forced a uniform restart", counts.restarts)
    if not est.reliable:
        logger.warning(
            "log rho estimate unreliable: %.3g%% of log terms clamped at the floor",
            100 * est.underflow_rate,
        )
    elif not est.clean:
        logger.warning("log rho estimate not clean: %d clamped log terms", counts.underflow)
    return est


def estimate_lyapunov(
    spec: ModelSpec,
    dist: ErrorDist,
    n_steps: int,
    burn_in: int,
    stream: RandomStream,
    *,
    replicates: int = DEFAULT_REPLICATES,
    threads: int = 1,
    trace: bool = False,
) -> LyapEstimate:
    """Estimate log ρ as the ergodic average of log w(θ*_{t-1}, e_t)."""
    return _estimate(
        spec, dist, n_steps, burn_in, stream,
        estimator="logw", replicates=replicates, threads=threads, trace=trace,
    )


def estimate_lyapunov_alt(
    spec: ModelSpec,
    dist: ErrorDist,
    n_steps: int,
    burn_in: int,
    stream: RandomStream,
    *,
    replicates: int = DEFAULT_REPLICATES,
    threads: int = 1,
) -> LyapEstimate:
    """Estimate log ρ as the ergodic average of log(|z(θ*_{t-1}, e_t)| / |θ*_{t-1,1}|)."""
    return _estimate(
        spec, dist, n_steps, burn_in, stream,
        estimator="ratio", replicates=replicates, threads=threads, trace=False,
    )
