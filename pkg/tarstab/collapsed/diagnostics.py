"""Stationarity diagnostics for the collapsed chain."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..innovations import ErrorDist
from ..model import ModelSpec
from ..stats import batch_means, binomial_stderr, ks_two_sample, lane_batch_means
from ..streams import RandomStream
from .chain import CollapsedChain

logger = logging.getLogger("tarstab")

DEFAULT_THIN = 50
DEFAULT_LANES = 32
KS_ALPHA = 0.01
# Elementwise tolerance for θ*_{t,1} == z/w in sanity mode.
IDENTITY_TOL = 1e-12


def _thinned_run(
    spec: ModelSpec,
    dist: ErrorDist,
    n: int,
    burn_in: int,
    streams: list[RandomStream],
    thin: int,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Thinned samples of z/w and of θ*_{t,1}, plus the max identity gap."""
    chain = CollapsedChain(spec, dist, streams)
    chain.burn(burn_in)
    length = math.ceil(n / chain.lanes)
    ratios, firsts = [], []
    gap = 0.0
    for t in range(1, length + 1):
        rec = chain.step()
        ratio = rec.z / rec.w
        gap = max(gap, float(np.max(np.abs(ratio - chain.thetas[:, 0]))))
        if t % thin == 0:
            ratios.append(ratio)
            firsts.append(chain.thetas[:, 0].copy())
    return np.concatenate(ratios), np.concatenate(firsts), gap


@dataclass(frozen=True)
class StationarityReport:
    ks_distance: float
    ks_pvalue: float
    samples: int
    thin: int
    identity_gap: float
    positive_fraction: float
    sign_balance_z: float
    alpha: float = KS_ALPHA

    @property
    def passed(self) -> bool:
        return self.ks_pvalue >= self.alpha and self.identity_gap <= IDENTITY_TOL

    @property
    def sign_balanced(self) -> bool:
        """First coordinate is positive about half the time (3 binomial stderr)."""
        return abs(self.sign_balance_z) <= 3.0

    def to_dict(self) -> dict:
        return {
            "ks_distance": self.ks_distance,
            "ks_pvalue": self.ks_pvalue,
            "samples": self.samples,
            "thin": self.thin,
            "identity_gap": self.identity_gap,
            "positive_fraction": self.positive_fraction,
            "sign_balanced": self.sign_balanced,
            "passed": self.passed,
        }


def stationarity_diagnostic(
    spec: ModelSpec,
    dist: ErrorDist,
    n: int,
    burn_in: int,
    stream: RandomStream,
    *,
    thin: int = DEFAULT_THIN,
    lanes: int = DEFAULT_LANES,
    alpha: float = KS_ALPHA,
) -> StationarityReport:
    """Compare the law of z(θ*_0, e_1)/w(θ*_0, e_1) with that of θ*_{0,1}.

    Under stationarity the two agree. Samples come from two independent
    runs so the two-sample KS test sees independent sets; within one run
    the identity θ*_{t,1} = z/w is also checked elementwise.
    """
    if n < 10_000:
        raise ConfigError(f"stationarity diagnostic needs n >= 10000, got {n}")
    ratios, _, gap_a = _thinned_run(spec, dist, n, burn_in, stream.child("a").spawn(lanes), thin)
    _, firsts, gap_b = _thinned_run(spec, dist, n, burn_in, stream.child("b").spawn(lanes), thin)
    distance, pvalue = ks_two_sample(ratios, firsts)
    positive = float(np.mean(firsts > 0))
    balance = (positive - 0.5) / binomial_stderr(0.5, len(firsts))
    report = StationarityReport(
        ks_distance=distance,
        ks_pvalue=pvalue,
        samples=len(firsts),
        thin=thin,
        identity_gap=max(gap_a, gap_b),
        positive_fraction=positive,
        sign_balance_z=balance,
        alpha=alpha,
    )
    if not report.passed:
        logger.warning("stationarity diagnostic failed: KS p = %.3g", pvalue)
    return report


@dataclass(frozen=True)
class Order1Frequencies:
    """Empirical behaviour of the two-state chain on {-1, +1}."""

    switch_from_minus: float  # estimates p1 = P(θ' = +1 | θ = -1)
    switch_from_minus_se: float
    switch_from_plus: float  # estimates p2 = P(θ' = -1 | θ = +1)
    switch_from_plus_se: float
    occupancy_minus: float
    occupancy_minus_se: float
    visits_minus: int
    visits_plus: int
    only_two_states: bool


def order1_frequencies(
    spec: ModelSpec,
    dist: ErrorDist,
    n: int,
    burn_in: int,
    stream: RandomStream,
    *,
    lanes: int = DEFAULT_LANES,
) -> Order1Frequencies:
    """Transition and occupancy frequencies of the p = 1 collapsed chain."""
    if spec.p != 1:
        raise ConfigError("order1_frequencies needs a p = 1 model")
    chain = CollapsedChain(spec, dist, stream.spawn(lanes))
    chain.burn(burn_in)
    length = math.ceil(n / lanes)
    prev = np.empty((lanes, length))
    nxt = np.empty((lanes, length))
    for t in range(length):
        rec = chain.step()
        prev[:, t] = rec.prev[:, 0]
        nxt[:, t] = chain.thetas[:, 0]
    only_two = bool(np.all(np.isin(nxt, (-1.0, 1.0))))
    from_minus = prev < 0
    n_minus = int(from_minus.sum())
    n_plus = int((~from_minus).sum())
    p1 = float(np.mean(nxt[from_minus] > 0)) if n_minus else math.nan
    p2 = float(np.mean(nxt[~from_minus] < 0)) if n_plus else math.nan
    # Occupancy is autocorrelated; batch means per lane.
    occ, occ_se = lane_batch_means((nxt < 0).astype(float))
    return Order1Frequencies(
        switch_from_minus=p1,
        switch_from_minus_se=binomial_stderr(p1, n_minus) if n_minus else math.nan,
        switch_from_plus=p2,
        switch_from_plus_se=binomial_stderr(p2, n_plus) if n_plus else math.nan,
        occupancy_minus=occ,
        occupancy_minus_se=occ_se,
        visits_minus=n_minus,
        visits_plus=n_plus,
        only_two_states=only_two,
    )


def stationary_power_moment(
    spec: ModelSpec,
    dist: ErrorDist,
    r: float,
    n: int,
    burn_in: int,
    stream: RandomStream,
    *,
    lanes: int = DEFAULT_LANES,
) -> tuple[float, float]:
    """E_Π(w(θ*_0, e_1)^r) with a batch-means stderr.

    E_Π(w^r) < 1 is neither necessary nor sufficient for a finite r-th
    moment; it is reported for comparison with the sharp conditions.
    """
    dist.check_order(r)
    chain = CollapsedChain(spec, dist, stream.spawn(lanes))
    chain.burn(burn_in)
    length = math.ceil(n / lanes)
    values = np.empty((lanes, length))
    for t in range(length):
        values[:, t] = chain.step().w ** r
    if lanes == 1:
        return batch_means(values[0])
    return lane_batch_means(values)
