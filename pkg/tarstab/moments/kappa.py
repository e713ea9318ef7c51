"""Kesten-type tail index κ: the root of ĝ(r) = 1.

For a model with log ρ < 0, ĝ(r) starts below 1 near r = 0 and (for
unbounded error support) eventually exceeds 1; κ is where it crosses.
Every ĝ evaluation reuses the same random numbers, which keeps r ↦ ĝ(r)
smooth enough for bracketed root finding.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import optimize

from ..collapsed import estimate_lyapunov
from ..errors import BracketError, PreconditionError
from ..innovations import ErrorDist
from ..model import ModelSpec
from ..streams import RandomStream
from .growth import DEFAULT_N_MAX, DEFAULT_REPLICATES, default_starts, growth_rate
from .smc import DEFAULT_PARTICLES

logger = logging.getLogger("tarstab")

DEFAULT_TOL = 0.02
PRECONDITION_STEPS = 100_000
PRECONDITION_BURN_IN = 1_000


@dataclass(frozen=True)
class GrowthParams:
    """Settings shared by every growth-rate evaluation in a κ search."""

    n_max: int = DEFAULT_N_MAX
    replicates: int = DEFAULT_REPLICATES
    particles: int = DEFAULT_PARTICLES
    grid_size: int = 256
    stationary_starts: int = 64
    threads: int = 1


@dataclass(frozen=True, eq=False)
class KappaSolution:
    kappa: float
    bracket: tuple[float, float]
    history: pd.DataFrame
    converged: bool
    tol: float
    monotone: bool
    log_rho: float
    seed: dict = field(default_factory=dict)

    @property
    def rate_at_kappa(self) -> float:
        row = self.history.iloc[(self.history["r"] - self.kappa).abs().argmin()]
        return float(row["rate"])

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "bracket": list(self.bracket),
            "converged": self.converged,
            "tol": self.tol,
            "monotone": self.monotone,
            "log_rho": self.log_rho,
            "seed": self.seed,
            "evaluations": self.history,
        }


def _monotone(history: pd.DataFrame, k: float = 3.0) -> bool:
    """ĝ nondecreasing in r up to k combined stderr."""
    h = history.sort_values("r")
    rates = h["rate"].to_numpy()
    ses = h["stderr"].to_numpy()
    drops = rates[:-1] - rates[1:]
    noise = k * np.sqrt(ses[:-1] ** 2 + ses[1:] ** 2)
    return bool(np.all(drops <= noise))


def solve_kappa(
    spec: ModelSpec,
    dist: ErrorDist,
    bracket: tuple[float, float],
    tol: float,
    growth_params: GrowthParams,
    stream: RandomStream,
    *,
    log_rho: float | None = None,
) -> KappaSolution:
    """Find κ with ĝ(κ) = 1 inside ``bracket``.

    ``log_rho`` skips the Lyapounov precondition run when already known.

    Raises:
        PreconditionError: log ρ̂ >= 0, so no positive root exists.
        BracketError: ĝ at the bracket ends does not straddle 1.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket}")
    if log_rho is None:
        log_rho = estimate_lyapunov(
            spec, dist, PRECONDITION_STEPS, PRECONDITION_BURN_IN, stream.child("lyapunov")
        ).mean_logw
    if log_rho >= 0:
        raise PreconditionError(
            f"kappa needs log rho < 0, estimated {log_rho:.6g}", log_rho=log_rho
        )

    starts = default_starts(
        spec,
        dist,
        stream.child("starts"),
        grid_size=growth_params.grid_size,
        stationary=growth_params.stationary_starts,
    )
    rows: list[dict] = []

    def evaluate(r: float) -> float:
        g = growth_rate(
            spec, dist, r, growth_params.n_max, growth_params.replicates, starts,
            stream.child("growth"),
            particles=growth_params.particles, threads=growth_params.threads,
        )
        rows.append({"r": r, "rate": g.rate, "stderr": g.stderr})
        logger.debug("kappa search: g(%.6g) = %.6g +- %.2g", r, g.rate, g.stderr)
        return g.rate - 1.0

    f_lo, f_hi = evaluate(lo), evaluate(hi)
    if not (f_lo < 0 < f_hi):
        raise BracketError((lo, hi), (f_lo + 1.0, f_hi + 1.0))
    kappa = optimize.brentq(evaluate, lo, hi, xtol=1e-4, rtol=1e-8, maxiter=60)
    history = pd.DataFrame(rows)
    converged = abs(history.iloc[-1]["rate"] - 1.0) <= tol
    monotone = _monotone(history)
    if not monotone:
        logger.warning("growth rate is not monotone in r over the kappa bracket")
    if not converged:
        logger.warning("kappa search ended with |g - 1| > %g", tol)
    return KappaSolution(
        kappa=float(kappa),
        bracket=(lo, hi),
        history=history,
        converged=bool(converged),
        tol=tol,
        monotone=monotone,
        log_rho=float(log_rho),
        seed=stream.record(),
    )


def scalar_kappa(b: float, dist: ErrorDist, *, r_max: float | None = None) -> float:
    """Root κ > 0 of b^κ E|e|^κ = 1: the ARCH(1) tail index.

    Raises:
        PreconditionError: log b + E log|e| >= 0 (no positive root).
        BracketError: b^r E|e|^r stays below 1 up to ``r_max``.
    """
    log_rho = math.log(b) + dist.log_abs_moment(0.0, 1.0)
    if log_rho >= 0:
        raise PreconditionError(f"no positive root: log b + E log|e| = {log_rho:.6g}", log_rho)
    r_max = min(r_max or dist.r0, dist.r0)

    def h(r: float) -> float:
        return r * math.log(b) + math.log(dist.abs_power_moment(r))

    lo = 1e-3
    hi = 1.0
    while h(hi) <= 0:
        if hi >= r_max:
            raise BracketError((lo, r_max), (math.exp(h(lo)), math.exp(h(r_max))))
        hi = min(2 * hi, r_max)
    return float(optimize.brentq(h, lo, hi, xtol=1e-12, rtol=1e-12))
