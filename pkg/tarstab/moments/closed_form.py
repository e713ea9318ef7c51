"""Closed-form moment criteria and their test functions.

These are the analytic sufficient conditions for a finite r-th moment:
the ARCH-type coefficient bounds, the polynomial test function built from
them, and the delay-1 TARCH condition with its regime-dependent weights.
Each one is also a yardstick for the simulated growth rates.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import optimize

from ..errors import ConfigError, ConstructionError, NotApplicableError
from ..innovations import ErrorDist

logger = logging.getLogger("tarstab")

IDENTITY_TOL = 1e-10
BETA_TOL = 1e-12


@dataclass(frozen=True)
class Corollary22Result:
    r: float
    branch: str
    c: tuple[float, ...]
    moment: float

    @property
    def total(self) -> float:
        return math.fsum(self.c)

    @property
    def holds(self) -> bool:
        return self.total < 1

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "branch": self.branch,
            "c": list(self.c),
            "moment": self.moment,
            "total": self.total,
            "holds": self.holds,
        }


def corollary22_check(
    avec_bound: Sequence[float], bvec_bound: Sequence[float], dist: ErrorDist, r: float
) -> Corollary22Result:
    """Coefficient-bound moment condition for |a_i(x)| <= a_i, b_i(x) <= b_i.

    Branch ``"i"`` (r <= 1) uses c_i = a_i^r + b_i^r E|e|^r; branch ``"ii"``
    (1 < r <= 2) uses c_i = a_i (Σa)^{r-1} + b_i^r E|e|^r, whose sum is
    (Σa)^r + Σ b_i^r E|e|^r.

    Raises:
        NotApplicableError: r > 2, asymmetric errors for 1 < r < 2, or
            errors without mean zero at r = 2.
    """
    a = np.asarray(avec_bound, dtype=float)
    b = np.asarray(bvec_bound, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ConfigError("coefficient bounds must be two vectors of equal length")
    if np.any(a < 0) or np.any(b < 0):
        raise ConfigError("coefficient bounds must be nonnegative")
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if r > 2:
        raise NotApplicableError(f"coefficient-bound condition needs r <= 2, got {r}")
    if 1 < r < 2 and not dist.symmetric:
        raise NotApplicableError(f"r = {r} in (1, 2) needs symmetric errors, {dist.family} is not")
    if r == 2 and not dist.mean_zero:
        raise NotApplicableError(f"r = 2 needs mean-zero errors, {dist.family} is not")

    m = dist.abs_power_moment(r)
    if r <= 1:
        c = a**r + b**r * m
        branch = "i"
    else:
        c = a * a.sum() ** (r - 1) + b**r * m
        branch = "ii"
    return Corollary22Result(r=float(r), branch=branch, c=tuple(c.tolist()), moment=m)


def solve_beta(c: Sequence[float]) -> float:
    """The root β in (0, 1) of Σ_i c_i β^{-i} = 1.

    Raises:
        ConstructionError: Σ c_i >= 1, or all c_i are zero.
    """
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ConfigError("c must be nonnegative")
    total = math.fsum(c)
    if total >= 1:
        raise ConstructionError(f"sum of c is {total:.6g} >= 1, no beta in (0, 1)")
    if total == 0:
        raise ConstructionError("all c are zero")
    powers = np.arange(1, len(c) + 1)

    def excess(beta: float) -> float:
        return float(np.sum(c * beta ** (-powers))) - 1.0

    # c_i β^{-i} = 1 at β = c_i^{1/i}, so the root lies above the largest of them.
    lo = 0.5 * float(np.max(c ** (1.0 / powers)))
    return float(optimize.brentq(excess, lo, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def _backward_d(c: np.ndarray, beta: float) -> np.ndarray:
    d = np.zeros(len(c) + 1)
    for i in range(len(c) - 1, -1, -1):
        d[i] = (c[i] + d[i + 1]) / beta
    return d[:-1]


@dataclass(frozen=True, eq=False)
class Theorem21TestFunction:
    """V(x) = 1 + Σ d_i |x_i|^r with E(V(X_1) | x) <= βV(x) + const."""

    beta: float
    d: np.ndarray
    c: np.ndarray
    r: float

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        values = 1.0 + np.abs(np.atleast_2d(x)) ** self.r @ self.d
        return float(values[0]) if x.ndim == 1 else values

    def recurrence_residual(self) -> float:
        """max_i |βd_i - c_i - d_{i+1}| with d_{p+1} = 0."""
        nxt = np.append(self.d[1:], 0.0)
        return float(np.max(np.abs(self.beta * self.d - self.c - nxt)))

    def to_dict(self) -> dict:
        return {"beta": self.beta, "d": self.d, "c": self.c, "r": self.r}


def theorem21_test_function(c: Sequence[float], r: float) -> Theorem21TestFunction:
    """Build β and d_i = Σ_{j>=i} β^{i-j-1} c_j; d_1 = 1 by construction."""
    c = np.asarray(c, dtype=float)
    beta = solve_beta(c)
    d = _backward_d(c, beta)
    if abs(d[0] - 1.0) > BETA_TOL:
        logger.warning("test function: d_1 = %.15g differs from 1", d[0])
    return Theorem21TestFunction(beta=beta, d=d, c=c, r=float(r))


@dataclass(frozen=True, eq=False)
class TarchTestFunction:
    """λ(θ) = Σ_i d_{j,i} |θ_i|^r, row j = 0 when θ_1 < 0 and 1 otherwise."""

    d: np.ndarray  # shape (2, p)
    r: float

    def __call__(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
        rows = self.d[(thetas[:, 0] >= 0).astype(int)]
        return np.einsum("ij,ij->i", rows, np.abs(thetas) ** self.r)


@dataclass(frozen=True, eq=False)
class TarchDelay1Result:
    r: float
    lhs: float
    E1: float
    E2: float
    p1: float
    p2: float
    moment: float
    c: tuple[float, ...]
    beta: float | None = None
    d: pd.DataFrame | None = None
    identity_residual: float | None = None

    @property
    def holds(self) -> bool:
        return self.lhs < 1

    @property
    def identities_ok(self) -> bool:
        return self.identity_residual is not None and self.identity_residual <= IDENTITY_TOL

    def test_function(self) -> TarchTestFunction:
        if self.d is None:
            raise ConstructionError("condition fails, no test function")
        return TarchTestFunction(self.d.to_numpy(), self.r)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "lhs": self.lhs,
            "holds": self.holds,
            "E1": self.E1,
            "E2": self.E2,
            "p1": self.p1,
            "p2": self.p2,
            "moment": self.moment,
            "c": list(self.c),
            "beta": self.beta,
            "d": None if self.d is None else self.d.to_numpy().tolist(),
            "identity_residual": self.identity_residual,
            "identities_ok": self.identities_ok,
        }


def _tarch_identity_residual(
    d: np.ndarray, b: np.ndarray, E1: float, E2: float, p1: float, p2: float, m: float, beta: float
) -> float:
    bm = b * m
    first = abs(d[0, 0] * E1 + d[1, 0] * E2 - m)
    last = np.abs(b[:, -1] * (d[0, 0] * E1 + d[1, 0] * E2) - beta * d[:, -1])
    inner = np.abs(bm[:, :-1] + (d[0, 1:] * p1 + d[1, 1:] * p2) - beta * d[:, :-1])
    scale = max(1.0, float(np.max(np.abs(d))))
    parts = [first, float(np.max(last))]
    if inner.size:
        parts.append(float(np.max(inner)))
    return max(parts) / scale


def tarch_delay1_condition(
    b1vec: Sequence[float], b2vec: Sequence[float], dist: ErrorDist, r: float
) -> TarchDelay1Result:
    """Moment condition for TARCH(p) with delay 1, plus its test function.

    With E1 = E(|e|^r 1{e<0}), E2 = E(|e|^r 1{e>0}), p1 = P(e<0),
    p2 = P(e>0) and m = E|e|^r the condition is

        b11^r E1 + b21^r E2 + Σ_{i>=2} (b1i^r p1 + b2i^r p2) m < 1.

    When it holds the weights d_{ji} = β^{-1} b_ji^r m + Σ_{k>i} β^{i-k-1} c_k
    give λ(θ) = Σ_i d_{j(θ),i} |θ_i|^r, and at r = 2 the one-step drift of
    λ(θ_1)/λ(θ) w^r equals β exactly.

    Raises:
        NotApplicableError: r > 2.
    """
    b1 = np.asarray(b1vec, dtype=float)
    b2 = np.asarray(b2vec, dtype=float)
    if b1.shape != b2.shape or b1.ndim != 1:
        raise ConfigError("b1vec and b2vec must be vectors of equal length")
    if np.any(b1 <= 0) or np.any(b2 <= 0):
        raise ConfigError("delay-1 TARCH coefficients must be positive")
    if r > 2:
        raise NotApplicableError(f"delay-1 TARCH condition needs r <= 2, got {r}")
    dist.check_order(r)

    E1 = dist.partial_power_moment(0.0, 1.0, r, "-")
    E2 = dist.partial_power_moment(0.0, 1.0, r, "+")
    p1, p2 = dist.sign_probs()
    m = dist.abs_power_moment(r)
    b = np.vstack([b1, b2]) ** r
    c = np.empty(len(b1))
    c[0] = b[0, 0] * E1 + b[1, 0] * E2
    c[1:] = (b[0, 1:] * p1 + b[1, 1:] * p2) * m
    lhs = math.fsum(c)
    result = TarchDelay1Result(
        r=float(r), lhs=lhs, E1=E1, E2=E2, p1=p1, p2=p2, moment=m, c=tuple(c.tolist())
    )
    if lhs >= 1:
        return result

    beta = solve_beta(c)
    p = len(c)
    # tail[i] = Σ_{k>i} β^{i-k-1} c_k, zero-based
    tail = np.array([sum(beta ** (i - k - 1) * c[k] for k in range(i + 1, p)) for i in range(p)])
    d = b * m / beta + tail
    residual = _tarch_identity_residual(d, b, E1, E2, p1, p2, m, beta)
    if residual > IDENTITY_TOL:
        logger.warning("delay-1 TARCH identities off by %.3g", residual)
    table = pd.DataFrame(d, index=["b1", "b2"], columns=[f"i{i + 1}" for i in range(p)])
    return TarchDelay1Result(
        r=float(r),
        lhs=lhs,
        E1=E1,
        E2=E2,
        p1=p1,
        p2=p2,
        moment=m,
        c=tuple(c.tolist()),
        beta=beta,
        d=table,
        identity_residual=residual,
    )
