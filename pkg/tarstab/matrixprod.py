"""Products of random companion matrices for pure ARCH(p).

Squaring the ARCH recursion gives the linear random-coefficient system
Y_t = C_t + B_t Y_{t-1} on Y_t = (ξ_t², ..., ξ_{t-p+1}²), where B_t has
first row (b_1² e_t², ..., b_p² e_t²) and ones on the subdiagonal. The top
Lyapounov exponent γ of M_t = B_t ⋯ B_1 is twice the collapsed-chain
exponent log ρ; this module estimates γ directly as an independent check.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from .collapsed.chain import ErrorBuffer, advance, collapse
from .errors import ConfigError
from .innovations import ErrorDist
from .model import arch
from .stats import lane_batch_means
from .streams import RandomStream

logger = logging.getLogger("tarstab")

MIN_STEPS = 10_000
DEFAULT_REPLICATES = 8
DEFAULT_TRACE_POINTS = 200


def _fro(ms: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("kij,kij->k", ms, ms))


def _row(ms: np.ndarray) -> np.ndarray:
    return np.abs(ms).sum(axis=2).max(axis=1)


NORMS = {"fro": _fro, "row": _row}


def _coeffs(b_coeffs: Sequence[float]) -> np.ndarray:
    b = np.asarray(b_coeffs, dtype=float)
    if b.ndim != 1 or len(b) < 1:
        raise ConfigError("b_coeffs must be a nonempty vector")
    if np.any(b < 0):
        raise ConfigError("ARCH coefficients must be nonnegative")
    return b


def build_B(b_coeffs: Sequence[float], e: float) -> np.ndarray:
    """The companion matrix B_t for one error value."""
    b = _coeffs(b_coeffs)
    return build_B_batch(b * b, np.array([e]))[0]


def build_B_batch(b_sq: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Stack of companion matrices, one per entry of ``e``."""
    p = len(b_sq)
    out = np.zeros((len(e), p, p))
    out[:, 0, :] = np.outer(e * e, b_sq)
    if p > 1:
        idx = np.arange(1, p)
        out[:, idx, idx - 1] = 1.0
    return out


def _norm_fn(norm: str):
    try:
        return NORMS[norm]
    except KeyError:
        raise ConfigError(
            f"unknown matrix norm {norm!r}; expected one of {sorted(NORMS)}"
        ) from None


class CompanionProduct:
    """Running products M_t = B_t ⋯ B_1, one per replicate, kept at unit norm.

    ``log_norm`` accumulates log‖M_t‖ exactly; ``matrix`` holds M_t/‖M_t‖.
    """

    def __init__(self, b_coeffs: Sequence[float], replicates: int = 1, norm: str = "fro"):
        self.b_coeffs = _coeffs(b_coeffs)
        self.b_sq = self.b_coeffs**2
        self.norm = norm
        self._norm = _norm_fn(norm)
        p = len(self.b_coeffs)
        eye = np.broadcast_to(np.eye(p), (replicates, p, p))
        norms = self._norm(eye)
        self.matrix = eye / norms[:, None, None]
        self.log_norm = np.log(norms)
        self.t = 0

    @property
    def p(self) -> int:
        return len(self.b_coeffs)

    def absorb(self, e: np.ndarray) -> np.ndarray:
        """Left-multiply by B_t and return Λ_t = log(‖M_t‖/‖M_{t-1}‖) per replicate."""
        prod = np.matmul(build_B_batch(self.b_sq, np.asarray(e, dtype=float)), self.matrix)
        norms = self._norm(prod)
        with np.errstate(divide="ignore"):
            step = np.log(norms)
        # An all-zero product (e = 0 with p = 1) stays zero from here on.
        safe = np.where(norms > 0, norms, 1.0)
        self.matrix = prod / safe[:, None, None]
        self.log_norm = self.log_norm + step
        self.t += 1
        return step


@dataclass(frozen=True, eq=False)
class GammaEstimate:
    gamma: float
    stderr: float
    n: int
    replicates: int
    norm: str
    seed: dict = field(default_factory=dict)
    trace: pd.DataFrame | None = None

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "stderr": self.stderr,
            "n": self.n,
            "replicates": self.replicates,
            "norm": self.norm,
            "seed": self.seed,
        }


def estimate_gamma(
    b_coeffs: Sequence[float],
    dist: ErrorDist,
    n: int,
    replicates: int,
    stream: RandomStream,
    *,
    norm: str = "fro",
    trace: bool = False,
    trace_points: int = DEFAULT_TRACE_POINTS,
) -> GammaEstimate:
    """Estimate γ = lim (1/t) log‖M_t‖ from ``replicates`` independent products.

    The stderr comes from batch means of the Λ_t increments of each
    replicate. With ``trace`` the result carries a (t, mean (1/t) log‖M_t‖)
    convergence table.
    """
    if n < MIN_STEPS:
        raise ConfigError(f"estimate_gamma needs n >= {MIN_STEPS}, got {n}")
    product = CompanionProduct(b_coeffs, replicates, norm)
    errors = ErrorBuffer(dist, stream.spawn(replicates, name="replicate"))
    logger.info(
        "matrix product gamma: p=%d, n=%d, %d replicates, %s norm", product.p, n, replicates, norm
    )
    increments = np.empty((replicates, n))
    checkpoints: set[int] = set()
    if trace:
        checkpoints = set(np.unique(np.geomspace(1, n, trace_points).astype(int)).tolist())
    rows = []
    start = product.log_norm.copy()
    for t in range(n):
        increments[:, t] = product.absorb(errors.next())
        if t + 1 in checkpoints:
            rows.append({"t": t + 1, "gamma_t": float(np.mean(product.log_norm - start)) / (t + 1)})
    finite = np.isfinite(increments)
    if not np.all(finite):
        dropped = int((~finite).sum())
        logger.warning("matrix product hit a zero norm; %d increments dropped", dropped)
        increments = np.where(finite, increments, 0.0)
    gamma, se = lane_batch_means(increments)
    return GammaEstimate(
        gamma=gamma,
        stderr=se,
        n=n,
        replicates=replicates,
        norm=norm,
        seed=stream.record(),
        trace=pd.DataFrame(rows, columns=["t", "gamma_t"]) if trace else None,
    )


@dataclass(frozen=True)
class TRecursionCheck:
    n: int
    max_T_deviation: float
    max_w_deviation: float

    @property
    def passed(self) -> bool:
        return max(self.max_T_deviation, self.max_w_deviation) <= 1e-8


def verify_T_recursion(
    b_coeffs: Sequence[float], dist: ErrorDist, n: int, stream: RandomStream
) -> TRecursionCheck:
    """Run the collapsed chain and the normalized product M_t T_0 side by side.

    With T_0 = (1/p)·1 and θ_0 = T_0^{1/2}, the squared coordinates of θ*_t
    equal M_t T_0 / 1'M_t T_0 and w_t² equals 1'M_t T_0 / 1'M_{t-1} T_0.
    Both sides see the same errors. The w deviation is relative.
    """
    b = _coeffs(b_coeffs)
    p = len(b)
    spec = arch(b)
    t0 = np.full(p, 1.0 / p)
    theta = np.sqrt(t0)[None, :]
    product = CompanionProduct(b, 1)
    prev_mass = float((product.matrix[0] @ t0).sum())
    prev_log = float(product.log_norm[0])
    u_all = dist.sample(stream, n)
    max_t = max_w = 0.0
    for u in u_all:
        u = np.array([u])
        z, w = collapse(spec, theta, u)
        if w[0] == 0:
            break
        theta = advance(theta, z, w)
        product.absorb(u)
        mt = product.matrix[0] @ t0
        mass = float(mt.sum())
        if mass == 0:
            break
        log_now = float(product.log_norm[0])
        ratio = math.exp(log_now - prev_log) * mass / prev_mass
        max_t = max(max_t, float(np.max(np.abs(theta[0] ** 2 - mt / mass))))
        max_w = max(max_w, abs(w[0] ** 2 - ratio) / max(1.0, ratio))
        prev_mass, prev_log = mass, log_now
    return TRecursionCheck(n=n, max_T_deviation=max_t, max_w_deviation=max_w)


def matrix_moment_rate(
    b_coeffs: Sequence[float],
    dist: ErrorDist,
    kappa: float,
    t_grid: Sequence[int],
    replicates: int,
    stream: RandomStream,
) -> pd.DataFrame:
    """(E‖M_t‖^{κ/2})^{1/t} on ``t_grid`` by plain Monte Carlo over products.

    The value is 1 at the tail index κ in the limit t → ∞. The Frobenius
    norm is used; the expectation is averaged in log space.
    """
    t_grid = sorted({int(t) for t in t_grid})
    if not t_grid or t_grid[0] < 1:
        raise ConfigError("t_grid must hold positive integers")
    product = CompanionProduct(b_coeffs, replicates)
    errors = ErrorBuffer(dist, stream.spawn(replicates, name="replicate"))
    rows = []
    wanted = iter(t_grid)
    target = next(wanted)
    for t in range(1, t_grid[-1] + 1):
        product.absorb(errors.next())
        if t == target:
            log_mean = float(logsumexp(0.5 * kappa * product.log_norm) - math.log(replicates))
            rows.append({"t": t, "log_moment": log_mean, "rate": math.exp(log_mean / t)})
            target = next(wanted, None)
    return pd.DataFrame(rows, columns=["t", "log_moment", "rate"])
