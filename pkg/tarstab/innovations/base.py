"""The error-law interface shared by every innovation family.

An ``ErrorDist`` is an immutable description of the i.i.d. law of e_t. It
samples from an explicit ``RandomStream`` and answers the moment questions
the stability criteria ask: E log|α + βe|, side-restricted power moments,
sign and tail probabilities, and the Assumption A.2 bound sup (1+|u|) f(u).
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from typing import ClassVar, Literal

import numpy as np
from scipy import optimize

from ..errors import DomainError, MomentOrderError
from ..streams import RandomStream
from .quadrature import TAIL_MASS, QuadResult, expect

logger = logging.getLogger("tarstab")

Side = Literal["+", "-"]

# Relative tolerance of the plus/minus side split against the full moment.
SPLIT_RTOL = 1e-8

_LADDER_RATIO = 4.0
_LADDER_MAX = 12
_SUP_GRID = 4001


def _check_side(side: str) -> Side:
    if side == "−":
        side = "-"
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    return side  # type: ignore[return-value]


class ErrorDist(ABC):
    """Abstract law of the innovations e_t.

    Subclasses are frozen dataclasses. They supply the density, CDF, a
    sampler and a tail bound; moments come from quadrature unless a family
    overrides them with a closed form.
    """

    family: ClassVar[str]
    # Assumption A.1: full-support density bounded away from 0 on compacts.
    density_positive: ClassVar[bool] = True

    # -- family interface --------------------------------------------------

    @property
    @abstractmethod
    def r0(self) -> float:
        """Largest declared order with E|e|^r0 finite."""

    @property
    @abstractmethod
    def scale(self) -> float:
        """Characteristic scale used to place quadrature breakpoints."""

    @property
    def symmetric(self) -> bool:
        return True

    @property
    def mean_zero(self) -> bool:
        return self.symmetric

    @property
    def light_tailed(self) -> bool:
        return True

    @abstractmethod
    def logpdf(self, u):
        """Log density, vectorized over numpy input."""

    @abstractmethod
    def cdf(self, u):
        """P(e <= u)."""

    @abstractmethod
    def sf(self, u):
        """P(e > u)."""

    @abstractmethod
    def tail_bound(self) -> float:
        """A point beyond which each tail holds less than TAIL_MASS / 2."""

    @abstractmethod
    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        """Draw ``n`` i.i.d. errors from ``stream``."""

    @abstractmethod
    def scaled(self, c: float) -> ErrorDist:
        """The law of c·e."""

    @abstractmethod
    def to_dict(self) -> dict:
        """Config-block form; ``make_dist(d.to_dict()) == d``."""

    def inflection_points(self) -> tuple[float, ...]:
        """Positive density inflection points (mirrored for symmetric laws)."""
        return ()

    def _closed_abs_moment(self, r: float) -> float | None:
        return None

    # -- derived ------------------------------------------------------------

    def pdf(self, u):
        return np.exp(self.logpdf(u))

    def integration_bounds(self) -> tuple[float, float]:
        if self.light_tailed:
            bound = self.tail_bound()
            return -bound, bound
        return -math.inf, math.inf

    def breakpoints(self) -> tuple[float, ...]:
        """Piece endpoints for quadrature: 0, inflections and a scale ladder."""
        bound = self.tail_bound()
        points = {0.0}
        for x in self.inflection_points():
            points.update((x, -x))
        step = self.scale
        for _ in range(_LADDER_MAX):
            if step >= bound:
                break
            points.update((step, -step))
            step *= _LADDER_RATIO
        return tuple(sorted(points))

    def check_order(self, r: float) -> None:
        if r <= 0:
            raise ValueError(f"moment order must be positive, got {r}")
        if r > self.r0:
            raise MomentOrderError(r, self.r0)

    def expect(self, fn, **kwargs) -> QuadResult:
        """E fn(e) by adaptive quadrature; see ``quadrature.expect``."""
        return expect(self, fn, **kwargs)

    def abs_power_moment(self, r: float) -> float:
        """E|e|^r."""
        self.check_order(r)
        closed = self._closed_abs_moment(r)
        if closed is not None:
            return closed
        return self.expect(lambda u: abs(u) ** r, singular=(0.0,)).value

    def log_abs_moment(self, alpha: float, beta: float) -> float:
        """E log|alpha + beta·e|."""
        if beta == 0:
            if alpha == 0:
                raise DomainError("E log|alpha + beta e| is undefined at alpha = beta = 0")
            return math.log(abs(alpha))
        root = -alpha / beta
        return self.expect(lambda u: math.log(abs(alpha + beta * u)), singular=(root,)).value

    def log_hypot_moment(self, alpha: float, beta: float, s: float) -> float:
        """E ½ log((alpha + beta·e)² + s²).

        With s² = θ₁² + ... + θ_{p-1}² and (alpha, beta) = (a*(θ), b*(θ))
        this is the exact one-step mean q(θ) = E log w(θ, e).
        """
        if s == 0:
            return self.log_abs_moment(alpha, beta)
        if beta == 0:
            return math.log(math.hypot(alpha, s))
        root = -alpha / beta

        def integrand(u: float) -> float:
            return math.log(math.hypot(alpha + beta * u, s))

        return self.expect(integrand, singular=(root,)).value

    def partial_power_moment(self, alpha: float, beta: float, r: float, side: str) -> float:
        """E(|alpha + beta·e|^r 1{±(alpha + beta·e) > 0}) for side ``+`` or ``-``."""
        side = _check_side(side)
        self.check_order(r)
        sign = 1.0 if side == "+" else -1.0
        if beta == 0:
            return abs(alpha) ** r if sign * alpha > 0 else 0.0
        root = -alpha / beta
        # The side condition holds above the root when sign*beta > 0.
        bounds = {"lo": root} if sign * beta > 0 else {"hi": root}
        return self.expect(lambda u: abs(alpha + beta * u) ** r, singular=(root,), **bounds).value

    def split_power_moment(self, alpha: float, beta: float, r: float) -> tuple[float, float]:
        """Return (minus side, plus side) of E|alpha + beta·e|^r."""
        minus = self.partial_power_moment(alpha, beta, r, "-")
        plus = self.partial_power_moment(alpha, beta, r, "+")
        if alpha == 0:
            full = abs(beta) ** r * self.abs_power_moment(r)
        elif beta == 0:
            full = abs(alpha) ** r
        else:
            root = -alpha / beta
            full = self.expect(lambda u: abs(alpha + beta * u) ** r, singular=(root,)).value
        if not math.isclose(minus + plus, full, rel_tol=SPLIT_RTOL, abs_tol=1e-12):
            logger.warning(
                "side split of E|%g + %g e|^%g does not add up: %.12g + %.12g != %.12g",
                alpha, beta, r, minus, plus, full,
            )
        return minus, plus

    def tail_prob(self, c: float, side: str) -> float:
        """P(e > c) for side ``+``, P(e < -c) for side ``-``."""
        side = _check_side(side)
        return float(self.sf(c)) if side == "+" else float(self.cdf(-c))

    def sign_probs(self) -> tuple[float, float]:
        """(P(e < 0), P(e > 0))."""
        return self.tail_prob(0.0, "-"), self.tail_prob(0.0, "+")

    def sup_weighted_density(self) -> float:
        """sup_u (1 + |u|) f(u), the Assumption A.2 bound."""
        bound = self.tail_bound()
        grid = np.linspace(0.0, bound, _SUP_GRID)
        best = 0.0
        for sign in (1.0,) if self.symmetric else (1.0, -1.0):
            values = (1.0 + grid) * self.pdf(sign * grid)
            k = int(np.argmax(values))
            lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
            if hi > lo:
                res = optimize.minimize_scalar(
                    lambda u, s=sign: -(1.0 + u) * float(self.pdf(s * u)),
                    bounds=(lo, hi),
                    method="bounded",
                )
                best = max(best, -float(res.fun))
            best = max(best, float(values[k]))
        return best

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.to_dict().items() if k != "family")
        return f"{self.family}({params})"
