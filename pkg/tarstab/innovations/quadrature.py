"""Adaptive quadrature of expectations E fn(e) under an error law.

The real line is cut at the law's breakpoints (0, inflection points and a
geometric ladder of scale multiples) and at any caller-supplied singular
points, and each piece goes to QUADPACK through ``scipy.integrate.quad``.
Light-tailed laws are truncated where the mass beyond is below
``TAIL_MASS``; heavy-tailed laws keep infinite outer pieces.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import TYPE_CHECKING

from scipy import integrate

if TYPE_CHECKING:
    from .base import ErrorDist

logger = logging.getLogger("tarstab")

TAIL_MASS = 1e-14
DEFAULT_ATOL = 1e-9
DEFAULT_RTOL = 1e-10
SUBDIVISION_LIMIT = 200


@dataclass(frozen=True)
class QuadResult:
    """An integral value with QUADPACK's accumulated error estimate."""

    value: float
    abserr: float


def _edges(dist: ErrorDist, lo: float, hi: float, singular: Iterable[float]) -> list[float]:
    cuts = {float(c) for c in (*dist.breakpoints(), *singular) if lo < c < hi}
    return [lo, *sorted(cuts), hi]


def expect(
    dist: ErrorDist,
    fn: Callable[[float], float],
    *,
    singular: Iterable[float] = (),
    lo: float = -math.inf,
    hi: float = math.inf,
    atol: float = DEFAULT_ATOL,
    rtol: float = DEFAULT_RTOL,
) -> QuadResult:
    """Compute E(fn(e) 1{lo < e < hi}).

    ``fn`` is called with scalar floats. Points in ``singular`` (where fn
    blows up or has a kink) become piece endpoints, which QUADPACK never
    evaluates.
    """
    left, right = dist.integration_bounds()
    lo, hi = max(lo, left), min(hi, right)
    if not lo < hi:
        return QuadResult(0.0, 0.0)
    edges = _edges(dist, lo, hi, singular)
    piece_atol = atol / (len(edges) - 1)

    def integrand(u: float) -> float:
        density = dist.pdf(u)
        return 0.0 if density == 0.0 else fn(u) * density

    total = 0.0
    abserr = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            value, err = integrate.quad(
                integrand, a, b, epsabs=piece_atol, epsrel=rtol, limit=SUBDIVISION_LIMIT
            )
            total += value
            abserr += err
    for w in caught:
        logger.warning("quadrature on %s: %s", dist.family, w.message)
    return QuadResult(float(total), float(abserr))
