"""Exact analysis of the order-1 TAR-ARCH model.

For p = 1 the collapsed chain lives on {-1, +1}, so its stationary law,
Lyapounov exponent, near-equilibrium function and the r-th moment
criterion all have closed forms in a handful of error-law integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..innovations import ErrorDist
from ..sphere import GridFunction

_POLES = np.array([[-1.0], [1.0]])


@dataclass(frozen=True, eq=False)
class Order1Analysis:
    """Closed forms for the two-state collapsed chain at order r.

    ``E[i][j]`` is E(w^r 1{next state}) from state i (0 = -1, 1 = +1):
    j = 0 switches state, j = 1 stays. The moment matrix [[E12, E11],
    [E21, E22]] in the usual numbering has spectral radius equal to the
    growth rate of E(∏ w^r).
    """

    r: float
    p1: float
    p2: float
    log_rho: float
    nu_minus: float
    nu_plus: float
    E: np.ndarray
    gamma_interval: tuple[float, float]

    @property
    def pi_minus(self) -> float:
        return self.p2 / (self.p1 + self.p2)

    @property
    def pi_plus(self) -> float:
        return self.p1 / (self.p1 + self.p2)

    @property
    def cond_4_1(self) -> tuple[bool, bool]:
        (e11, e12), (e21, e22) = self.E
        return bool(max(e12, e22) < 1), bool(e11 * e21 < (1 - e12) * (1 - e22))

    @property
    def drift_condition(self) -> bool:
        """Both halves of the two-state drift condition hold."""
        return all(self.cond_4_1)

    @property
    def cond_stationary_w_r(self) -> bool:
        return self.stationary_w_r < 1

    @property
    def stationary_w_r(self) -> float:
        """E_Π(w^r) under the stationary law of the collapsed chain."""
        (e11, e12), (e21, e22) = self.E
        return (self.p2 * (e11 + e12) + self.p1 * (e21 + e22)) / (self.p1 + self.p2)

    @property
    def moment_rate(self) -> float:
        (e11, e12), (e21, e22) = self.E
        return float(np.max(np.abs(np.linalg.eigvals([[e12, e11], [e21, e22]]))))

    @property
    def gamma(self) -> float | None:
        """A concrete λ(1)/λ(-1) inside ``gamma_interval``, if it is nonempty."""
        lo, hi = self.gamma_interval
        if not (self.drift_condition and lo < hi):
            return None
        if lo == 0 and math.isinf(hi):
            return 1.0
        if math.isinf(hi):
            return max(1.0, 2 * lo)
        if lo == 0:
            return min(1.0, hi / 2)
        return math.sqrt(lo * hi)

    def nu(self) -> GridFunction:
        return GridFunction(_POLES, np.array([self.nu_minus, self.nu_plus]))

    def lam(self) -> GridFunction:
        gamma = self.gamma
        if gamma is None:
            raise ConfigError("drift condition fails at this r, no lambda exists")
        return GridFunction(_POLES, np.array([1.0, gamma]))

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "p1": self.p1,
            "p2": self.p2,
            "pi_minus": self.pi_minus,
            "pi_plus": self.pi_plus,
            "log_rho": self.log_rho,
            "nu_minus": self.nu_minus,
            "nu_plus": self.nu_plus,
            "E": {
                "E11": self.E[0, 0],
                "E12": self.E[0, 1],
                "E21": self.E[1, 0],
                "E22": self.E[1, 1],
            },
            "cond_4_1": list(self.cond_4_1),
            "cond_stationary_w_r": self.cond_stationary_w_r,
            "stationary_w_r": self.stationary_w_r,
            "moment_rate": self.moment_rate,
            "gamma_interval": list(self.gamma_interval),
            "gamma": self.gamma,
        }


def order1_analysis(
    a1: float, a2: float, b1: float, b2: float, dist: ErrorDist, r: float
) -> Order1Analysis:
    """Closed-form analysis of the p = 1 model with (a1, b1) for x < 0, (a2, b2) otherwise."""
    if b1 <= 0 or b2 <= 0:
        raise ConfigError(f"b1 and b2 must be positive, got {b1}, {b2}")
    dist.check_order(r)
    # From -1: z = -(a1 - b1 e); from +1: z = a2 + b2 e.
    p1 = dist.tail_prob(a1 / b1, "+")
    p2 = dist.tail_prob(a2 / b2, "-")
    if not (0 < p1 < 1 and 0 < p2 < 1):
        raise ConfigError(f"switch probabilities must lie in (0, 1), got {p1}, {p2}")
    l1 = dist.log_abs_moment(a1, -b1)
    l2 = dist.log_abs_moment(a2, b2)
    total = p1 + p2
    log_rho = (p2 * l1 + p1 * l2) / total
    nu_plus = (l2 - l1) / (2 * total)

    pm = dist.partial_power_moment
    E = np.array(
        [
            [pm(a1, -b1, r, "-"), pm(a1, -b1, r, "+")],
            [pm(a2, b2, r, "-"), pm(a2, b2, r, "+")],
        ]
    )
    (e11, e12), (e21, e22) = E
    lo = e21 / (1 - e22) if e22 < 1 else math.inf
    hi = (1 - e12) / e11 if e11 > 0 else math.inf
    return Order1Analysis(
        r=float(r),
        p1=p1,
        p2=p2,
        log_rho=log_rho,
        nu_minus=-nu_plus,
        nu_plus=nu_plus,
        E=E,
        gamma_interval=(lo, hi),
    )
