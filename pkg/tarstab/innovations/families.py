"""Concrete error families: gaussian, laplace, student-t and scale mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar

import numpy as np
from scipy import special, stats

from ..errors import ConfigError
from ..streams import RandomStream
from .base import ErrorDist
from .quadrature import TAIL_MASS

# Practical cap on declared moment orders for families with all moments.
ALL_MOMENTS_R0 = 64.0
# Student-t declares r0 just below its degrees of freedom.
STUDENT_MARGIN = 1e-9

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be positive and finite, got {value}")
    return value


@dataclass(frozen=True)
class Gaussian(ErrorDist):
    scale: float = 1.0

    family: ClassVar[str] = "gaussian"

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def r0(self) -> float:
        return ALL_MOMENTS_R0

    @cached_property
    def law(self):
        return stats.norm(scale=self.scale)

    def logpdf(self, u):
        z = np.asarray(u, dtype=float) / self.scale
        return -0.5 * z * z - math.log(self.scale) - _LOG_SQRT_2PI

    def pdf(self, u):
        z = np.asarray(u, dtype=float) / self.scale
        return np.exp(-0.5 * z * z) / (self.scale * math.sqrt(2 * math.pi))

    def cdf(self, u):
        return self.law.cdf(u)

    def sf(self, u):
        return self.law.sf(u)

    def tail_bound(self) -> float:
        return float(self.law.isf(TAIL_MASS / 2))

    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        return stream.generator.standard_normal(n) * self.scale

    def scaled(self, c: float) -> Gaussian:
        return Gaussian(self.scale * _positive("c", c))

    def inflection_points(self) -> tuple[float, ...]:
        return (self.scale,)

    def _closed_abs_moment(self, r: float) -> float:
        # s^r 2^{r/2} Γ((r+1)/2) / √π
        log_m = r * math.log(self.scale) + 0.5 * r * math.log(2) + special.gammaln((r + 1) / 2)
        return math.exp(log_m - 0.5 * math.log(math.pi))

    def sup_weighted_density(self) -> float:
        s = self.scale
        u = (-1.0 + math.sqrt(1.0 + 4.0 * s * s)) / 2.0
        return (1.0 + u) * float(self.pdf(u))

    def to_dict(self) -> dict:
        return {"family": self.family, "scale": self.scale}


@dataclass(frozen=True)
class Laplace(ErrorDist):
    scale: float = 1.0

    family: ClassVar[str] = "laplace"

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def r0(self) -> float:
        return ALL_MOMENTS_R0

    @cached_property
    def law(self):
        return stats.laplace(scale=self.scale)

    def logpdf(self, u):
        return -np.abs(np.asarray(u, dtype=float)) / self.scale - math.log(2 * self.scale)

    def pdf(self, u):
        return np.exp(-np.abs(np.asarray(u, dtype=float)) / self.scale) / (2 * self.scale)

    def cdf(self, u):
        return self.law.cdf(u)

    def sf(self, u):
        return self.law.sf(u)

    def tail_bound(self) -> float:
        return float(self.law.isf(TAIL_MASS / 2))

    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        return stream.generator.laplace(0.0, self.scale, n)

    def scaled(self, c: float) -> Laplace:
        return Laplace(self.scale * _positive("c", c))

    def _closed_abs_moment(self, r: float) -> float:
        return math.exp(r * math.log(self.scale) + special.gammaln(r + 1))

    def sup_weighted_density(self) -> float:
        u = max(self.scale - 1.0, 0.0)
        return (1.0 + u) * float(self.pdf(u))

    def to_dict(self) -> dict:
        return {"family": self.family, "scale": self.scale}


@dataclass(frozen=True)
class StudentT(ErrorDist):
    df: float = 5.0
    scale: float = 1.0

    family: ClassVar[str] = "student-t"

    def __post_init__(self) -> None:
        object.__setattr__(self, "df", _positive("df", self.df))
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def r0(self) -> float:
        return self.df - STUDENT_MARGIN

    @property
    def light_tailed(self) -> bool:
        return False

    @cached_property
    def law(self):
        return stats.t(self.df, scale=self.scale)

    @cached_property
    def _log_norm(self) -> float:
        nu = self.df
        return (
            special.gammaln((nu + 1) / 2)
            - special.gammaln(nu / 2)
            - 0.5 * math.log(nu * math.pi)
            - math.log(self.scale)
        )

    def logpdf(self, u):
        z = np.asarray(u, dtype=float) / self.scale
        return self._log_norm - 0.5 * (self.df + 1) * np.log1p(z * z / self.df)

    def cdf(self, u):
        return self.law.cdf(u)

    def sf(self, u):
        return self.law.sf(u)

    def tail_bound(self) -> float:
        return float(self.law.isf(TAIL_MASS / 2))

    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        return stream.generator.standard_t(self.df, n) * self.scale

    def scaled(self, c: float) -> StudentT:
        return StudentT(self.df, self.scale * _positive("c", c))

    def inflection_points(self) -> tuple[float, ...]:
        return (self.scale * math.sqrt(self.df / (self.df + 2)),)

    def _closed_abs_moment(self, r: float) -> float:
        nu = self.df
        log_m = (
            r * math.log(self.scale)
            + 0.5 * r * math.log(nu)
            + special.gammaln((r + 1) / 2)
            + special.gammaln((nu - r) / 2)
            - 0.5 * math.log(math.pi)
            - special.gammaln(nu / 2)
        )
        return math.exp(log_m)

    def to_dict(self) -> dict:
        return {"family": self.family, "df": self.df, "scale": self.scale}


@dataclass(frozen=True)
class ScaleMixture(ErrorDist):
    """Law of c_K·e where K picks component k with probability weights[k].

    With two components of weight ½ and scales (b₁, b₂) this is the
    density ½ f(u/b₁)/b₁ + ½ f(u/b₂)/b₂.
    """

    base: ErrorDist = field(default_factory=Gaussian)
    weights: tuple[float, ...] = (0.5, 0.5)
    scales: tuple[float, ...] = (1.0, 1.0)

    family: ClassVar[str] = "mixture"

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        scales = tuple(_positive("mixture scale", c) for c in self.scales)
        if len(weights) != len(scales) or not weights:
            raise ConfigError("mixture weights and scales must be non-empty and equal length")
        if any(w < 0 for w in weights) or not math.isclose(sum(weights), 1.0, abs_tol=1e-12):
            raise ConfigError(f"mixture weights must be nonnegative and sum to 1, got {weights}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "scales", scales)

    @cached_property
    def components(self) -> tuple[ErrorDist, ...]:
        return tuple(self.base.scaled(c) for c in self.scales)

    @property
    def r0(self) -> float:
        return self.base.r0

    @property
    def scale(self) -> float:
        return min(c.scale for c in self.components)

    @property
    def symmetric(self) -> bool:
        return self.base.symmetric

    @property
    def mean_zero(self) -> bool:
        return self.base.mean_zero

    @property
    def light_tailed(self) -> bool:
        return self.base.light_tailed

    def logpdf(self, u):
        u = np.asarray(u, dtype=float)
        terms = [math.log(w) + c.logpdf(u) for w, c in zip(self.weights, self.components) if w > 0]
        return special.logsumexp(np.stack(terms), axis=0)

    def pdf(self, u):
        return sum(w * c.pdf(u) for w, c in zip(self.weights, self.components))

    def cdf(self, u):
        return sum(w * c.cdf(u) for w, c in zip(self.weights, self.components))

    def sf(self, u):
        return sum(w * c.sf(u) for w, c in zip(self.weights, self.components))

    def tail_bound(self) -> float:
        return max(c.tail_bound() for c in self.components)

    def breakpoints(self) -> tuple[float, ...]:
        points: set[float] = set()
        for c in self.components:
            points.update(c.breakpoints())
        return tuple(sorted(points))

    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        which = stream.generator.choice(len(self.weights), size=n, p=self.weights)
        return self.base.sample(stream, n) * np.asarray(self.scales)[which]

    def scaled(self, c: float) -> ScaleMixture:
        c = _positive("c", c)
        return ScaleMixture(self.base, self.weights, tuple(s * c for s in self.scales))

    def _closed_abs_moment(self, r: float) -> float:
        return sum(w * c.abs_power_moment(r) for w, c in zip(self.weights, self.components))

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "base": self.base.to_dict(),
            "weights": list(self.weights),
            "scales": list(self.scales),
        }


FAMILIES: dict[str, type[ErrorDist]] = {
    "gaussian": Gaussian,
    "laplace": Laplace,
    "student-t": StudentT,
    "mixture": ScaleMixture,
}

_KEYS = {
    "gaussian": {"scale"},
    "laplace": {"scale"},
    "student-t": {"df", "scale"},
    "mixture": {"base", "weights", "scales"},
}


def make_dist(config: dict | None = None, **kwargs) -> ErrorDist:
    """Build an error law from a config block.

    Accepts either a dict (``{"family": "student-t", "df": 4}``) or the
    same keys as keyword arguments. Unknown families and keys raise
    ``ConfigError``.
    """
    block = dict(config or {}, **kwargs)
    family = block.pop("family", "gaussian")
    if family not in FAMILIES:
        raise ConfigError(f"Unknown error family {family!r}; expected one of {sorted(FAMILIES)}")
    unknown = set(block) - _KEYS[family]
    if unknown:
        raise ConfigError(f"Unknown keys for {family} errors: {sorted(unknown)}")
    if family == "mixture":
        base = block.get("base", {"family": "gaussian"})
        if not isinstance(base, ErrorDist):
            base = make_dist(base)
        if "weights" not in block or "scales" not in block:
            raise ConfigError("mixture errors need both 'weights' and 'scales'")
        return ScaleMixture(base, tuple(block["weights"]), tuple(block["scales"]))
    try:
        return FAMILIES[family](**block)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
