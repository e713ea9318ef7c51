"""Threshold AR-ARCH(p) model specifications.

A ``ModelSpec`` partitions R^p by homogeneous hyperplanes h_j·x = 0 and
attaches a ``RegimeCoeffs`` to every reachable sign pattern. Within a
regime

    a(x) = a0 + avec·x,    b(x) = (b0² + Σ b_i² x_i²)^{1/2},

and the homogeneous parts used by the collapsed chain drop the intercepts:
a*(x) = avec·x, b*(x) = (Σ b_i² x_i²)^{1/2}. Points lying exactly on a
hyperplane take sgn(0) = +1.

Regime lookup is table driven: a sign pattern becomes the integer code
Σ_j [h_j·x >= 0]·2^j, and per-regime coefficients are stacked into arrays
indexed by that code, so whole batches of states evaluate in one numpy
expression.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize

from ..errors import ConfigError, MissingRegimeError
from ..sphere import UNIT_TOL

Pattern = tuple[int, ...]

# 2^m regime tables stay small below this many hyperplanes.
MAX_HYPERPLANES = 16


def _frozen_vector(values, p: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape != (p,):
        raise ConfigError(f"{name} must have length {p}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be finite, got {arr.tolist()}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RegimeCoeffs:
    """Coefficients of one regime: a = a0 + avec·x, b² = b0² + Σ b_i² x_i²."""

    a0: float
    avec: np.ndarray
    b0: float
    bvec: np.ndarray

    def __post_init__(self) -> None:
        avec = np.array(self.avec, dtype=float).reshape(-1)
        p = len(avec)
        object.__setattr__(self, "avec", _frozen_vector(avec, p, "avec"))
        object.__setattr__(self, "bvec", _frozen_vector(self.bvec, p, "bvec"))
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "b0", float(self.b0))
        if not (math.isfinite(self.a0) and math.isfinite(self.b0)):
            raise ConfigError("regime intercepts must be finite")
        if self.b0 < 0 or np.any(self.bvec < 0):
            raise ConfigError(
                "ARCH coefficients must be nonnegative, "
                f"got b0={self.b0}, bvec={self.bvec.tolist()}"
            )

    @property
    def p(self) -> int:
        return len(self.avec)

    @property
    def b_bounded_below(self) -> bool:
        """b is bounded away from 0 on this regime (b0 > 0 or all b_i > 0)."""
        return self.b0 > 0 or bool(np.all(self.bvec > 0))

    def replace(self, **changes) -> RegimeCoeffs:
        fields = {"a0": self.a0, "avec": self.avec, "b0": self.b0, "bvec": self.bvec}
        fields.update(changes)
        return RegimeCoeffs(**fields)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegimeCoeffs):
            return NotImplemented
        return (
            self.a0 == other.a0
            and self.b0 == other.b0
            and np.array_equal(self.avec, other.avec)
            and np.array_equal(self.bvec, other.bvec)
        )

    def to_dict(self) -> dict:
        return {
            "a0": self.a0,
            "avec": self.avec.tolist(),
            "b0": self.b0,
            "bvec": self.bvec.tolist(),
        }


@dataclass(frozen=True)
class SphereState:
    """A unit vector θ ∈ Θ, the collapsed chain's state."""

    theta: tuple[float, ...]

    def __post_init__(self) -> None:
        theta = tuple(float(t) for t in np.asarray(self.theta, dtype=float).reshape(-1))
        norm = math.sqrt(sum(t * t for t in theta))
        if abs(norm - 1.0) > UNIT_TOL:
            raise ValueError(f"sphere state must have unit norm, got {norm!r}")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def normalized(cls, x: Iterable[float]) -> SphereState:
        arr = np.asarray(list(x), dtype=float)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        arr = arr / norm
        return cls(tuple(arr / np.linalg.norm(arr)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.theta)

    @property
    def p(self) -> int:
        return len(self.theta)


def _pattern_code(pattern: Pattern) -> int:
    return sum(1 << j for j, s in enumerate(pattern) if s > 0)


def _code_pattern(code: int, m: int) -> Pattern:
    return tuple(1 if code >> j & 1 else -1 for j in range(m))


class ModelSpec:
    """A threshold AR-ARCH(p) model.

    Args:
        p: Model order.
        hyperplanes: m normal vectors h_j of length p. Each is rescaled so
            its first nonzero coordinate is 1; that coordinate must be
            positive so the rescaling keeps the side labels.
        regimes: Sign pattern (tuple of ±1, length m) to coefficients.
            Every attainable pattern must be present.

    Raises:
        ConfigError: On malformed coefficients or hyperplanes.
        MissingRegimeError: When an attainable pattern has no regime.
    """

    def __init__(
        self,
        p: int,
        hyperplanes: Iterable[Iterable[float]] = (),
        regimes: Mapping[Pattern, RegimeCoeffs] | None = None,
    ) -> None:
        if int(p) != p or p < 1:
            raise ConfigError(f"model order p must be a positive integer, got {p}")
        self.p = int(p)
        self.hyperplanes = self._normalize_hyperplanes(hyperplanes)
        if self.m > MAX_HYPERPLANES:
            raise ConfigError(f"at most {MAX_HYPERPLANES} hyperplanes supported, got {self.m}")
        if not regimes:
            raise ConfigError("a model needs at least one regime")
        self.regimes: dict[Pattern, RegimeCoeffs] = {}
        for pattern, coeffs in regimes.items():
            pattern = tuple(int(s) for s in pattern)
            if len(pattern) != self.m or any(s not in (-1, 1) for s in pattern):
                raise ConfigError(f"pattern {pattern} is not a ±1 vector of length {self.m}")
            if coeffs.p != self.p:
                raise ConfigError(f"regime {pattern} has order {coeffs.p}, model has {self.p}")
            self.regimes[pattern] = coeffs
        for pattern in self.attainable_patterns:
            if pattern not in self.regimes:
                raise MissingRegimeError(pattern)
        self._build_tables()

    def _normalize_hyperplanes(self, hyperplanes) -> np.ndarray:
        rows = [np.asarray(h, dtype=float).reshape(-1) for h in hyperplanes]
        out = np.zeros((len(rows), self.p))
        for j, h in enumerate(rows):
            if h.shape != (self.p,) or not np.all(np.isfinite(h)):
                raise ConfigError(f"hyperplane {j} must be a finite vector of length {self.p}")
            nonzero = np.flatnonzero(h)
            if len(nonzero) == 0:
                raise ConfigError(f"hyperplane {j} is the zero vector")
            lead = h[nonzero[0]]
            if lead < 0:
                raise ConfigError(
                    f"hyperplane {j} must have a positive leading coordinate, got {h.tolist()}"
                )
            out[j] = h / lead
        out.setflags(write=False)
        return out

    def _build_tables(self) -> None:
        size = 1 << self.m
        self._present = np.zeros(size, dtype=bool)
        self._a0 = np.zeros(size)
        self._avec = np.zeros((size, self.p))
        self._b0sq = np.zeros(size)
        self._bsq = np.zeros((size, self.p))
        for pattern, c in self.regimes.items():
            k = _pattern_code(pattern)
            self._present[k] = True
            self._a0[k] = c.a0
            self._avec[k] = c.avec
            self._b0sq[k] = c.b0 * c.b0
            self._bsq[k] = c.bvec * c.bvec
        self._weights = 1 << np.arange(self.m)

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    @cached_property
    def attainable_patterns(self) -> tuple[Pattern, ...]:
        """Sign patterns some state x reaches, by LP feasibility.

        Pattern s is reached iff {h_j·x >= 0 for s_j = +1, h_j·x <= -1 for
        s_j = -1} is feasible (the -1 rows can be scaled, the +1 rows
        include ties).
        """
        if self.m == 0:
            return ((),)
        found = []
        for pattern in itertools.product((-1, 1), repeat=self.m):
            s = np.asarray(pattern, dtype=float)
            # s_j h_j·x >= [s_j < 0]  as  -s_j h_j·x <= -[s_j < 0]
            a_ub = -(s[:, None] * self.hyperplanes)
            b_ub = -(s < 0).astype(float)
            res = optimize.linprog(
                np.zeros(self.p),
                A_ub=a_ub,
                b_ub=b_ub,
                bounds=[(None, None)] * self.p,
                method="highs",
            )
            if res.status == 0:
                found.append(pattern)
        return tuple(found)

    # -- regime lookup -------------------------------------------------------

    def codes(self, xs: np.ndarray) -> np.ndarray:
        """Regime codes for each row of ``xs`` (shape (n, p))."""
        xs = np.atleast_2d(xs)
        if self.m == 0:
            return np.zeros(len(xs), dtype=np.intp)
        signs = xs @ self.hyperplanes.T >= 0
        codes = signs.astype(np.intp) @ self._weights
        if not np.all(self._present[codes]):
            bad = codes[~self._present[codes]][0]
            raise MissingRegimeError(_code_pattern(int(bad), self.m))
        return codes

    def pattern(self, x) -> Pattern:
        """Sign pattern of a single state, sgn(0) = +1."""
        return _code_pattern(int(self.codes(np.asarray(x, dtype=float))[0]), self.m)

    def regime(self, x) -> RegimeCoeffs:
        return self.regimes[self.pattern(x)]

    # -- vectorized kernels ---------------------------------------------------

    def homogeneous(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(a*(x), b*(x)) for each row of ``xs``."""
        xs = np.atleast_2d(xs)
        codes = self.codes(xs)
        a_star = np.einsum("ij,ij->i", self._avec[codes], xs)
        b_star = np.sqrt(np.einsum("ij,ij->i", self._bsq[codes], xs * xs))
        return a_star, b_star

    def ab(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(a(x), b(x)) including intercepts, for each row of ``xs``."""
        xs = np.atleast_2d(xs)
        codes = self.codes(xs)
        a = self._a0[codes] + np.einsum("ij,ij->i", self._avec[codes], xs)
        b = np.sqrt(self._b0sq[codes] + np.einsum("ij,ij->i", self._bsq[codes], xs * xs))
        return a, b

    def scaled_ab(self, xs: np.ndarray, log_scale: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(a(Lx)/L, b(Lx)/L) with L = exp(log_scale) per row, overflow free."""
        xs = np.atleast_2d(xs)
        codes = self.codes(xs)
        inv = np.exp(-np.asarray(log_scale, dtype=float))
        a = self._a0[codes] * inv + np.einsum("ij,ij->i", self._avec[codes], xs)
        b = np.sqrt(
            self._b0sq[codes] * inv * inv + np.einsum("ij,ij->i", self._bsq[codes], xs * xs)
        )
        return a, b

    # -- derived models -------------------------------------------------------

    @property
    def is_pure_arch(self) -> bool:
        """One ARCH law everywhere: no AR part and identical bvec across regimes."""
        coeffs = list(self.regimes.values())
        first = coeffs[0].bvec
        return all(not np.any(c.avec) and np.array_equal(c.bvec, first) for c in coeffs)

    @property
    def arch_coeffs(self) -> np.ndarray:
        """b_1..b_p of a pure ARCH model."""
        if not self.is_pure_arch:
            raise ConfigError("model is not a pure ARCH(p) model")
        return next(iter(self.regimes.values())).bvec.copy()

    def with_intercepts(self, a0: float, b0: float) -> ModelSpec:
        """Same homogeneous part, new intercepts in every regime."""
        regimes = {k: c.replace(a0=a0, b0=b0) for k, c in self.regimes.items()}
        return ModelSpec(self.p, self.hyperplanes, regimes)

    def scale_arch(self, c: float) -> ModelSpec:
        """Multiply every ARCH coefficient (b0 and bvec) by ``c``."""
        regimes = {k: r.replace(b0=c * r.b0, bvec=c * r.bvec) for k, r in self.regimes.items()}
        return ModelSpec(self.p, self.hyperplanes, regimes)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "hyperplanes": self.hyperplanes.tolist(),
            "regimes": [
                {"pattern": list(k), **c.to_dict()} for k, c in sorted(self.regimes.items())
            ],
        }

    def __repr__(self) -> str:
        return f"ModelSpec(p={self.p}, m={self.m}, regimes={len(self.regimes)})"


def eval_ab(spec: ModelSpec, x) -> tuple[float, float]:
    """(a(x), b(x)) at one state."""
    a, b = spec.ab(np.asarray(x, dtype=float))
    return float(a[0]), float(b[0])


def _theta(theta: SphereState | np.ndarray) -> np.ndarray:
    return theta.array if isinstance(theta, SphereState) else np.asarray(theta, dtype=float)


def eval_z(spec: ModelSpec, theta: SphereState | np.ndarray, u: float) -> float:
    """z(θ, u) = a*(θ) + b*(θ)·u."""
    a_star, b_star = spec.homogeneous(_theta(theta))
    return float(a_star[0] + b_star[0] * u)


def eval_w(spec: ModelSpec, theta: SphereState | np.ndarray, u: float) -> float:
    """w(θ, u) = ‖(z(θ, u), θ_1, ..., θ_{p-1})‖."""
    th = _theta(theta)
    z = eval_z(spec, th, u)
    return float(math.hypot(z, *th[:-1])) if spec.p > 1 else abs(z)
