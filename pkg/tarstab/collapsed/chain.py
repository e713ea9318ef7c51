"""The collapsed chain θ*_t on the unit sphere.

One step maps θ to

    θ' = (z(θ, u), θ_1, ..., θ_{p-1}) / w(θ, u),

with z = a*(θ) + b*(θ)u and w the norm of the numerator. ``CollapsedChain``
advances many independent lanes at once; each lane owns a ``RandomStream``
so a lane's path never depends on how many lanes run beside it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..innovations import ErrorDist
from ..model import ModelSpec, SphereState
from ..sphere import uniform
from ..streams import RandomStream

logger = logging.getLogger("tarstab")

# log of the smallest normal double; log w is clamped here.
LOG_FLOOR = -690.0
ERROR_BLOCK = 4096
MAX_REPAIRS = 10


@dataclass
class StepCounts:
    """Audit counters for one simulation."""

    underflow: int = 0
    degenerate: int = 0
    restarts: int = 0

    def merge(self, other: StepCounts) -> StepCounts:
        return StepCounts(
            self.underflow + other.underflow,
            self.degenerate + other.degenerate,
            self.restarts + other.restarts,
        )


def clamped_log(x: np.ndarray, counts: StepCounts | None = None) -> np.ndarray:
    """log x with values below LOG_FLOOR (including log 0) clamped and counted."""
    with np.errstate(divide="ignore"):
        out = np.log(x)
    low = out < LOG_FLOOR
    if np.any(low):
        if counts is not None:
            counts.underflow += int(np.count_nonzero(low))
        out = np.where(low, LOG_FLOOR, out)
    return out


def collapse(spec: ModelSpec, thetas: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (z(θ, u), w(θ, u)) for rows of ``thetas``."""
    a_star, b_star = spec.homogeneous(thetas)
    z = a_star + b_star * u
    if spec.p == 1:
        return z, np.abs(z)
    tail = np.einsum("ij,ij->i", thetas[:, :-1], thetas[:, :-1])
    return z, np.sqrt(z * z + tail)


def advance(thetas: np.ndarray, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """New states (z, θ_1, ..., θ_{p-1}) / w; rows with w = 0 are left as NaN."""
    shifted = np.concatenate([z[:, None], thetas[:, :-1]], axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = shifted / w[:, None]
    # Re-normalize to keep rounding error from accumulating.
    with np.errstate(invalid="ignore"):
        return out / np.linalg.norm(out, axis=1, keepdims=True)


def step(
    spec: ModelSpec,
    theta: SphereState,
    u: float,
    *,
    dist: ErrorDist | None = None,
    stream: RandomStream | None = None,
) -> SphereState:
    """One collapsed update from ``theta`` with error ``u``.

    If w(θ, u) = 0 the error is redrawn once from ``dist``; if w is still 0
    the state restarts uniformly on the sphere. Both need ``stream``.
    """
    th = theta.array[None, :]
    z, w = collapse(spec, th, np.array([u]))
    if w[0] == 0:
        if dist is None or stream is None:
            raise ValueError("w(theta, u) = 0: a degenerate step needs dist and stream")
        z, w = collapse(spec, th, dist.sample(stream, 1))
        if w[0] == 0:
            logger.warning("degenerate collapsed step at %s; restarting uniformly", theta.theta)
            return SphereState(tuple(uniform(stream, 1, spec.p)[0]))
    return SphereState(tuple(advance(th, z, w)[0]))


class ErrorBuffer:
    """Per-lane error draws served one step at a time from blocks."""

    def __init__(self, dist: ErrorDist, streams: list[RandomStream], block: int = ERROR_BLOCK):
        self.dist = dist
        self.streams = streams
        self.block = block
        self._buf = np.empty((len(streams), 0))
        self._pos = 0

    def next(self) -> np.ndarray:
        if self._pos >= self._buf.shape[1]:
            self._buf = np.stack([self.dist.sample(s, self.block) for s in self.streams])
            self._pos = 0
        out = self._buf[:, self._pos]
        self._pos += 1
        return out


@dataclass
class StepRecord:
    """What one vectorized step produced for every lane."""

    prev: np.ndarray
    u: np.ndarray
    z: np.ndarray
    w: np.ndarray


class CollapsedChain:
    """Independent lanes of the collapsed chain advanced together.

    Args:
        spec: The model; only its homogeneous part is used.
        dist: Error law.
        streams: One stream per lane. Errors, starting points and repair
            draws come from named children of each lane stream.
        thetas: Optional starting states, shape (lanes, p). Defaults to
            uniform draws on the sphere.
    """

    def __init__(
        self,
        spec: ModelSpec,
        dist: ErrorDist,
        streams: list[RandomStream],
        thetas: np.ndarray | None = None,
    ) -> None:
        self.spec = spec
        self.dist = dist
        self.streams = streams
        self.errors = ErrorBuffer(dist, [s.child("errors") for s in streams])
        self._repair = [s.child("repair") for s in streams]
        if thetas is None:
            thetas = np.vstack([uniform(s.child("start"), 1, spec.p) for s in streams])
        self.thetas = np.array(thetas, dtype=float).reshape(len(streams), spec.p)
        self.counts = StepCounts()

    @property
    def lanes(self) -> int:
        return len(self.streams)

    def _repair_lane(self, k: int) -> tuple[float, float, np.ndarray]:
        """Apply the degenerate-step rule to lane ``k``."""
        self.counts.degenerate += 1
        th = self.thetas[k : k + 1]
        stream = self._repair[k]
        z, w = collapse(self.spec, th, self.dist.sample(stream, 1))
        tries = 0
        while w[0] == 0 and tries < MAX_REPAIRS:
            self.counts.restarts += 1
            th = uniform(stream, 1, self.spec.p)
            z, w = collapse(self.spec, th, self.dist.sample(stream, 1))
            tries += 1
        return float(z[0]), float(w[0]), th[0]

    def step(self) -> StepRecord:
        prev = self.thetas
        u = self.errors.next()
        z, w = collapse(self.spec, prev, u)
        bad = np.flatnonzero(w == 0)
        if len(bad):
            prev = prev.copy()
            for k in bad:
                z[k], w[k], prev[k] = self._repair_lane(int(k))
        self.thetas = advance(prev, z, w)
        return StepRecord(prev, u, z, w)

    def burn(self, n: int) -> None:
        for _ in range(n):
            self.step()

    def run(self, n: int, burn_in: int = 0) -> np.ndarray:
        """Advance ``burn_in`` + ``n`` steps; return log w, shape (lanes, n)."""
        self.burn(burn_in)
        out = np.empty((self.lanes, n))
        for t in range(n):
            out[:, t] = self.step().w
        return clamped_log(out, self.counts)


def propagate(
    spec: ModelSpec, thetas: np.ndarray, u: np.ndarray, counts: StepCounts | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """One step for a batch of states under given errors; returns (θ', w).

    Used by the common-random-number estimators, which cannot redraw. A
    row with w = 0 keeps its state and is counted as degenerate.
    """
    z, w = collapse(spec, thetas, u)
    new = advance(thetas, z, w)
    zero = w == 0
    if np.any(zero):
        if counts is not None:
            counts.degenerate += int(np.count_nonzero(zero))
        new[zero] = thetas[zero]
    return new, w
