"""Direct simulation of the full threshold AR-ARCH chain.

``simulate`` runs the exact recursion ξ_t = a(X_{t-1}) + b(X_{t-1}) e_t
with no rescaling, so transient models visibly explode. ``empirical_drift``
measures (1/n) E log(‖X_n‖/‖X_0‖) from large starting points; it carries
the state as a unit direction times exp(log_scale) so no radius overflows.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .collapsed.chain import ErrorBuffer
from .errors import ConfigError
from .innovations import ErrorDist
from .model import ModelSpec
from .sphere import uniform
from .stats import mean_and_stderr
from .streams import RandomStream

logger = logging.getLogger("tarstab")

EXPLOSION = 1e300
MIN_TOP_RADIUS = 1e6
DEFAULT_REPLICATES = 200


@dataclass(frozen=True, eq=False)
class PathRecord:
    """One simulated path ξ_1..ξ_n from the lag vector ``x0``.

    ``exploded_at`` is the first t whose ξ_t overflowed past EXPLOSION; the
    path stops before it.
    """

    xi: np.ndarray
    x0: np.ndarray
    exploded_at: int | None = None
    seed: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return len(self.x0)

    @property
    def exploded(self) -> bool:
        return self.exploded_at is not None

    def states(self) -> np.ndarray:
        """Lag vectors X_0..X_n, X_t = (ξ_t, ..., ξ_{t-p+1})."""
        series = np.concatenate([self.x0[::-1], self.xi])
        windows = np.lib.stride_tricks.sliding_window_view(series, self.p)
        return windows[:, ::-1].copy()

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states(), axis=1)

    def to_frame(self) -> pd.DataFrame:
        t = np.arange(len(self.xi) + 1)
        xi = np.concatenate([[self.x0[0]], self.xi])
        return pd.DataFrame({"t": t, "xi": xi, "norm": self.norms()})

    def to_dict(self) -> dict:
        return {
            "n": len(self.xi),
            "x0": self.x0,
            "exploded_at": self.exploded_at,
            "seed": self.seed,
        }


def simulate(
    spec: ModelSpec,
    dist: ErrorDist,
    x0: Sequence[float],
    n: int,
    stream: RandomStream,
    *,
    errors: Sequence[float] | None = None,
) -> PathRecord:
    """Simulate n steps of the full chain from ``x0``.

    ``errors`` replaces the draws from ``dist`` (at least n values).
    """
    if n < 1:
        raise ConfigError(f"n must be at least 1, got {n}")
    x = np.asarray(x0, dtype=float)
    if x.shape != (spec.p,):
        raise ConfigError(f"x0 must have length {spec.p}, got shape {x.shape}")
    if errors is None:
        e = dist.sample(stream, n)
    else:
        e = np.asarray(errors, dtype=float)
        if len(e) < n:
            raise ConfigError(f"need {n} injected errors, got {len(e)}")
    xi = np.empty(n)
    state = x.copy()
    exploded_at = None
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(n):
            a, b = spec.ab(state[None, :])
            value = a[0] + b[0] * e[t]
            if not abs(value) <= EXPLOSION:
                exploded_at = t + 1
                logger.warning("path numerically exploded at t=%d", exploded_at)
                break
            xi[t] = value
            state = np.concatenate([[value], state[:-1]])
    done = n if exploded_at is None else exploded_at - 1
    return PathRecord(xi=xi[:done], x0=x, exploded_at=exploded_at, seed=stream.record())


@dataclass(frozen=True, eq=False)
class DriftTable:
    """Per (radius, n) drift (1/n) E log(‖X_n‖/‖X_0‖) over random directions."""

    table: pd.DataFrame
    replicates: int
    restarts: int
    seed: dict = field(default_factory=dict)

    def at(self, radius: float, n: int) -> pd.Series:
        rows = self.table[(self.table["radius"] == radius) & (self.table["n"] == n)]
        return rows.iloc[0]

    def to_dict(self) -> dict:
        return {
            "replicates": self.replicates,
            "restarts": self.restarts,
            "seed": self.seed,
            "table": self.table,
        }


def _drift_run(
    spec: ModelSpec,
    dist: ErrorDist,
    log_radius: float,
    horizons: list[int],
    replicates: int,
    stream: RandomStream,
) -> tuple[dict[int, np.ndarray], int]:
    y = uniform(stream.child("directions"), replicates, spec.p)
    log_scale = np.full(replicates, log_radius)
    errors = ErrorBuffer(dist, stream.spawn(replicates, name="replicate"))
    restart_stream = stream.child("restart")
    out: dict[int, np.ndarray] = {}
    restarts = 0
    wanted = set(horizons)
    for t in range(1, horizons[-1] + 1):
        a, b = spec.scaled_ab(y, log_scale)
        xi = a + b * errors.next()
        nxt = np.concatenate([xi[:, None], y[:, :-1]], axis=1)
        norms = np.linalg.norm(nxt, axis=1)
        dead = norms == 0
        if np.any(dead):
            k = int(dead.sum())
            restarts += k
            nxt[dead] = uniform(restart_stream, k, spec.p)
            norms[dead] = 1.0
        y = nxt / norms[:, None]
        log_scale = log_scale + np.log(norms)
        if t in wanted:
            out[t] = (log_scale - log_radius) / t
    return out, restarts


def empirical_drift(
    spec: ModelSpec,
    dist: ErrorDist,
    radii: Sequence[float],
    horizons: Sequence[int],
    replicates: int,
    stream: RandomStream,
) -> DriftTable:
    """Drift table over starting radii and horizons.

    Each replicate starts at a uniform direction on the sphere of the given
    radius. Columns: radius, n, drift (direction average), stderr,
    max_direction (largest single-path drift).
    """
    radii = [float(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConfigError("radii must be a nonempty increasing list")
    if radii[0] <= 0:
        raise ConfigError("radii must be positive")
    if radii[-1] < MIN_TOP_RADIUS:
        raise ConfigError(f"largest radius must be at least {MIN_TOP_RADIUS:g}")
    horizons = sorted({int(n) for n in horizons})
    if not horizons or horizons[0] < 1:
        raise ConfigError("horizons must be positive integers")
    if replicates < 2:
        raise ConfigError("empirical_drift needs at least 2 replicates")

    rows = []
    restarts = 0
    for i, radius in enumerate(radii):
        drifts, k = _drift_run(
            spec, dist, math.log(radius), horizons, replicates, stream.child("radius", i)
        )
        restarts += k
        for n in horizons:
            mean, se = mean_and_stderr(drifts[n])
            rows.append(
                {
                    "radius": radius,
                    "n": n,
                    "drift": float(mean),
                    "stderr": float(se),
                    "max_direction": float(np.max(drifts[n])),
                }
            )
    if restarts:
        logger.warning("empirical drift: %d paths hit the zero state and restarted", restarts)
    return DriftTable(
        table=pd.DataFrame(rows, columns=["radius", "n", "drift", "stderr", "max_direction"]),
        replicates=replicates,
        restarts=restarts,
        seed=stream.record(),
    )
