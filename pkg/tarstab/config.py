"""Run configuration: model, error law, analysis settings and seed.

A config is one JSON document::

    {
      "seed": 7,
      "model": {"p": 1, "hyperplanes": [[1]], "regimes": [
          {"pattern": [-1], "avec": [0.3], "bvec": [0.5]},
          {"pattern": [1], "avec": [-0.2], "bvec": [0.7]}]},
      "errors": {"family": "gaussian"},
      "analysis": {"n_steps": 200000, "r": 2}
    }

Unknown keys anywhere raise ``ConfigError``; a misspelt coefficient name
must never silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import encoding
from .errors import ConfigError
from .innovations import ErrorDist, make_dist
from .model import ModelSpec, RegimeCoeffs

_TOP_KEYS = {"seed", "model", "errors", "analysis"}
_MODEL_KEYS = {"p", "hyperplanes", "regimes"}
_REGIME_KEYS = {"pattern", "a0", "avec", "b0", "bvec"}


@dataclass(frozen=True)
class AnalysisParams:
    """Flat analysis settings shared by every command."""

    n_steps: int = 1_000_000
    burn_in: int = 10_000
    replicates: int = 32
    r: float = 2.0
    n_max: int = 40
    particles: int = 1000
    growth_replicates: int = 8
    grid_size: int = 256
    stationary_starts: int = 64
    bracket: tuple[float, float] = (0.5, 4.0)
    tol: float = 0.05
    radii: tuple[float, ...] = (1.0, 1e8, 1e50, 1e100)
    horizons: tuple[int, ...] = (50, 200)
    drift_replicates: int = 200
    matrix_steps: int = 100_000
    norm: str = "fro"
    x0: tuple[float, ...] | None = None
    length: int = 10_000
    thin: int = 50
    trace: bool = False
    nu_horizon: int = 25
    inner_samples: int = 1000
    probes: int = 64
    lambda_n: int = 10
    delta: float | None = None

    @classmethod
    def from_dict(cls, block: dict[str, Any] | None) -> AnalysisParams:
        block = dict(block or {})
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(block) - names
        if unknown:
            raise ConfigError(f"Unknown analysis keys: {sorted(unknown)}")
        for key in ("bracket", "radii", "horizons", "x0"):
            if block.get(key) is not None:
                block[key] = tuple(block[key])
        params = cls(**block)
        params.validate()
        return params

    def validate(self) -> None:
        if len(self.bracket) != 2 or not 0 < self.bracket[0] < self.bracket[1]:
            raise ConfigError(
                f"bracket must be [lo, hi] with 0 < lo < hi, got {list(self.bracket)}"
            )
        if self.r <= 0:
            raise ConfigError(f"r must be positive, got {self.r}")
        for name in ("n_steps", "burn_in", "replicates", "n_max", "particles", "length", "thin"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True, eq=False)
class RunConfig:
    model: ModelSpec
    errors: ErrorDist
    analysis: AnalysisParams = field(default_factory=AnalysisParams)
    seed: int = 0

    def with_seed(self, seed: int | None) -> RunConfig:
        """Command-line seed wins over the config's."""
        return self if seed is None else dataclasses.replace(self, seed=int(seed))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "model": self.model.to_dict(),
            "errors": self.errors.to_dict(),
            "analysis": self.analysis.to_dict(),
        }


def model_from_dict(block: dict[str, Any]) -> ModelSpec:
    """Build a ``ModelSpec`` from the ``model`` block."""
    if not isinstance(block, dict):
        raise ConfigError("model block must be an object")
    unknown = set(block) - _MODEL_KEYS
    if unknown:
        raise ConfigError(f"Unknown model keys: {sorted(unknown)}")
    if "p" not in block or "regimes" not in block:
        raise ConfigError("model block needs 'p' and 'regimes'")
    p = block["p"]
    regimes: dict[tuple[int, ...], RegimeCoeffs] = {}
    for entry in block["regimes"]:
        unknown = set(entry) - _REGIME_KEYS
        if unknown:
            raise ConfigError(f"Unknown regime keys: {sorted(unknown)}")
        pattern = tuple(entry.get("pattern", ()))
        if pattern in regimes:
            raise ConfigError(f"duplicate regime for pattern {list(pattern)}")
        regimes[pattern] = RegimeCoeffs(
            a0=entry.get("a0", 0.0),
            avec=entry.get("avec", [0.0] * p),
            b0=entry.get("b0", 1.0),
            bvec=entry.get("bvec", [0.0] * p),
        )
    return ModelSpec(p, block.get("hyperplanes", ()), regimes)


def parse_config(doc: dict[str, Any]) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"Unknown top-level keys: {sorted(unknown)}")
    if "model" not in doc:
        raise ConfigError("config needs a 'model' block")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit nonnegative integer, got {seed!r}")
    return RunConfig(
        model=model_from_dict(doc["model"]),
        errors=make_dist(doc.get("errors")),
        analysis=AnalysisParams.from_dict(doc.get("analysis")),
        seed=seed,
    )


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a config file."""
    try:
        doc = encoding.read(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(doc)
