"""Report envelopes and file output for the command line."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, TextIO

import pandas as pd

from . import __version__, encoding
from .config import RunConfig


def envelope(command: str, config: RunConfig, result: Any, **extra: Any) -> dict:
    """Wrap a result with the command name, config echo and seed."""
    return {
        "command": command,
        "version": __version__,
        "seed": config.seed,
        "config": config,
        "result": result,
        **extra,
    }


def error_report(command: str, exc: Exception, config: RunConfig | None = None) -> dict:
    payload: dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    for attr in ("log_rho", "bracket", "values", "pattern", "r", "r0"):
        if hasattr(exc, attr):
            payload[attr] = getattr(exc, attr)
    report: dict[str, Any] = {"command": command, "version": __version__, "error": payload}
    if config is not None:
        report["seed"] = config.seed
        report["config"] = config
    return report


def emit(report: dict, out: Path | None, name: str, stream: TextIO | None = None) -> Path | None:
    """Write ``report`` to ``out/name.json``, or to stdout when ``out`` is None."""
    if out is None:
        (stream or sys.stdout).write(encoding.dumps(report))
        return None
    return encoding.write(Path(out) / f"{name}.json", report)


def write_table(frame: pd.DataFrame, out: Path | None, name: str) -> Path:
    """Write a plot-ready CSV; ``out`` defaults to the working directory."""
    path = Path(out or ".") / f"{name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path
