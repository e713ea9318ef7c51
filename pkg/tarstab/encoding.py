"""JSON helpers for configs and reports.

Reports must be byte-identical across reruns with the same config and
seed, so everything goes through ``dumps`` here: sorted keys, fixed
indentation, numpy values converted to plain Python, non-finite floats
written as ``null``.
"""

import dataclasses
import enum
import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd


def jsonable(obj: Any) -> Any:
    """Convert reports, dataclasses and numpy values to JSON-safe objects."""
    if isinstance(obj, pd.DataFrame):
        return jsonable(obj.to_dict(orient="records"))
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps(obj: Any) -> str:
    """Serialize to deterministic, human-readable JSON text."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def loads(raw: str | bytes) -> Any:
    """Deserialize JSON text."""
    return json.loads(raw)


def read(path: str | Path) -> Any:
    """Load a JSON document from disk."""
    return loads(Path(path).read_text())


def write(path: str | Path, obj: Any) -> Path:
    """Write ``obj`` as deterministic JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path
