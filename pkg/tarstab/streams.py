"""Named, splittable random streams.

Every analysis draws from a ``RandomStream`` derived from one root seed by
a path of names and indices (``root/collapsed/lane/3``). The path is hashed
into a numpy ``SeedSequence`` spawn key, so a sub-stream's output depends
only on ``(seed, path)``: never on creation order, thread scheduling or how
many siblings were created.
"""

from __future__ import annotations

import hashlib

import numpy as np

# 32-bit words keep spawn keys within SeedSequence's accepted range.
_KEY_BITS = 32


def _path_key(part: str | int) -> int:
    """Map one path component to a stable integer key."""
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError(f"stream index must be non-negative, got {part}")
        return int(part)
    digest = hashlib.sha256(str(part).encode()).digest()
    # Offset past the index range so names never collide with small indices.
    return (int.from_bytes(digest[:4], "big") | (1 << (_KEY_BITS - 1)))


class RandomStream:
    """A deterministic random stream identified by ``(seed, path)``.

    A stream must not be used from two threads at once; derive a child per
    work item instead (``child`` / ``spawn``).
    """

    def __init__(self, seed: int, path: tuple[str | int, ...] = ()) -> None:
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self.path = tuple(path)
        self._generator: np.random.Generator | None = None

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            seq = np.random.SeedSequence(
                self.seed, spawn_key=tuple(_path_key(p) for p in self.path)
            )
            self._generator = np.random.Generator(np.random.PCG64(seq))
        return self._generator

    def child(self, *parts: str | int) -> RandomStream:
        """Derive an independent named (or indexed) sub-stream."""
        return RandomStream(self.seed, self.path + parts)

    def spawn(self, n: int, name: str = "lane") -> list[RandomStream]:
        """Derive ``n`` indexed sub-streams under ``name``."""
        return [self.child(name, i) for i in range(n)]

    def fresh(self) -> RandomStream:
        """Return a stream that replays this stream's draws from the start.

        Used for common random numbers: two evaluations fed by fresh copies
        of one stream see identical draws.
        """
        return RandomStream(self.seed, self.path)

    def record(self) -> dict:
        """JSON-safe identification for reports."""
        return {"seed": self.seed, "path": "/".join(str(p) for p in self.path)}

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, path={self.record()['path']!r})"
