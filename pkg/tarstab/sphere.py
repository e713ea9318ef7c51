"""Points and functions on the unit sphere Θ = {θ : ‖θ‖ = 1}.

Deterministic low-discrepancy grids (Halton points pushed through the
normal quantile and projected onto the sphere), uniform draws, distances to
the axial planes and threshold hyperplanes, and ``GridFunction``, the
nearest-grid-point table used for ν and λ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.stats import qmc

from .streams import RandomStream

# Unit-norm tolerance every stored state satisfies.
UNIT_TOL = 1e-12


def normalize(x: np.ndarray) -> np.ndarray:
    """Scale each row of ``x`` to unit Euclidean norm."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x / np.linalg.norm(x)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def uniform(stream: RandomStream, n: int, p: int) -> np.ndarray:
    """Draw ``n`` points uniformly on the sphere in R^p, shape (n, p)."""
    g = stream.generator.standard_normal((n, p))
    # A zero row has probability 0; redraw rather than divide by it.
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0):
        bad = norms == 0
        g[bad] = stream.generator.standard_normal((int(bad.sum()), p))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def axial_distance(thetas: np.ndarray) -> np.ndarray:
    """min_i |θ_i| for each row: distance scale to the axial set H_0."""
    return np.min(np.abs(np.atleast_2d(thetas)), axis=1)


def hyperplane_distance(thetas: np.ndarray, hyperplanes: np.ndarray) -> np.ndarray:
    """Distance from each row to the nearest threshold hyperplane."""
    thetas = np.atleast_2d(thetas)
    if hyperplanes.size == 0:
        return np.full(len(thetas), np.inf)
    unit = hyperplanes / np.linalg.norm(hyperplanes, axis=1, keepdims=True)
    return np.min(np.abs(thetas @ unit.T), axis=1)


def sphere_grid(
    p: int,
    n: int,
    *,
    hyperplanes: np.ndarray | None = None,
    band: float = 1e-6,
    exclude_axial: bool = True,
) -> np.ndarray:
    """Deterministic low-discrepancy grid of ``n`` sphere points.

    Points within ``band`` of an axial plane (if ``exclude_axial``) or of a
    threshold hyperplane are skipped. For p = 1 the sphere is {-1, +1} and
    that pair is returned regardless of ``n``.
    """
    if p == 1:
        return np.array([[-1.0], [1.0]])
    planes = np.zeros((0, p)) if hyperplanes is None else np.asarray(hyperplanes, float)
    sampler = qmc.Halton(d=p, scramble=False)
    # The first Halton point is the origin, which has no direction.
    sampler.fast_forward(1)
    accepted: list[np.ndarray] = []
    count = 0
    while count < n:
        pts = normalize(stats.norm.ppf(sampler.random(max(2 * (n - count), 16))))
        keep = hyperplane_distance(pts, planes) > band
        if exclude_axial:
            keep &= axial_distance(pts) > band
        pts = pts[keep]
        accepted.append(pts)
        count += len(pts)
    return np.concatenate(accepted)[:n]


def axial_probes(grid: np.ndarray) -> np.ndarray:
    """Project grid points onto each axial plane {θ_i = 0}."""
    p = grid.shape[1]
    probes = []
    for i in range(p):
        pts = grid.copy()
        pts[:, i] = 0.0
        norms = np.linalg.norm(pts, axis=1)
        probes.append(pts[norms > 0] / norms[norms > 0, None])
    return np.concatenate(probes) if probes else np.zeros((0, p))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function on the sphere stored as values at grid points.

    Evaluation is nearest-grid-point, so discontinuities across thresholds
    are not smeared by interpolation.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values must have the same length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function values must be finite")

    def nearest(self, thetas: np.ndarray) -> np.ndarray:
        """Index of the nearest grid point for each row of ``thetas``."""
        # On the sphere the largest inner product is the nearest point.
        return np.argmax(np.atleast_2d(thetas) @ self.grid.T, axis=1)

    def __call__(self, thetas: np.ndarray) -> np.ndarray:
        return self.values[self.nearest(thetas)]

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))
