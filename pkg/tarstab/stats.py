"""Summary statistics for dependent simulation output."""

import math

import numpy as np
from scipy import stats

DEFAULT_BATCHES = 50
MIN_BATCHES = 20


def batch_means(x: np.ndarray, n_batches: int = DEFAULT_BATCHES) -> tuple[float, float]:
    """Mean and batch-means standard error of one ergodic sequence."""
    x = np.asarray(x, dtype=float)
    if n_batches < MIN_BATCHES:
        raise ValueError(f"need at least {MIN_BATCHES} batches, got {n_batches}")
    size = len(x) // n_batches
    if size < 1:
        raise ValueError(f"sequence of length {len(x)} too short for {n_batches} batches")
    batches = x[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(x.mean()), float(batches.std(ddof=1) / math.sqrt(n_batches))


def lane_batch_means(
    lanes: np.ndarray, n_batches: int = DEFAULT_BATCHES
) -> tuple[float, float]:
    """Combine independent equal-length chains (rows) into one mean and stderr."""
    lanes = np.atleast_2d(lanes)
    results = [batch_means(row, n_batches) for row in lanes]
    means = np.array([m for m, _ in results])
    ses = np.array([s for _, s in results])
    return float(means.mean()), float(math.sqrt(np.sum(ses**2)) / len(lanes))


def combined_stderr(*stderrs: float) -> float:
    return math.sqrt(sum(s * s for s in stderrs))


def agree(a: float, sa: float, b: float, sb: float, k: float = 4.0) -> bool:
    """True when two independent estimates differ by at most k combined stderr."""
    return abs(a - b) <= k * combined_stderr(sa, sb)


def mean_and_stderr(x: np.ndarray) -> tuple[float, float]:
    """Mean and i.i.d. standard error along the last axis."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return x.mean(axis=-1), x.std(axis=-1, ddof=1) / math.sqrt(n)


def binomial_stderr(prob: float, n: int) -> float:
    return math.sqrt(max(prob * (1.0 - prob), 0.0) / n)


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov distance and p-value."""
    result = stats.ks_2samp(a, b)
    return float(result.statistic), float(result.pvalue)


def slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of y on x."""
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])
