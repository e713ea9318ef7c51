"""Sequential Monte Carlo for E(∏_{t<=n} (δ + w(θ*_{t-1}, e_t))^r | θ*_0 = θ).

The product is a multiplicative functional of the collapsed chain, so it
is estimated the way a particle filter estimates a normalizing constant:
particles move with the chain, each step multiplies their weights by
(δ + w)^r, the running log-mean weight accumulates, and systematic
resampling keeps the cloud on the paths that dominate the expectation.
The product of mean weights is unbiased for every n.

Errors are drawn from a wider proposal (the error law scaled by
sqrt(1 + r)) and reweighted by f/g, which puts particles where
|e|^r f(e) has its mass.

All starting points share the same error draws and resampling uniforms,
so estimates at neighbouring starts (and at neighbouring r) move
together.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from ..collapsed import collapse
from ..collapsed.chain import advance
from ..innovations import ErrorDist
from ..model import ModelSpec
from ..streams import RandomStream

DEFAULT_PARTICLES = 1000


def proposal_for(dist: ErrorDist, r: float) -> ErrorDist:
    return dist.scaled(math.sqrt(1.0 + r))


def systematic_resample(log_weights: np.ndarray, u0: float) -> np.ndarray:
    """Row-wise systematic resampling; returns flat indices into (S·N).

    ``log_weights`` has shape (S, N). One uniform ``u0`` in [0, 1) is shared
    by every row.
    """
    n_rows, n = log_weights.shape
    shifted = log_weights - np.max(log_weights, axis=1, keepdims=True)
    weights = np.exp(shifted)
    cum = np.cumsum(weights, axis=1)
    cum /= cum[:, -1:]
    cum[:, -1] = 1.0
    offsets = np.arange(n_rows)[:, None]
    positions = (u0 + np.arange(n)) / n
    flat_cum = (cum + offsets).ravel()
    flat_pos = (positions[None, :] + offsets).ravel()
    idx = np.searchsorted(flat_cum, flat_pos, side="right")
    upper = np.repeat((np.arange(n_rows) + 1) * n - 1, n)
    return np.minimum(idx, upper)


def log_product_moments(
    spec: ModelSpec,
    dist: ErrorDist,
    starts: np.ndarray,
    r: float,
    n: int,
    stream: RandomStream,
    *,
    particles: int = DEFAULT_PARTICLES,
    delta: float = 0.0,
    importance: bool = True,
) -> np.ndarray:
    """log E(∏_{t<=k} (δ + w_t)^r | θ*_0 = start) for k = 1..n.

    Returns an array of shape (len(starts), n).
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    n_starts = len(starts)
    proposal = proposal_for(dist, r) if importance else dist
    states = np.repeat(starts, particles, axis=0)
    out = np.empty((n_starts, n))
    total = np.zeros(n_starts)
    comp = np.zeros(n_starts)
    log_n = math.log(particles)
    for t in range(n):
        u = proposal.sample(stream, particles)
        u0 = float(stream.generator.random())
        correction = dist.logpdf(u) - proposal.logpdf(u) if importance else np.zeros(particles)
        z, w = collapse(spec, states, np.tile(u, n_starts))
        with np.errstate(divide="ignore"):
            log_q = r * np.log(delta + w)
        lw = (log_q + np.tile(correction, n_starts)).reshape(n_starts, particles)
        step_mean = logsumexp(lw, axis=1) - log_n
        # Kahan-compensated running sum of per-step log means.
        y = step_mean - comp
        s = total + y
        with np.errstate(invalid="ignore"):
            comp = (s - total) - y
        comp[~np.isfinite(comp)] = 0.0
        total = s
        out[:, t] = total
        if t + 1 == n:
            break
        new = advance(states, z, w)
        stuck = ~np.isfinite(new).all(axis=1)
        if np.any(stuck):
            new[stuck] = states[stuck]
        dead = ~np.isfinite(step_mean)
        if np.any(dead):
            lw[dead] = 0.0
        states = new[systematic_resample(lw, u0)]
    return out
