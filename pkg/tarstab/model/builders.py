"""Constructors for the standard model families."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..innovations import ErrorDist, Gaussian, ScaleMixture
from .spec import ModelSpec, RegimeCoeffs


def ar_arch(
    avec: Sequence[float], bvec: Sequence[float], *, a0: float = 0.0, b0: float = 1.0
) -> ModelSpec:
    """Single-regime AR(p)-ARCH(p) model."""
    avec = np.asarray(avec, dtype=float)
    regime = RegimeCoeffs(a0=a0, avec=avec, b0=b0, bvec=bvec)
    return ModelSpec(len(avec), (), {(): regime})


def arch(bvec: Sequence[float], *, b0: float = 1.0) -> ModelSpec:
    """Pure ARCH(p): ξ_t = (b0² + Σ b_i² ξ_{t-i}²)^{1/2} e_t."""
    return ar_arch(np.zeros(len(bvec)), bvec, b0=b0)


def tar_arch1(
    a1: float,
    a2: float,
    b1: float,
    b2: float,
    *,
    a0: float = 0.0,
    b0: float = 1.0,
) -> ModelSpec:
    """Order-1 TAR-ARCH: (a1, b1) when x < 0, (a2, b2) when x >= 0."""
    return ModelSpec(
        1,
        [[1.0]],
        {
            (-1,): RegimeCoeffs(a0=a0, avec=[a1], b0=b0, bvec=[b1]),
            (1,): RegimeCoeffs(a0=a0, avec=[a2], b0=b0, bvec=[b2]),
        },
    )


def tarch_delay1(
    b1vec: Sequence[float],
    b2vec: Sequence[float],
    *,
    b10: float = 1.0,
    b20: float = 1.0,
) -> ModelSpec:
    """TARCH(p) with delay 1: ARCH coefficients b1vec when x_1 < 0, else b2vec."""
    b1vec = np.asarray(b1vec, dtype=float)
    b2vec = np.asarray(b2vec, dtype=float)
    if b1vec.shape != b2vec.shape:
        raise ValueError("both regimes need the same number of ARCH coefficients")
    p = len(b1vec)
    plane = np.zeros(p)
    plane[0] = 1.0
    zeros = np.zeros(p)
    return ModelSpec(
        p,
        [plane],
        {
            (-1,): RegimeCoeffs(a0=0.0, avec=zeros, b0=b10, bvec=b1vec),
            (1,): RegimeCoeffs(a0=0.0, avec=zeros, b0=b20, bvec=b2vec),
        },
    )


def delay_specific_tarch2(
    b1: float, b2: float, *, b10: float = 1.0, b20: float = 1.0
) -> ModelSpec:
    """Order-2 TARCH whose ARCH part is b1·‖X‖ when ξ_{t-1} < 0, b2·‖X‖ otherwise."""
    return tarch_delay1([b1, b1], [b2, b2], b10=b10, b20=b20)


def mixture_arch2_equivalent(
    b1: float, b2: float, base: ErrorDist | None = None
) -> tuple[ModelSpec, ErrorDist]:
    """The ARCH(2) model with unit coefficients and errors ½f(u/b1)/b1 + ½f(u/b2)/b2.

    Shares its stability criterion with ``delay_specific_tarch2(b1, b2)``
    under ``base`` errors when ``base`` is symmetric.
    """
    base = base or Gaussian()
    return arch([1.0, 1.0]), ScaleMixture(base, (0.5, 0.5), (b1, b2))
