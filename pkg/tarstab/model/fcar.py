"""Bounded-coefficient (FCAR-ARCH) representation of a model.

For any a and b, taking

    a_0(x) = a(x) / (1 + Σ|x_i|),      a_i(x) = sgn(x_i) a(x) / (1 + Σ|x_i|),
    b_0(x) = b(x) / (1 + Σx_i²)^{1/2}, b_i(x) = b(x) / (1 + Σx_i²)^{1/2},

gives bounded coefficient functions with a(x) = a_0 + Σ a_i x_i and
b(x)² = b_0² + Σ b_i² x_i².
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spec import ModelSpec, eval_ab


@dataclass(frozen=True)
class FcarCoefficients:
    a: np.ndarray  # a_0 .. a_p
    b: np.ndarray  # b_0 .. b_p

    def reconstruct(self, x) -> tuple[float, float]:
        """(a(x), b(x)) rebuilt from the coefficients."""
        x = np.asarray(x, dtype=float)
        a = self.a[0] + float(self.a[1:] @ x)
        b = float(np.sqrt(self.b[0] ** 2 + np.sum(self.b[1:] ** 2 * x * x)))
        return a, b


def fcar_representation(spec: ModelSpec, x) -> FcarCoefficients:
    """Canonical bounded coefficients of ``spec`` at state ``x``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    a, b = eval_ab(spec, x)
    l1 = 1.0 + np.sum(np.abs(x))
    l2 = float(np.sqrt(1.0 + np.sum(x * x)))
    a_coeffs = np.concatenate([[a / l1], np.sign(x) * a / l1])
    b_coeffs = np.full(spec.p + 1, b / l2)
    return FcarCoefficients(a_coeffs, b_coeffs)


def threshold_bounds(spec: ModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient bounds (max_k |avec_k,i|, max_k b_k,i) over regimes.

    Within a regime the threshold model is already in FCAR form with
    constant a_i and b_i, so these are the bounds a Corollary 2.2 style
    check uses.
    """
    regimes = list(spec.regimes.values())
    a_bound = np.max(np.abs([c.avec for c in regimes]), axis=0)
    b_bound = np.max([c.bvec for c in regimes], axis=0)
    return a_bound, b_bound
