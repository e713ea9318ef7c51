"""Innovation (error) laws and the moment integrals the criteria need."""

from .base import ErrorDist, Side
from .families import FAMILIES, Gaussian, Laplace, ScaleMixture, StudentT, make_dist
from .quadrature import QuadResult, expect

__all__ = [
    "FAMILIES",
    "ErrorDist",
    "Gaussian",
    "Laplace",
    "QuadResult",
    "ScaleMixture",
    "Side",
    "StudentT",
    "expect",
    "make_dist",
]
