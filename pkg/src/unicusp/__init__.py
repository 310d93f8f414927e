"""Exact computations on rational curves with a single unibranch cusp."""

from .curves import CanonicalModel, ParamCurve, canonical_model, models_equivalent, validate
from .errors import UnicuspError
from .exactalg import Poly, RatFunc
from .semigroups import NumericalSemigroup, parse_semigroup

__all__ = [
    "CanonicalModel",
    "NumericalSemigroup",
    "ParamCurve",
    "Poly",
    "RatFunc",
    "UnicuspError",
    "canonical_model",
    "models_equivalent",
    "parse_semigroup",
    "validate",
]

__version__ = "0.1.0"
