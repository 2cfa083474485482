"""
Drinfeld-Jimbo quantum groups over Q(q) in triangular normal form.

qfield holds the coefficient field, cartan the Cartan data and ı parameters,
pbw the q-Serre quotient of the positive half, and uq the Hopf algebra itself.
"""

from .qfield import LaurentPoly, RatFunc, ONE, ZERO, parse_ratfunc, format_ratfunc, qint, qfact, qbinom, qpow
from .cartan import CARTAN_TYPES, CartanDatum, IParams, build_datum, named_datum, default_params
from .pbw import DEFAULT_DEGREE_CAP, GradedVector, IdealBasis, SerreQuotient
from .uq import QuantumGroup, UElement, TensorElement

__all__ = [
    "LaurentPoly",
    "RatFunc",
    "ONE",
    "ZERO",
    "parse_ratfunc",
    "format_ratfunc",
    "qint",
    "qfact",
    "qbinom",
    "qpow",
    "CARTAN_TYPES",
    "CartanDatum",
    "IParams",
    "build_datum",
    "named_datum",
    "default_params",
    "DEFAULT_DEGREE_CAP",
    "GradedVector",
    "IdealBasis",
    "SerreQuotient",
    "QuantumGroup",
    "UElement",
    "TensorElement",
]
