"""Knot invariants from DT codes: Jones polynomials and Khovanov homology."""

from .diagram import Diagram, realize
from .jones import jones_reduced, jones_unreduced
from .khovanov import kh_polynomial
from .knotcodes import DTCode, parse_dt
from .polynomial import BigradedPoly, LaurentPoly

__all__ = [
    "BigradedPoly",
    "DTCode",
    "Diagram",
    "LaurentPoly",
    "jones_reduced",
    "jones_unreduced",
    "kh_polynomial",
    "parse_dt",
    "realize",
]

__version__ = "0.1.0"
