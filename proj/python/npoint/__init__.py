"""Python access to the npoint library.

Exact values come back as :class:`fractions.Fraction`; numerical values as floats, with the
full-precision decimal strings available from the ``*_digits`` helpers.
"""

import json
from fractions import Fraction

from . import _npoint
from ._npoint import (
    ConvergenceError,
    DomainError,
    IntegrityError,
    IoError,
    MissingDataError,
    NpointError,
    ParseError,
    RangeError,
    SizeLimitError,
    suite_names,
)

__all__ = [
    "Engine",
    "correlator",
    "polynomial",
    "f_eval",
    "f_eval_digits",
    "e_integral",
    "genus_sum",
    "verify",
    "suite_names",
    "NpointError",
    "SizeLimitError",
    "DomainError",
    "RangeError",
    "ConvergenceError",
    "MissingDataError",
    "IntegrityError",
    "IoError",
    "ParseError",
]


class Engine:
    """Memoized intersection-number engine."""

    def __init__(self, max_genus=12, max_points=10):
        self._engine = _npoint.Engine(max_genus, max_points)

    def correlator(self, genus, exponents):
        return Fraction(self._engine.correlator(genus, list(exponents)))

    def correlator_any_genus(self, exponents):
        return Fraction(self._engine.correlator_any_genus(list(exponents)))

    def polynomial(self, genus, points):
        """Coefficients of F_{g,n} keyed by non-increasing exponent tuples; empty when unstable."""
        unstable, terms = self._engine.polynomial(genus, points)
        return {} if unstable else {d: Fraction(c) for d, c in terms}

    def write_cache(self, path, genus, points):
        return self._engine.write_cache(str(path), genus, points)

    def load_cache(self, path):
        self._engine.load_cache(str(path))


_default = None


def _engine():
    global _default
    if _default is None:
        _default = Engine()
    return _default


def correlator(genus, exponents):
    return _engine().correlator(genus, exponents)


def polynomial(genus, points):
    return _engine().polynomial(genus, points)


def f_eval_digits(x, precision=128, force_quadrature=False):
    return _npoint.f_eval(list(map(float, x)), precision, force_quadrature)


def f_eval(x, precision=128, force_quadrature=False):
    r = f_eval_digits(x, precision, force_quadrature)
    return {
        "full": float(r["full"]),
        "stable": float(r["stable"]),
        "unstable": float(r["unstable"]),
        "error_estimate": r["error_estimate"],
    }


def e_integral(x, precision=128, force_quadrature=False):
    return float(_npoint.e_integral(list(map(float, x)), precision, force_quadrature))


def genus_sum(x, tolerance=1e-8, max_genus=12, precision=128):
    r = _npoint.genus_sum(list(map(float, x)), tolerance, max_genus, precision)
    return dict(r, value=float(r["value"]), unstable=float(r["unstable"]))


def verify(suite, precision=128):
    return json.loads(_npoint.verify(suite, precision))
