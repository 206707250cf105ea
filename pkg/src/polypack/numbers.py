"""Exact rational scalars.

All coordinates and sizes in this package are exact rationals; nothing is
ever rounded inside an algorithm.  gmpy2's mpq is used when available (it is
roughly an order of magnitude faster), with fractions.Fraction as a pure
Python fallback.  Both are kept in canonical form (reduced, positive
denominator) by construction.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rational = Fraction

#: Type alias used in annotations; values are mpq or Fraction instances.
Rat = Rational

ZERO = Rational(0)
ONE = Rational(1)


def rat(value, den=None):
    """Coerce ints, strings, Fractions or floats-free inputs to a Rat."""
    if den is not None:
        return Rational(value, den)
    if isinstance(value, float):
        raise TypeError("refusing float input; pass a string or rational")
    return Rational(value)


def parse_rational(text):
    """Parse "a/b", integer, or decimal strings ("0.1" -> 1/10) exactly."""
    s = text.strip() if isinstance(text, str) else text
    try:
        return Rational(s)
    except (ValueError, ZeroDivisionError, TypeError):
        pass
    try:
        return Rational(Fraction(s))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x):
    """Canonical text form: "a/b", or plain "a" for integers."""
    return str(Rational(x))


def rfloor(x):
    """Floor of a rational, as a Python int."""
    return int(x.numerator) // int(x.denominator)


def rceil(x):
    """Ceiling of a rational, as a Python int."""
    return -((-int(x.numerator)) // int(x.denominator))


def sqrt_under(x, bits=64):
    """Certified rational under-approximation of sqrt(x).

    Returns r with r*r <= x and relative error below 2**-bits (so
    x < (r * (1 + 2**-bits))**2 whenever x > 0).  Used only in lower
    bounds, where an under-approximation keeps the bound sound.
    """
    if x < 0:
        raise ValueError("sqrt of negative value")
    if x == 0:
        return ZERO
    num = int(x.numerator)
    den = int(x.denominator)
    shift = bits
    while True:
        r = math.isqrt((num << (2 * shift)) // den)
        if r >> bits:
            return Rational(r, 1 << shift)
        shift *= 2
