"""Exact rational scalars and their text form.

Everything numeric in this package is an exact rational; no floating point
ever enters a computation.  ``Rat`` is the scalar constructor: gmpy2's mpq
when available (much faster on big pivots), ``fractions.Fraction`` otherwise.
Both keep values in lowest terms with a positive denominator and print as
"p/q" (or "p" for integers), so results are identical either way.  Set
``NEARFEAS_RAT=fraction`` to force the stdlib scalar.
"""

import math
import os
import re
from fractions import Fraction

if os.environ.get("NEARFEAS_RAT", "").lower() == "fraction":
    Rat = Fraction
    RAT_BACKEND = "fraction"
else:
    try:
        from gmpy2 import mpq as Rat

        RAT_BACKEND = "gmpy2"
    except ImportError:
        Rat = Fraction
        RAT_BACKEND = "fraction"

ZERO = Rat(0)
ONE = Rat(1)

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))$|^([+-]?\d+)$")


def parse_rat(text):
    """Parse "p/q" or "p"; the sign may only sit on the numerator."""
    if not isinstance(text, str):
        raise ValueError(f"expected rational string, got {text!r}")
    m = _RAT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    if m.group(3) is not None:
        return Rat(int(m.group(3)))
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Rat(num, den)


def format_rat(value):
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(value)


def as_rat(value):
    """Coerce an int, rational, or "p/q" string to Rat; floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floating-point values are not allowed")
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, int):
        return Rat(value)
    return Rat(value.numerator, value.denominator)


def is_integral(value):
    return value.denominator == 1


def rat_floor(value):
    return int(math.floor(value))


def rat_ceil(value):
    return int(math.ceil(value))


def to_float(value):
    """Decimal approximation for report readability only."""
    return int(value.numerator) / int(value.denominator)
