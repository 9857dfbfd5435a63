"""The exact rational scalar.

``Rational`` is ``gmpy2.mpq`` when gmpy2 is importable and the compiled
backend is active, otherwise :class:`fractions.Fraction`.  The two compare
and hash identically, so results do not depend on which one is in use.
"""

from __future__ import annotations

import os
from fractions import Fraction

from ..kernels import BACKEND

Rational: type
if BACKEND == "compiled" and not os.environ.get("ECSOLVE_PURE_PYTHON"):
    try:
        from gmpy2 import mpq as Rational  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover
        Rational = Fraction
else:
    Rational = Fraction

RATIONAL_TYPES = (int, Fraction, Rational)


def Q(value, den=None):
    """Coerce ``value`` (int, rational, or ``"p/q"`` string) to ``Rational``."""
    if den is not None:
        return Rational(int(value), int(den))
    if type(value) is Rational:
        return value
    if isinstance(value, int):
        return Rational(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return Rational(int(p), int(q))
        return Rational(int(text))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string like '5/2'")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Rational(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def is_rational(value) -> bool:
    return isinstance(value, RATIONAL_TYPES)


def format_rational(value) -> str:
    """Canonical ``"p/q"`` text (denominator always present, q > 0)."""
    r = Q(value)
    return f"{int(r.numerator)}/{int(r.denominator)}"


def parse_rational(text: str):
    return Q(text)
