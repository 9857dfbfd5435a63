"""Published closed forms of the two-particle eigenvalue coefficients.

``GOLDEN[l][s]`` is the coefficient of ``q^(2l) gamma^s`` in ``E - E0`` as an
element of Q(P), ``P = n1 - n2 + lambda``, for ``l = 1..4``.  The forms are
typed in exactly as printed, factored the same way, so that a mismatch points
at a single factor.
"""

from __future__ import annotations

from .algebra.poly import PPoly, PRatFunc
from .algebra.rational import Q


def _even(*coeffs) -> PRatFunc:
    """Polynomial in P^2 given highest power first."""
    c = []
    for v in reversed(coeffs):
        c.extend([Q(v), Q(0)])
    return PRatFunc(PPoly(c[:-1]))


def _d(k) -> PRatFunc:
    return _even(1, -k)  # P^2 - k


def _frac(num: PRatFunc, *den: PRatFunc, scale=1) -> PRatFunc:
    out = num * Q(scale)
    for d in den:
        out = out / d
    return out


def _table():
    one = PRatFunc.constant(1)
    d1, d2, d4, d9, d16 = _d(1), _d(2), _d(4), _d(9), _d(16)
    E1 = {2: _frac(one, d1)}

    pre2 = _frac(one, d4, d1)
    E2 = {
        2: pre2 * _even(6, -12),
        3: pre2 * Q(-6),
        4: pre2 * _frac(_even(5, 7), d1, d1, scale=Q(1, 4)),
    }

    pre3 = _frac(one, d9, d1)
    E3 = {
        2: pre3 * _even(12, -36),
        3: pre3 * Q(-48),
        4: pre3 * _frac(_even(15, -37, -2), d4, d1, d1, scale=4),
        5: pre3 * _frac(_even(7, 17), d4, d1, d1, scale=-4),
        6: pre3 * _frac(_even(9, 58, 29), d4, d1, d1, d1, d1, scale=Q(1, 2)),
    }

    pre4 = _frac(one, d16, d1)
    E4 = {
        2: pre4 * _frac(_even(7, -74, 112), d4, scale=4),
        3: pre4 * Q(-180),
        4: pre4 * _frac(
            _even(365, -6662, 42249, -115640, 119816, -18528), d9, d2, d2, d1, d1, scale=Q(3, 2)
        ),
        5: pre4 * _frac(
            _even(259, -3358, 11415, -4252, -25664), d9, d4, d4, d4, d1, d1, scale=-3
        ),
        6: pre4 * _frac(
            _even(2151, -18127, -10529, 293115, -501962, 79832),
            d9, d4, d4, d4, d1, d1, d1, d1, scale=Q(1, 4),
        ),
        7: pre4 * _frac(
            _even(715, -481, -43203, 94061, 104428),
            d9, d4, d4, d4, d1, d1, d1, d1, scale=Q(-1, 4),
        ),
        8: pre4 * _frac(
            _even(1469, 9144, -140354, 64228, 827565, 274748),
            d9, d4, d4, d4, d1, d1, d1, d1, d1, d1, scale=Q(1, 64),
        ),
    }
    return {1: E1, 2: E2, 3: E3, 4: E4}


GOLDEN = _table()


def divisor_sum(l: int) -> PRatFunc:
    """(l/2) * sum over divisors k of l of (1/(P-k) - 1/(P+k))."""
    P = PRatFunc.P()
    total = PRatFunc.constant(0)
    for k in range(1, l + 1):
        if l % k == 0:
            total = total + (1 / (P - k) - 1 / (P + k))
    return total * Q(l, 2)


def _corrected():
    one = PRatFunc.constant(1)
    d1, d4, d9, d16 = _d(1), _d(4), _d(9), _d(16)
    pre4 = _frac(one, d16, d1)
    # printed denominator factor (P^2-2)^2 replaced by (P^2-4)^3, numerator unchanged
    return {
        (4, 4): pre4 * _frac(
            _even(365, -6662, 42249, -115640, 119816, -18528), d9, d4, d4, d4, d1, d1, scale=Q(3, 2)
        ),
    }


# Coefficients whose printed form disagrees with every computed route.
CORRECTED = _corrected()
