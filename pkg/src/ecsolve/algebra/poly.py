"""Univariate polynomials and rational functions in the indeterminate P.

P stands for ``n1 - n2 + lambda`` in the two-particle problem; the symbolic
eigenvalue coefficients live in the field Q(P).  Coefficient tuples are
stored constant term first.  ``PRatFunc`` values are always canonical:
coprime numerator and denominator, monic denominator.  Arithmetic uses the
Henrici forms so that only small gcds are ever computed.
"""

from __future__ import annotations

from .. import kernels
from .rational import Q, Rational, format_rational, is_rational

_ZERO = Rational(0)
_ONE = Rational(1)


class UsageError(ValueError):
    """Raised when an algebraic operation is called outside its contract."""


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class PPoly:
    """Polynomial in P with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = _strip([Q(x) for x in coeffs])

    @classmethod
    def _raw(cls, coeffs) -> "PPoly":
        obj = object.__new__(cls)
        obj.c = _strip(list(coeffs))
        return obj

    @classmethod
    def constant(cls, value) -> "PPoly":
        return cls._raw([Q(value)])

    @classmethod
    def x(cls) -> "PPoly":
        return cls._raw([_ZERO, _ONE])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self):
        return self.c[-1] if self.c else _ZERO

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, PPoly):
            return self.c == other.c
        if is_rational(other):
            return self.c == ((Q(other),) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else 0)
        return hash(self.c)

    def _coerce(self, other):
        if isinstance(other, PPoly):
            return other
        if is_rational(other):
            return PPoly._raw([Q(other)])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return PPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return PPoly._raw([-v for v in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if is_rational(other):
            if not other:
                return PPoly._raw(())
            return PPoly._raw([v * other for v in self.c])
        if not isinstance(other, PPoly):
            return NotImplemented
        return PPoly._raw(kernels.poly_mul(list(self.c), list(other.c)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise UsageError("negative power of a polynomial")
        out = PPoly._raw([_ONE])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = kernels.poly_divmod(list(self.c), list(o.c), 1 / o.c[-1])
        return PPoly._raw(q), PPoly._raw(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "PPoly") -> "PPoly":
        q, r = divmod(self, other)
        if r:
            raise UsageError("polynomial division is not exact")
        return q

    def monic(self) -> "PPoly":
        if not self.c or self.c[-1] == 1:
            return self
        inv = 1 / self.c[-1]
        return PPoly._raw([v * inv for v in self.c])

    def __call__(self, x):
        acc = _ZERO
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def derivative(self) -> "PPoly":
        return PPoly._raw([v * i for i, v in enumerate(self.c)][1:])

    def to_strings(self) -> list[str]:
        return [format_rational(v) for v in self.c]

    def __repr__(self) -> str:
        return f"PPoly({[str(v) for v in self.c]})"

    def __str__(self) -> str:
        return _poly_text(self.c, "P")


def _poly_text(coeffs, var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        v = coeffs[i]
        if not v:
            continue
        sign = "-" if v < 0 else "+"
        mag = -v if v < 0 else v
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def poly_gcd(a: PPoly, b: PPoly) -> PPoly:
    """Monic gcd by the Euclidean algorithm over Q (gcd(0, 0) = 0)."""
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


class PRatFunc:
    """Element of Q(P) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, PPoly) else PPoly._raw([Q(num)])
        if den is None:
            den = PPoly._raw([_ONE])
        elif not isinstance(den, PPoly):
            den = PPoly._raw([Q(den)])
        if den.is_zero():
            raise UsageError("zero denominator")
        g = poly_gcd(num, den) if not den.is_constant() else PPoly._raw([_ONE])
        if not g.is_one() and not num.is_zero():
            num = num.exact_div(g)
            den = den.exact_div(g)
        if num.is_zero():
            den = PPoly._raw([_ONE])
        lead = den.c[-1]
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: PPoly, den: PPoly) -> "PRatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def P(cls) -> "PRatFunc":
        return cls._raw(PPoly.x(), PPoly._raw([_ONE]))

    @classmethod
    def constant(cls, value) -> "PRatFunc":
        return cls._raw(PPoly._raw([Q(value)]), PPoly._raw([_ONE]))

    def __bool__(self) -> bool:
        return bool(self.num.c)

    def is_zero(self) -> bool:
        return not self.num.c

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise UsageError("not a constant")
        return self.num.c[0] if self.num.c else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, PRatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, PPoly):
            return self.den.is_one() and self.num.c == other.c
        if is_rational(other):
            return self.den.is_one() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.den.is_one():
            return hash(self.num)
        return hash((self.num.c, self.den.c))

    def equals_cross(self, other: "PRatFunc") -> bool:
        """Equality by cross-multiplication, independent of canonical form."""
        return self.num * other.den == other.num * self.den

    @staticmethod
    def _coerce(other):
        if isinstance(other, PRatFunc):
            return other
        if isinstance(other, PPoly):
            return PRatFunc._raw(other, PPoly._raw([_ONE]))
        if is_rational(other):
            return PRatFunc._raw(PPoly._raw([Q(other)]), PPoly._raw([_ONE]))
        return None

    def __add__(self, other):
        if is_rational(other):
            if not other:
                return self
            return PRatFunc._raw(self.num + self.den * Q(other), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a:
            return o
        if not c:
            return self
        if b.is_one():
            return PRatFunc._raw(a * d + c, d)
        if d.is_one():
            return PRatFunc._raw(a + c * b, b)
        if b.c == d.c:
            num = a + c
            if not num:
                return PRatFunc._raw(num, PPoly._raw([_ONE]))
            g = poly_gcd(num, b)
            if g.is_one():
                return PRatFunc._raw(num, b)
            return PRatFunc._raw(num.exact_div(g), b.exact_div(g))
        g = poly_gcd(b, d)
        if g.is_one():
            return PRatFunc._raw(a * d + c * b, b * d)
        b1 = b.exact_div(g)
        d1 = d.exact_div(g)
        num = a * d1 + c * b1
        if not num:
            return PRatFunc._raw(num, PPoly._raw([_ONE]))
        h = poly_gcd(num, g)
        if not h.is_one():
            num = num.exact_div(h)
            g = g.exact_div(h)
        return PRatFunc._raw(num, b1 * d1 * g)

    __radd__ = __add__

    def __neg__(self):
        return PRatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if is_rational(other):
            if not other:
                return PRatFunc._raw(PPoly._raw(()), PPoly._raw([_ONE]))
            return PRatFunc._raw(self.num * Q(other), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a or not c:
            return PRatFunc._raw(PPoly._raw(()), PPoly._raw([_ONE]))
        if not d.is_one():
            g1 = poly_gcd(a, d)
            if not g1.is_one():
                a = a.exact_div(g1)
                d = d.exact_div(g1)
        if not b.is_one():
            g2 = poly_gcd(c, b)
            if not g2.is_one():
                c = c.exact_div(g2)
                b = b.exact_div(g2)
        return PRatFunc._raw(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "PRatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        lead = self.num.c[-1]
        inv = 1 / lead
        return PRatFunc._raw(self.den * inv, self.num * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PRatFunc._raw(self.num**k, self.den**k)

    def evaluate(self, p):
        """Value at a rational P; raises ZeroDivisionError at a pole."""
        d = self.den(p)
        if not d:
            raise ZeroDivisionError(f"pole of rational function at P={p}")
        return self.num(p) / d

    def to_json(self) -> dict:
        return {"num": self.num.to_strings(), "den": self.den.to_strings()}

    @classmethod
    def from_json(cls, obj: dict) -> "PRatFunc":
        return cls(PPoly(obj["num"]), PPoly(obj["den"]))

    def __repr__(self) -> str:
        return f"PRatFunc({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def prat_normalize(f: PRatFunc | tuple) -> PRatFunc:
    """Canonical form of a rational function.

    Accepts an existing ``PRatFunc`` (returned unchanged, since instances
    are canonical on construction) or a raw ``(num, den)`` pair of
    polynomials or coefficient lists.
    """
    if isinstance(f, PRatFunc):
        return PRatFunc(f.num, f.den)
    num, den = f
    num = num if isinstance(num, PPoly) else PPoly(num)
    den = den if isinstance(den, PPoly) else PPoly(den)
    return PRatFunc(num, den)
