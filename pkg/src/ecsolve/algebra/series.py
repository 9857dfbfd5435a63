"""Truncated bivariate power series in the markers q^2 and gamma.

A ``BiSeries`` carries a rectangular truncation window: terms
``q^(2l) gamma^s`` with ``l <= q2_order`` and ``s <= gamma_order`` are kept,
everything else is discarded by every ring operation.  Coefficients are
either rationals (``kind="rational"``) or elements of Q(P)
(``kind="p-rational"``).  Storage is sparse and never holds zeros.
"""

from __future__ import annotations

from .. import kernels
from .poly import PRatFunc, UsageError
from .rational import Q, Rational, format_rational, is_rational

RATIONAL = "rational"
P_RATIONAL = "p-rational"
KINDS = (RATIONAL, P_RATIONAL)


def field_zero(kind: str):
    return Rational(0) if kind == RATIONAL else PRatFunc.constant(0)


def field_one(kind: str):
    return Rational(1) if kind == RATIONAL else PRatFunc.constant(1)


def coerce_scalar(kind: str, value):
    if kind == RATIONAL:
        if isinstance(value, PRatFunc):
            return value.constant_value()
        return Q(value)
    if isinstance(value, PRatFunc):
        return value
    if is_rational(value):
        return PRatFunc.constant(value)
    return PRatFunc(value)


class BiSeries:
    """Immutable truncated series; see the module docstring."""

    __slots__ = ("kind", "q2_order", "gamma_order", "_c")

    def __init__(self, kind: str, q2_order: int, gamma_order: int, coeffs=None):
        if kind not in KINDS:
            raise UsageError(f"unknown scalar kind {kind!r}")
        if q2_order < 0 or gamma_order < 0:
            raise UsageError("truncation orders must be >= 0")
        self.kind = kind
        self.q2_order = q2_order
        self.gamma_order = gamma_order
        c = {}
        if coeffs:
            for (l, s), v in coeffs.items():
                if l < 0 or s < 0:
                    raise UsageError("negative exponent in a power series")
                if l > q2_order or s > gamma_order or not v:
                    continue
                c[(l, s)] = coerce_scalar(kind, v)
        self._c = c

    @classmethod
    def _raw(cls, kind, q2_order, gamma_order, c) -> "BiSeries":
        obj = object.__new__(cls)
        obj.kind = kind
        obj.q2_order = q2_order
        obj.gamma_order = gamma_order
        obj._c = c
        return obj

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, kind, q2_order, gamma_order) -> "BiSeries":
        return cls._raw(kind, q2_order, gamma_order, {})

    @classmethod
    def constant(cls, kind, q2_order, gamma_order, value) -> "BiSeries":
        return cls(kind, q2_order, gamma_order, {(0, 0): value})

    @classmethod
    def one(cls, kind, q2_order, gamma_order) -> "BiSeries":
        return cls.constant(kind, q2_order, gamma_order, 1)

    @classmethod
    def monomial(cls, kind, q2_order, gamma_order, l, s, value=1) -> "BiSeries":
        return cls(kind, q2_order, gamma_order, {(l, s): value})

    @classmethod
    def from_dense(cls, kind, q2_order, gamma_order, grid) -> "BiSeries":
        c = {}
        for l, row in enumerate(grid[: q2_order + 1]):
            for s, v in enumerate(row[: gamma_order + 1]):
                if v:
                    c[(l, s)] = v
        return cls(kind, q2_order, gamma_order, c)

    def like(self, coeffs) -> "BiSeries":
        return BiSeries(self.kind, self.q2_order, self.gamma_order, coeffs)

    # -- access ---------------------------------------------------------------
    @property
    def orders(self) -> tuple[int, int]:
        return self.q2_order, self.gamma_order

    def coeff(self, l: int, s: int):
        return self._c.get((l, s), field_zero(self.kind))

    def terms(self) -> list:
        """Nonzero terms as ``((l, s), value)`` sorted by ``(l, s)``."""
        return sorted(self._c.items())

    def support(self) -> set:
        return set(self._c)

    def to_dense(self) -> list[list]:
        grid = [[0] * (self.gamma_order + 1) for _ in range(self.q2_order + 1)]
        for (l, s), v in self._c.items():
            grid[l][s] = v
        return grid

    def gamma_slice(self, s: int) -> list:
        """Coefficients of ``gamma^s`` as a list indexed by the q^2 power."""
        return [self.coeff(l, s) for l in range(self.q2_order + 1)]

    def q2_slice(self, l: int) -> list:
        return [self.coeff(l, s) for s in range(self.gamma_order + 1)]

    def min_q2_power(self) -> int | None:
        return min((l for l, _ in self._c), default=None)

    def min_gamma_power(self) -> int | None:
        return min((s for _, s in self._c), default=None)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    # -- ring operations ------------------------------------------------------
    def _check(self, other: "BiSeries") -> None:
        if not isinstance(other, BiSeries):
            raise UsageError("expected a BiSeries")
        if other.kind != self.kind:
            raise UsageError(f"scalar kind mismatch: {self.kind} vs {other.kind}")
        if other.orders != self.orders:
            raise UsageError(f"truncation mismatch: {self.orders} vs {other.orders}")

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            return self + self.constant(self.kind, *self.orders, other)
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            prev = c.get(k)
            if prev is None:
                c[k] = v
            else:
                s = prev + v
                if s:
                    c[k] = s
                else:
                    del c[k]
        return BiSeries._raw(self.kind, self.q2_order, self.gamma_order, c)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries._raw(
            self.kind, self.q2_order, self.gamma_order, {k: -v for k, v in self._c.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, BiSeries):
            return self + (-coerce_scalar(self.kind, other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "BiSeries":
        v = coerce_scalar(self.kind, value)
        if not v:
            return self.zero(self.kind, *self.orders)
        return BiSeries._raw(
            self.kind, self.q2_order, self.gamma_order, {k: x * v for k, x in self._c.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return self.scale(other)
        self._check(other)
        if not self._c or not other._c:
            return self.zero(self.kind, *self.orders)
        if len(self._c) == 1 or len(other._c) == 1:
            return self._mul_sparse(other)
        grid = kernels.conv2d(self.to_dense(), other.to_dense(), self.q2_order, self.gamma_order)
        return BiSeries.from_dense(self.kind, self.q2_order, self.gamma_order, grid)

    __rmul__ = __mul__

    def _mul_sparse(self, other) -> "BiSeries":
        c: dict = {}
        for (l1, s1), v1 in self._c.items():
            for (l2, s2), v2 in other._c.items():
                l, s = l1 + l2, s1 + s2
                if l > self.q2_order or s > self.gamma_order:
                    continue
                p = v1 * v2
                prev = c.get((l, s))
                c[(l, s)] = p if prev is None else prev + p
        return BiSeries(self.kind, self.q2_order, self.gamma_order, c)

    def __pow__(self, k: int) -> "BiSeries":
        if k < 0:
            raise UsageError("negative power of a truncated series")
        out = self.one(self.kind, *self.orders)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.orders == other.orders
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.kind, self.orders, frozenset(self._c.items())))

    def shift(self, dl: int, ds: int) -> "BiSeries":
        """Multiply by ``q^(2 dl) gamma^ds`` (non-negative shifts)."""
        c = {
            (l + dl, s + ds): v
            for (l, s), v in self._c.items()
            if l + dl <= self.q2_order and s + ds <= self.gamma_order
        }
        return BiSeries._raw(self.kind, self.q2_order, self.gamma_order, c)

    def truncate(self, q2_order: int, gamma_order: int) -> "BiSeries":
        """Restrict to a smaller window."""
        if q2_order > self.q2_order or gamma_order > self.gamma_order:
            raise UsageError("cannot truncate to a larger window")
        return BiSeries(self.kind, q2_order, gamma_order, self._c)

    def with_orders(self, q2_order: int, gamma_order: int) -> "BiSeries":
        """Re-window without checks.

        Only valid when the series is known to be exact in the enlarged
        directions, e.g. a gamma-free series promoted to a larger gamma
        window.
        """
        return BiSeries(self.kind, q2_order, gamma_order, self._c)

    def map(self, fn, kind: str | None = None) -> "BiSeries":
        kind = kind or self.kind
        return BiSeries(kind, self.q2_order, self.gamma_order, {k: fn(v) for k, v in self._c.items()})

    def substitute_P(self, p) -> "BiSeries":
        """Evaluation homomorphism Q(P) -> Q at ``P = p``."""
        if self.kind == RATIONAL:
            return self
        p = Q(p)
        return self.map(lambda f: f.evaluate(p), RATIONAL)

    def evaluate(self, q2, gamma, P=None):
        """Numeric value of the truncated sum at given marker values."""
        total = 0
        for (l, s), v in self._c.items():
            if self.kind == P_RATIONAL:
                if P is None:
                    raise UsageError("P value required for p-rational series")
                v = v.evaluate(Q(P)) if is_rational(P) else _eval_float(v, P)
            total = total + v * (q2**l) * (gamma**s)
        return total

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for (l, s), v in self.terms():
            value = format_rational(v) if self.kind == RATIONAL else v.to_json()
            terms.append({"q2": l, "gamma": s, "value": value})
        return {
            "q2_order": self.q2_order,
            "gamma_order": self.gamma_order,
            "scalar": self.kind,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BiSeries":
        kind = obj["scalar"]
        c = {}
        for t in obj["terms"]:
            v = t["value"]
            c[(t["q2"], t["gamma"])] = Q(v) if kind == RATIONAL else PRatFunc.from_json(v)
        return cls(kind, obj["q2_order"], obj["gamma_order"], c)

    def __repr__(self) -> str:
        body = " + ".join(f"({v})*q^{2 * l}*g^{s}" for (l, s), v in self.terms()) or "0"
        return f"BiSeries[{self.kind}, Lq={self.q2_order}, Sg={self.gamma_order}]({body})"


def _eval_float(f: PRatFunc, p: float) -> float:
    num = sum(float(c) * p**i for i, c in enumerate(f.num.c))
    den = sum(float(c) * p**i for i, c in enumerate(f.den.c))
    return num / den


def series_add(a: BiSeries, b: BiSeries) -> BiSeries:
    return a + b


def series_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    return a * b


class ResonanceError(ArithmeticError):
    """A perturbative denominator vanished.

    ``root`` names the offending root vector when known.
    """

    def __init__(self, message: str, root=None):
        super().__init__(message)
        self.root = root


def series_recip_shifted(b0, tail: BiSeries) -> BiSeries:
    """``1 / (b0 - tail)`` as a geometric series; ``tail`` has no constant term."""
    if tail.coeff(0, 0):
        raise UsageError("tail must have zero constant term")
    b0 = coerce_scalar(tail.kind, b0)
    if not b0:
        raise ResonanceError("vanishing denominator b0 = 0")
    inv = 1 / b0 if tail.kind == RATIONAL else b0.inverse()
    ratio = tail.scale(inv)
    term = BiSeries.constant(tail.kind, *tail.orders, inv)
    acc = term
    while True:
        term = term * ratio
        if not term:
            return acc
        acc = acc + term
