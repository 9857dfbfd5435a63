"""Building-block symmetric functions as truncated Laurent series.

The contour integrals defining the building blocks are replaced by formal
constant-term extraction.  On nested circles ``|z| < |xi_1| < ... < |xi_N|``
with ``q^2 |xi_N| / |z| < 1`` every theta factor of a ratio ``u`` expands as

    Theta(u)^e = sum_{l, d} c[l, d] q^(2l) u^d,    d >= -l,

so negative powers of a ratio always cost q.  The integrand is multiplied
out one ratio at a time, working through the contour variables from the
outermost ``xi_N`` inwards; once all factors touching ``xi_k`` are in, only
states with zero ``xi_k`` exponent are kept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import mpmath

from . import kernels
from .algebra.poly import UsageError
from .algebra.rational import Q, Rational, format_rational
from .algebra.series import RATIONAL, BiSeries
from .eigenfunction import AlphaTable, default_window
from .lattice import ModelParams, cut_sums


class WindowError(UsageError):
    """A requested result needs exponents or shifts beyond the chosen window."""


# -- one theta factor ------------------------------------------------------------

def binomial(e, k: int) -> Rational:
    """Generalized binomial coefficient ``e (e-1) ... (e-k+1) / k!``."""
    out = Rational(1)
    for i in range(k):
        out = out * (e - i) / (i + 1)
    return out


@dataclass(frozen=True)
class ThetaFactorExpansion:
    exponent: Rational
    Lq: int
    Dmax: int
    coeffs: dict  # (l, d) -> Rational

    @property
    def kind(self) -> str:
        return "theta-power" if self.exponent > 0 else "inverse-theta-power"

    def coeff(self, l: int, d: int) -> Rational:
        return self.coeffs.get((l, d), Rational(0))

    def table(self) -> list[tuple[int, int, Rational]]:
        return [(l, d, c) for (l, d), c in sorted(self.coeffs.items())]


def _mul_ud(a: dict, b: dict, Lq: int, dlo: int, dhi: int) -> dict:
    out: dict = {}
    for (la, da), ca in a.items():
        for (lb, db), cb in b.items():
            l = la + lb
            d = da + db
            if l > Lq or d < dlo or d > dhi:
                continue
            out[(l, d)] = out.get((l, d), 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def expand_theta_power(exponent, Lq: int, Dmax: int) -> ThetaFactorExpansion:
    """``Theta(u)^exponent`` with q^2 powers up to ``Lq`` and ``u`` powers in ``[-Lq, Dmax]``.

    ``Theta(u) = (1 - u) prod_m (1 - q^(2m) u)(1 - q^(2m)/u)``; factors with
    ``m > Lq`` start beyond the window and are dropped.
    """
    if Dmax < 0 or Lq < 0:
        raise UsageError("Lq and Dmax must be >= 0")
    e = Q(exponent)
    top = Dmax + Lq  # negative powers later can bring these back into range
    acc = {(0, k): binomial(e, k) * (-1) ** k for k in range(top + 1)}
    acc = {k: v for k, v in acc.items() if v}
    for m in range(1, Lq + 1):
        kmax = Lq // m
        up = {(m * k, k): binomial(e, k) * (-1) ** k for k in range(kmax + 1)}
        down = {(m * k, -k): binomial(e, k) * (-1) ** k for k in range(kmax + 1)}
        acc = _mul_ud(acc, {k: v for k, v in up.items() if v}, Lq, -Lq, top)
        acc = _mul_ud(acc, {k: v for k, v in down.items() if v}, Lq, -Lq, top)
    coeffs = {k: v for k, v in acc.items() if -Lq <= k[1] <= Dmax}
    return ThetaFactorExpansion(e, Lq, Dmax, coeffs)


# -- Laurent polynomials ---------------------------------------------------------

@dataclass
class LaurentPoly:
    """Finite Laurent polynomial in ``z_1..z_N`` with series coefficients.

    ``complete`` is False when terms beyond the exponent window were dropped.
    """

    N: int
    Lq: int
    Sg: int
    Dmax: int
    terms: dict = field(default_factory=dict)
    complete: bool = True

    def coeff(self, exps) -> BiSeries:
        return self.terms.get(tuple(exps), BiSeries.zero(RATIONAL, self.Lq, self.Sg))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if (self.N, self.Lq, self.Sg) != (other.N, other.Lq, other.Sg):
            raise UsageError("Laurent polynomials with different shapes")
        out = dict(self.terms)
        for e, v in other.terms.items():
            s = out[e] + v if e in out else v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.N, self.Lq, self.Sg, min(self.Dmax, other.Dmax), out,
                           self.complete and other.complete)

    def times_series(self, s: BiSeries) -> "LaurentPoly":
        out = {}
        for e, v in self.terms.items():
            p = v * s
            if p:
                out[e] = p
        return LaurentPoly(self.N, self.Lq, self.Sg, self.Dmax, out, self.complete)

    def with_orders(self, Lq: int, Sg: int) -> "LaurentPoly":
        """Gamma-free coefficients promoted to a larger gamma window, q truncated."""
        out = {}
        for e, v in self.terms.items():
            w = BiSeries(v.kind, Lq, Sg, dict(v.terms()))
            if w:
                out[e] = w
        return LaurentPoly(self.N, Lq, Sg, self.Dmax, out, self.complete)

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        d = self.degrees()
        if not d:
            return True
        return len(d) == 1 and (degree is None or d == {degree})

    def is_symmetric(self) -> bool:
        for e, v in self.terms.items():
            for perm in _adjacent_swaps(e):
                if self.coeff(perm) != v:
                    return False
        return True

    def monomial_coefficients(self) -> dict:
        """Coefficients on the monomial symmetric basis, keyed by partition (weakly decreasing)."""
        out = {}
        for e, v in self.terms.items():
            key = tuple(sorted(e, reverse=True))
            if key == e:
                out[key] = v
        return dict(sorted(out.items(), reverse=True))

    def specialize(self, gamma, l: int = 0) -> dict:
        """Exponent -> exact coefficient of ``q^(2l)`` with gamma set to a number."""
        out = {}
        for e, v in self.terms.items():
            c = sum((x * gamma**s for s, x in enumerate(v.q2_slice(l))), Rational(0))
            if c:
                out[e] = c
        return out

    def evaluate(self, z, q, gamma):
        """Value at complex points ``z`` (sequence of N mp or float numbers)."""
        total = 0
        q2 = q * q
        for e, v in self.terms.items():
            c = 0
            for (l, s), x in v.terms():
                c += mpmath.mpf(int(x.numerator)) / int(x.denominator) * q2**l * gamma**s
            mono = 1
            for zj, ej in zip(z, e):
                mono *= zj**ej
            total += c * mono
        return total

    def to_json(self) -> dict:
        return {
            "n": self.N,
            "complete": self.complete,
            "terms": [
                {"exps": list(e), "series": self.terms[e].to_json()}
                for e in sorted(self.terms, reverse=True)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _adjacent_swaps(e):
    for i in range(len(e) - 1):
        if e[i] != e[i + 1]:
            f = list(e)
            f[i], f[i + 1] = f[i + 1], f[i]
            yield tuple(f)


# -- building blocks -------------------------------------------------------------

def complete_degree(m, Lq: int) -> int:
    """Exponent window that keeps every term of the block labelled ``m``.

    Each exponent starts at 0 and only drops by paying q, so it stays above
    ``-Lq``; homogeneity then caps it at ``sum(m) + (N-1) Lq``.
    """
    return max(sum(m) + (len(m) - 1) * Lq, Lq, 0)


def fhat_series(m, params: ModelParams, Lq: int, Dmax: int | None = None) -> LaurentPoly:
    """Building block labelled by the integer vector ``m`` (not necessarily ordered)."""
    m = tuple(int(x) for x in m)
    if len(m) != params.N:
        raise UsageError("label length does not match N")
    if params.lam is None:
        raise UsageError("building blocks need a numeric lambda")
    return fhat_block(m, params.lam, Lq, Dmax)


def fhat_block(m, lam, Lq: int, Dmax: int | None = None) -> LaurentPoly:
    """Same as :func:`fhat_series` for any number of variables and a bare lambda."""
    m = tuple(int(x) for x in m)
    N = len(m)
    lam = Q(lam)
    if N < 1 or lam <= 0:
        raise UsageError("need at least one variable and lambda > 0")
    if Lq < 0:
        raise UsageError("Lq must be >= 0")
    need = complete_degree(m, Lq)
    if Dmax is None:
        Dmax = need
    if Dmax < 0:
        raise UsageError("Dmax must be >= 0")
    slack = sum(max(-x, 0) for x in m)
    f_hi = sum(m) + (2 * N - 1) * Lq + slack
    e_hi = Dmax + Lq
    reach = max(f_hi, e_hi) + Lq
    if f_hi < -Lq:
        return LaurentPoly(N, Lq, 0, Dmax, {}, True)
    pair_table = expand_theta_power(lam, Lq, reach).table()
    z_table = expand_theta_power(-lam, Lq, reach).table()
    # key layout: e_1..e_N, f_1..f_N, q
    qi = 2 * N
    states = {(0,) * N + m + (0,): Rational(1)}
    lo_e = [-Lq] * N
    hi_e = [e_hi] * N
    for k in range(N - 1, -1, -1):
        lo_f = [min(x, 0) - Lq for x in m]
        lo_f[k] = -Lq
        for j in range(k + 1, N):
            lo_f[j] = 0
        hi_f = [f_hi] * N
        for j in range(k + 1, N):
            hi_f[j] = 0
        lo = tuple(lo_e + lo_f + [0])
        hi = tuple(hi_e + hi_f + [Lq])
        for j in range(k):
            states = kernels.fold(states, pair_table, N + j, N + k, qi, Lq, lo, hi)
        for i in range(N):
            states = kernels.fold(states, z_table, i, N + k, qi, Lq, lo, hi)
        states = {key: v for key, v in states.items() if key[N + k] == 0 and v}
    grouped: dict = {}
    for key, v in states.items():
        e = key[:N]
        if any(abs(x) > Dmax for x in e):
            continue
        grouped.setdefault(e, {})[(key[qi], 0)] = v
    terms = {e: BiSeries(RATIONAL, Lq, 0, c) for e, c in grouped.items()}
    terms = {e: s for e, s in terms.items() if s}
    return LaurentPoly(N, Lq, 0, Dmax, terms, Dmax >= need)


def assemble_phi(n, alpha: AlphaTable, params: ModelParams, Lq: int | None = None,
                 Dmax: int | None = None, allow_partial: bool = False) -> LaurentPoly:
    """Sum of ``alpha(mu) * block(n + mu)`` over the table window."""
    n = tuple(n)
    if Lq is None:
        Lq = alpha.Lq
    if Lq > alpha.Lq:
        raise UsageError("coefficient table is truncated below the requested q order")
    Sg = alpha.Sg
    need_w = default_window(n, Lq)
    if alpha.W < need_w and not allow_partial:
        raise WindowError(f"coefficient window W={alpha.W} is below the needed {need_w}")
    need_d = max(complete_degree(n, Lq), 0)
    if Dmax is None:
        Dmax = need_d
    if Dmax < need_d and not allow_partial:
        raise WindowError(f"exponent window Dmax={Dmax} is below the needed {need_d}")
    total = LaurentPoly(params.N, Lq, Sg, Dmax, {}, True)
    for mu in sorted(alpha.entries):
        a = alpha.entries[mu]
        if max(cut_sums(mu)) > need_w:
            continue  # its block starts beyond the q window
        a = BiSeries(a.kind, Lq, Sg, dict(a.terms()))
        if not a:
            continue
        block = fhat_series(tuple(x + y for x, y in zip(n, mu)), params, Lq, Dmax)
        if not block:
            continue
        total = total + block.with_orders(Lq, Sg).times_series(a)
    total.complete = total.complete and alpha.W >= need_w and Dmax >= need_d
    return total


def format_monomials(coeffs: dict) -> str:
    return " + ".join(f"({format_rational(c)})*m{list(k)}" for k, c in coeffs.items()) or "0"


__all__ = [
    "LaurentPoly",
    "ThetaFactorExpansion",
    "WindowError",
    "assemble_phi",
    "binomial",
    "complete_degree",
    "expand_theta_power",
    "fhat_block",
    "fhat_series",
    "format_monomials",
]
