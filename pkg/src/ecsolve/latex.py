"""LaTeX layout of the symbolic two-particle eigenvalue coefficients.

Each ``E_l`` is written as ``1/((P^2-l^2)(P^2-1))`` times a bracket of
gamma terms, and every remaining denominator is split into factors
``P^2 - k^2`` where it divides evenly.
"""

from __future__ import annotations

import math

from .algebra.poly import PPoly, PRatFunc, UsageError
from .algebra.rational import Q, Rational


def _poly_tex(p: PPoly) -> str:
    terms = []
    for i in range(len(p.c) - 1, -1, -1):
        c = p.c[i]
        if not c:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        coef = "" if (mag == 1 and i) else _num_tex(mag)
        var = "" if i == 0 else ("P" if i == 1 else f"P^{{{i}}}")
        terms.append((sign, coef + var))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _num_tex(r) -> str:
    r = Q(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"\\frac{{{r.numerator}}}{{{r.denominator}}}"


def _content(p: PPoly) -> tuple[Rational, PPoly]:
    """Split off a rational factor so the rest has coprime integer coefficients."""
    nz = [c for c in p.c if c]
    if not nz:
        return Rational(0), p
    den = math.lcm(*(int(Q(c).denominator) for c in nz))
    ints = [int(c * den) for c in nz]
    g = math.gcd(*ints)
    if nz[-1] < 0:
        g = -g
    scale = Q(g, den)
    return scale, PPoly([c / scale for c in p.c])


def _split_denominator(den: PPoly, kmax: int):
    factors = []
    rest = den
    for k in range(1, kmax + 1):
        f = PPoly([-k * k, 0, 1])
        mult = 0
        while rest.degree >= 2:
            qt, r = divmod(rest, f)
            if r:
                break
            rest = qt
            mult += 1
        if mult:
            factors.append((k, mult))
    return factors, rest


def _factors_tex(factors, rest: PPoly) -> str:
    parts = []
    for k, mult in sorted(factors, reverse=True):
        body = f"(P^2-{k * k})"
        parts.append(body if mult == 1 else f"{body}^{{{mult}}}")
    if rest.degree > 0:
        parts.append(f"({_poly_tex(rest)})")
    return "".join(parts)


def ratfunc_tex(f: PRatFunc, kmax: int = 12) -> str:
    """``\\frac{c (num)}{den}`` with the denominator split into ``P^2 - k^2`` factors."""
    if not f:
        return "0"
    cn, num = _content(f.num)
    factors, rest = _split_denominator(f.den, kmax)
    cr, rest = _content(rest)
    scale = cn / cr
    mag = abs(scale.numerator)
    if num.degree == 0:
        body_num = str(mag)
    else:
        body_num = ("" if mag == 1 else str(mag)) + f"({_poly_tex(num)})"
    sign = "-" if scale < 0 else ""
    den_tex = _factors_tex(factors, rest)
    if scale.denominator != 1:
        den_tex = f"{scale.denominator}{den_tex}"
    if not den_tex:
        return sign + body_num
    return f"{sign}\\frac{{{body_num}}}{{{den_tex}}}"


def eigenvalue_coefficient_tex(l: int, coeffs: list) -> str:
    """``E_l`` from its gamma coefficients (index = gamma power)."""
    if l < 1:
        raise UsageError("order must be >= 1")
    P2 = PRatFunc(PPoly([0, 0, 1]))
    pre = (P2 - l * l) * (P2 - 1) if l > 1 else P2 - 1
    pre_tex = f"\\frac{{1}}{{(P^2-{l * l})(P^2-1)}}" if l > 1 else "\\frac{1}{P^2-1}"
    pieces = []
    for s, c in enumerate(coeffs):
        if not c:
            continue
        inner = c * pre
        tex = ratfunc_tex(inner, kmax=max(l, 4))
        neg = tex.startswith("-")
        if neg:
            tex = tex[1:]
        gam = f"\\gamma^{{{s}}}" if s != 1 else "\\gamma"
        piece = gam if tex == "1" else f"{tex}{gam}"
        pieces.append(("-" if neg else "+", piece))
    if not pieces:
        return f"{{\\cal E}}_{{{l}}} = 0"
    body = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, piece in pieces[1:]:
        body += f" {sign} {piece}"
    if len(pieces) == 1:
        return f"{{\\cal E}}_{{{l}}} = {pre_tex}{body}"
    return f"{{\\cal E}}_{{{l}}} = {pre_tex}\\Bigl[ {body} \\Bigr]"


def eigenvalue_series_tex(series) -> str:
    if series.params.lam is not None:
        raise UsageError("LaTeX layout is defined for the symbolic mode")
    lines = []
    for l in range(1, series.tilde_e.q2_order + 1):
        lines.append(eigenvalue_coefficient_tex(l, series.gamma_poly(l)))
    return " \\\\\n".join(lines)


__all__ = ["eigenvalue_coefficient_tex", "eigenvalue_series_tex", "ratfunc_tex"]
