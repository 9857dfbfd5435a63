"""Eigenfunction coefficients on the root lattice.

The coefficient of the building block shifted by ``mu`` is the sum over
lattice paths from the origin to ``mu`` that never come back to the origin,
with one coupling factor per step and one full denominator
``1/(b(site) - E~)`` per visited site.  The normalisation is ``alpha(0) = 1``.

Windows are boxes in cut-sum coordinates.  A site with some cut sum below
``-Lq`` cannot be reached within the q-budget, so its coefficient is exactly
zero.  A path that climbs above the window top by more than ``Lq`` cannot
come back, so the table is exact for every site with cut sums in
``[-Lq, W]`` once paths are propagated through ``[-Lq, W + Lq]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra.poly import UsageError
from .algebra.rational import Rational, format_rational
from .algebra.series import RATIONAL, BiSeries, ResonanceError, field_zero
from .eigenvalue import eigenvalue_via_lagrange
from .lattice import (
    ModelParams,
    b,
    box_domain,
    cut_sums,
    pairs,
    s_terms,
    step_of,
)
from .paths import Lattice, resolvent_sums


def default_window(n, Lq: int) -> int:
    """Top cut sum needed to assemble the eigenfunction to order ``Lq``.

    A building block labelled ``m`` is ``O(q^(2L))`` with ``L`` the largest
    deficit ``-(m_(c+1) + ... + m_N)``, so the cut sums of contributing
    shifts stay below ``n_(c+1) + ... + n_N + Lq``.
    """
    reach = max(sum(n[c:]) for c in range(1, len(n)))
    return max(1, max(reach, 0) + Lq)


@dataclass
class AlphaTable:
    params: ModelParams
    n: tuple
    Lq: int
    Sg: int
    W: int
    tilde_e: BiSeries
    entries: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.params.kind

    def in_window(self, mu) -> bool:
        return all(-self.Lq <= f <= self.W for f in cut_sums(mu))

    def is_interior(self, mu) -> bool:
        return self.in_window(mu) and max(cut_sums(mu)) <= self.W - self.Lq

    def get(self, mu) -> BiSeries | None:
        """Coefficient at ``mu``; ``None`` when it is not determined by the table."""
        mu = tuple(mu)
        F = cut_sums(mu)
        if min(F) < -self.Lq:
            return BiSeries.zero(self.kind, self.Lq, self.Sg)
        if max(F) > self.W:
            return None
        return self.entries.get(mu, BiSeries.zero(self.kind, self.Lq, self.Sg))

    def __getitem__(self, mu) -> BiSeries:
        v = self.get(mu)
        if v is None:
            raise KeyError(f"{list(mu)} lies outside the window")
        return v

    def window(self) -> list[tuple]:
        return box_domain(self.params.N, -self.Lq, self.W)

    def to_json(self) -> dict:
        return {
            "N": self.params.N,
            "n": list(self.n),
            "lambda": None if self.params.lam is None else format_rational(self.params.lam),
            "q2_order": self.Lq,
            "gamma_order": self.Sg,
            "window": {"lo": -self.Lq, "hi": self.W},
            "entries": [
                {"mu": list(mu), "series": self.entries[mu].to_json()}
                for mu in sorted(self.entries)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def alpha_table(n, params: ModelParams, Lq: int, Sg: int, W: int | None = None,
                tilde_e: BiSeries | None = None) -> AlphaTable:
    """All coefficients with cut sums in ``[-Lq, W]``."""
    n = tuple(n)
    if len(n) != params.N:
        raise UsageError("quantum number length does not match N")
    if W is None:
        W = default_window(n, Lq)
    if W < 0:
        raise UsageError("window top W must be >= 0")
    if tilde_e is None:
        tilde_e = eigenvalue_via_lagrange(n, params, Lq, Sg).tilde_e
    if tilde_e.orders != (Lq, Sg) or tilde_e.kind != params.kind:
        raise UsageError("eigenvalue correction does not match the requested truncation")
    lat = Lattice(n, params, Lq)
    sites = [mu for mu in box_domain(params.N, -Lq, W + Lq) if any(mu)]
    totals, _ = resolvent_sums(lat, sites, Sg, tilde_e)
    kind = params.kind
    entries = {lat.origin: BiSeries.one(kind, Lq, Sg)}
    for mu, grid in totals.items():
        if max(cut_sums(mu)) <= W:
            s = BiSeries.from_dense(kind, Lq, Sg, grid)
            if s:
                entries[mu] = s
    return AlphaTable(params, n, Lq, Sg, W, tilde_e, entries)


def alpha_elliptic(mu, n, params: ModelParams, Lq: int, Sg: int,
                   tilde_e: BiSeries | None = None) -> BiSeries:
    mu = tuple(mu)
    if len(mu) != params.N or sum(mu) != 0:
        raise UsageError("mu must be a root vector of length N")
    if not any(mu):
        return BiSeries.one(params.kind, Lq, Sg)
    F = cut_sums(mu)
    if min(F) < -Lq:
        return BiSeries.zero(params.kind, Lq, Sg)
    table = alpha_table(n, params, Lq, Sg, W=max(max(F), 0), tilde_e=tilde_e)
    return table[mu]


# -- trigonometric limit ---------------------------------------------------------

def alpha_trig_q0(mu, n, params: ModelParams, Smax: int) -> list:
    """Coefficients of ``gamma^0..gamma^Smax`` at ``q = 0``.

    Sums ``prod(nu_r) / prod b(partial sums)`` over ordered sequences of
    positive steps ``nu_r E(j_r, k_r)`` adding up to ``mu``.  Positive steps
    raise cut sums, so no partial sum may exceed the target's cut sums.
    """
    mu = tuple(mu)
    n = tuple(n)
    N = params.N
    if len(mu) != N or sum(mu) != 0:
        raise UsageError("mu must be a root vector of length N")
    if Smax < 0:
        raise UsageError("Smax must be >= 0")
    zero = field_zero(params.kind)
    target = cut_sums(mu)
    steps = pairs(N)

    @lru_cache(maxsize=None)
    def tail(site: tuple) -> tuple:
        # gamma polynomial of all step sequences from ``site`` to ``mu``
        if site == mu:
            out = [zero] * (Smax + 1)
            out[0] = out[0] + 1
            return tuple(out)
        out = [zero] * (Smax + 1)
        F = cut_sums(site)
        for j, k in steps:
            room = min(target[c] - F[c] for c in range(j - 1, k - 1))
            for nu in range(1, room + 1):
                nxt = list(site)
                nxt[j - 1] += nu
                nxt[k - 1] -= nu
                nxt = tuple(nxt)
                den = b(nxt, n, params)
                if not den:
                    raise ResonanceError(f"resonance: b({list(nxt)}) = 0", root=nxt)
                w = nu / den if params.kind == RATIONAL else den.inverse() * nu
                rest = tail(nxt)
                for s in range(Smax):
                    if rest[s]:
                        out[s + 1] = out[s + 1] + w * rest[s]
        return tuple(out)

    if any(t < 0 for t in target):
        return [zero] * (Smax + 1)
    return list(tail((0,) * N))


def trig_alpha_table(n, params: ModelParams, W: int, Smax: int) -> AlphaTable:
    """``q = 0`` table filled entry by entry from :func:`alpha_trig_q0`."""
    n = tuple(n)
    kind = params.kind
    entries = {}
    for mu in box_domain(params.N, 0, W):
        poly = alpha_trig_q0(mu, n, params, Smax)
        s = BiSeries(kind, 0, Smax, {(0, i): v for i, v in enumerate(poly)})
        if s:
            entries[mu] = s
    return AlphaTable(params, n, 0, Smax, W, BiSeries.zero(kind, 0, Smax), entries)


# -- the coupling operator and the master recursion ----------------------------

class ConvolutionOperator:
    """``f(mu) -> sum_{j<k} sum_nu S_nu f(mu - nu E(j, k))`` at fixed truncation."""

    def __init__(self, N: int, kind: str, Lq: int, Sg: int):
        self.N = N
        self.kind = kind
        self.Lq = Lq
        self.Sg = Sg
        self._s: dict = {}

    def coupling(self, nu: int) -> BiSeries:
        s = self._s.get(nu)
        if s is None:
            s = BiSeries(self.kind, self.Lq, self.Sg, {(l, 0): c for l, c in s_terms(nu, self.Lq)})
            self._s[nu] = s
        return s

    def at(self, f: dict, mu) -> BiSeries:
        mu = tuple(mu)
        acc = BiSeries.zero(self.kind, self.Lq, self.Sg)
        for src, val in f.items():
            step = step_of(tuple(a - c for a, c in zip(mu, src)))
            if step is None:
                continue
            acc = acc + self.coupling(step[2]) * val
        return acc

    def __call__(self, f: dict, sites=None) -> dict:
        sites = f.keys() if sites is None else sites
        out = {}
        for mu in sites:
            v = self.at(f, mu)
            if v:
                out[tuple(mu)] = v
        return out


@dataclass
class ResidualReport:
    interior: int
    boundary: int
    nonzero_interior: list
    max_interior: str
    max_boundary: str

    @property
    def ok(self) -> bool:
        return not self.nonzero_interior

    def to_json(self) -> dict:
        return {
            "interior_points": self.interior,
            "boundary_points": self.boundary,
            "max_residual": self.max_interior,
            "max_boundary_residual": self.max_boundary,
            "nonzero_interior": [list(m) for m in self.nonzero_interior],
        }


def _magnitude(s: BiSeries):
    if not s:
        return Rational(0)
    if s.kind == RATIONAL:
        return max(abs(v) for _, v in s.terms())
    return None


def _fmt_max(values) -> str:
    if not values:
        return "0"
    if any(v is None for v in values):
        return "nonzero"
    return format_rational(max(values))


def corollary_residual(table: AlphaTable, tilde_e: BiSeries | None = None) -> ResidualReport:
    """Residual of the master recursion on every window point.

    Interior points (cut sums at most ``W - Lq``) must give zero; points whose
    recursion reaches above the window are reported separately.
    """
    tilde_e = table.tilde_e if tilde_e is None else tilde_e
    params = table.params
    Lq, Sg, kind = table.Lq, table.Sg, table.kind
    op = ConvolutionOperator(params.N, kind, Lq, Sg)
    gamma = BiSeries.monomial(kind, Lq, Sg, 0, 1)
    # sources that can reach window points: the window plus its q-reach above
    f = {}
    for mu in box_domain(params.N, -Lq, table.W):
        v = table.get(mu)
        if v:
            f[mu] = v
    interior = boundary = 0
    bad, mags, bmags = [], [], []
    for mu in table.window():
        alpha = table[mu]
        lhs = alpha.scale(b(mu, table.n, params)) - tilde_e * alpha
        res = lhs - gamma * op.at(f, mu)
        if table.is_interior(mu):
            interior += 1
            if res:
                bad.append(mu)
                mags.append(_magnitude(res))
        else:
            boundary += 1
            if res:
                bmags.append(_magnitude(res))
    return ResidualReport(interior, boundary, bad, _fmt_max(mags), _fmt_max(bmags))


__all__ = [
    "AlphaTable",
    "ConvolutionOperator",
    "ResidualReport",
    "alpha_elliptic",
    "alpha_table",
    "alpha_trig_q0",
    "corollary_residual",
    "default_window",
    "trig_alpha_table",
]
