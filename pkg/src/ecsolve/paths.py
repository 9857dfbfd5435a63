"""Path sums over the root lattice.

Both the Taylor coefficients of the self-consistency function and the
eigenfunction coefficients are sums over lattice paths made of steps
``nu * E(j, k)`` (``nu != 0``), weighted by a product of coupling
coefficients and one denominator per visited site.  Instead of enumerating
paths, the sums are accumulated site by site, one step at a time: the value
held at a site after ``r`` steps is the total weight of all r-step paths
from the origin that end there and never revisit the origin.

Values are dense grids indexed by (q^2 power, second marker).  The second
marker is either the Taylor variable of the denominators (``taylor_sums``)
or the coupling gamma (``resolvent_sums``), in which case the step count is
folded into the gamma power.
"""

from __future__ import annotations

from . import kernels
from .algebra.poly import UsageError
from .algebra.series import BiSeries, ResonanceError, series_recip_shifted
from .lattice import ModelParams, b, cut_sums, pairs, s_terms


def zero_grid(nx: int, ny: int) -> list[list]:
    return [[0] * (ny + 1) for _ in range(nx + 1)]


def unit_grid(nx: int, ny: int) -> list[list]:
    g = zero_grid(nx, ny)
    g[0][0] = 1
    return g


def grid_is_zero(g) -> bool:
    return not any(any(row) for row in g)


def add_into(acc, g) -> None:
    for arow, grow in zip(acc, g):
        for i, v in enumerate(grow):
            if v:
                arow[i] = arow[i] + v


def shift_second(g) -> list[list]:
    """Multiply by the second marker once (drops the top column)."""
    return [[0] + row[:-1] for row in g]


class Lattice:
    """Sites, transitions and cached denominators for one state ``n``."""

    def __init__(self, n, params: ModelParams, Lq: int):
        if len(n) != params.N:
            raise UsageError("quantum number length does not match N")
        self.n = tuple(n)
        self.params = params
        self.N = params.N
        self.Lq = Lq
        self.origin = (0,) * self.N
        self._b: dict = {}

    def bval(self, mu):
        v = self._b.get(mu)
        if v is None:
            v = b(mu, self.n, self.params)
            self._b[mu] = v
        return v

    def denominator(self, mu):
        v = self.bval(mu)
        if not v:
            raise ResonanceError(f"resonance: b({list(mu)}) = 0", root=mu)
        return v

    def transitions(self, sites) -> tuple[dict, list]:
        """Incoming steps for every site and the steps closing at the origin.

        Returns ``(into, closing)``: ``into[target]`` lists ``(source, terms)``
        with sources in ``sites`` or the origin, ``closing`` lists
        ``(source, terms)`` for steps from a site back to the origin.  Steps
        whose coupling coefficient vanishes below the q-budget are dropped.
        """
        site_set = set(sites)
        into: dict = {mu: [] for mu in sites}
        closing = []
        F = [cut_sums(mu) for mu in sites]
        span = 1
        if F and F[0]:
            # the origin is a source too, so its cut sums (all zero) count
            lo = min(0, min(min(f) for f in F))
            hi = max(0, max(max(f) for f in F))
            span = max(hi - lo, 1)
        sources = [self.origin] + list(sites)
        for src in sources:
            for j, k in pairs(self.N):
                for nu in range(-span, span + 1):
                    if nu == 0:
                        continue
                    terms = s_terms(nu, self.Lq)
                    if not terms:
                        continue
                    tgt = list(src)
                    tgt[j - 1] += nu
                    tgt[k - 1] -= nu
                    tgt = tuple(tgt)
                    if tgt == self.origin:
                        if src != self.origin:
                            closing.append((src, terms))
                    elif tgt in site_set:
                        into[tgt].append((src, terms))
        return into, closing


def _propagate(into, values, nx, ny):
    out = {}
    for tgt, incoming in into.items():
        acc = None
        for src, terms in incoming:
            v = values.get(src)
            if v is None:
                continue
            if acc is None:
                acc = zero_grid(nx, ny)
            kernels.shift_accumulate(acc, v, terms, nx)
        if acc is not None and not grid_is_zero(acc):
            out[tgt] = acc
    return out


def _close(closing, values, nx, ny):
    acc = zero_grid(nx, ny)
    for src, terms in closing:
        v = values.get(src)
        if v is not None:
            kernels.shift_accumulate(acc, v, terms, nx)
    return acc


def taylor_sums(lat: Lattice, sites, gamma_order: int, kmax: int) -> list[BiSeries]:
    """Taylor coefficients ``G_0..G_kmax`` of the closed-path function.

    Each site denominator ``1/(b - xi)`` is expanded as
    ``sum_l xi^l / b^(1+l)``; a closed path of ``s`` steps contributes to
    ``gamma^s``.
    """
    Lq = lat.Lq
    kind = lat.params.kind
    into, closing = lat.transitions(sites)
    dens = {}
    for mu in sites:
        inv = 1 / lat.denominator(mu)
        row = [inv]
        for _ in range(kmax):
            row.append(row[-1] * inv)
        dens[mu] = [row]
    out = [dict() for _ in range(kmax + 1)]
    values = {lat.origin: unit_grid(Lq, kmax)}
    for r in range(1, gamma_order):
        stepped = _propagate(into, values, Lq, kmax)
        values = {mu: kernels.conv2d(g, dens[mu], Lq, kmax) for mu, g in stepped.items()}
        closed = _close(closing, values, Lq, kmax)
        for l, row in enumerate(closed):
            for k, v in enumerate(row):
                if v:
                    out[k][(l, r + 1)] = v
        if not values:
            break
    return [BiSeries(kind, Lq, gamma_order, c) for c in out]


def resolvent_sums(lat: Lattice, sites, gamma_order: int, shift: BiSeries) -> tuple[dict, list]:
    """Path sums with full denominators ``1/(b(mu) - shift)``.

    Returns ``(site_values, closed)``: the dense gamma-graded path sum ending
    at each site (the eigenfunction coefficient for ``mu != 0``), and the
    closed-path sum through the origin (the value of the self-consistency
    function at ``shift``).
    """
    Lq = lat.Lq
    if shift.orders != (Lq, gamma_order):
        raise UsageError("shift series has the wrong truncation")
    into, closing = lat.transitions(sites)
    dens = {mu: series_recip_shifted(lat.denominator(mu), shift).to_dense() for mu in sites}
    values = {lat.origin: unit_grid(Lq, gamma_order)}
    totals: dict = {}
    closed = zero_grid(Lq, gamma_order)
    for _ in range(gamma_order):
        stepped = _propagate(into, values, Lq, gamma_order)
        values = {}
        for mu, g in stepped.items():
            g = shift_second(g)
            if grid_is_zero(g):
                continue
            v = kernels.conv2d(g, dens[mu], Lq, gamma_order)
            values[mu] = v
            if mu in totals:
                add_into(totals[mu], v)
            else:
                totals[mu] = [list(row) for row in v]
        add_into(closed, shift_second(_close(closing, values, Lq, gamma_order)))
        if not values:
            break
    return totals, closed
