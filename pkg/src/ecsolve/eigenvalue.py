"""Eigenvalue series by three independent routes.

* Lagrange: Taylor coefficients ``G_k`` of the closed-path function composed
  through the Lagrange inversion formula.
* Fixed point: iterate ``E~ <- -G(E~)`` in the truncated ring, either through
  the Taylor coefficients or by re-summing closed paths with full
  denominators ``1/(b - E~)``.
* q^2 recursion (N=2 only): solve the master recursion order by order in
  ``q^2`` with coupling polynomials, sharing no code with the path sums.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import kernels
from .algebra.poly import PRatFunc, UsageError
from .algebra.rational import Q, format_rational
from .algebra.series import BiSeries, ResonanceError, field_zero
from .lattice import ModelParams, closed_path_domain, e0, p_value
from .paths import Lattice, resolvent_sums, taylor_sums

# Bumped whenever the meaning of a cached table changes.
FORMULA_VARIANT = "closed-irreducible-paths/exponent-per-step/v1"
CACHE_ENV = "ECS_CACHE_DIR"


def _scalar_json(v):
    return format_rational(v) if not isinstance(v, PRatFunc) else v.to_json()


@dataclass
class EigenvalueSeries:
    n: tuple
    params: ModelParams
    e0: object
    tilde_e: BiSeries
    algorithm: str = ""
    converged: bool | None = None

    @property
    def orders(self) -> tuple[int, int]:
        return self.tilde_e.orders

    def gamma_poly(self, l: int) -> list:
        """Coefficient of ``q^(2l)`` as a list indexed by the gamma power."""
        return self.tilde_e.q2_slice(l)

    def evaluate(self, q: float, P: float | None = None) -> float:
        """Numeric value ``E0 + E~`` at nome ``q`` (numeric mode only)."""
        if self.params.lam is None:
            raise UsageError("numeric evaluation needs a numeric lambda")
        g = float(self.params.gamma)
        total = 0.0
        for (l, s), v in self.tilde_e.terms():
            total += float(v) * q ** (2 * l) * g**s
        return float(self.e0) + total

    def to_json(self) -> dict:
        return {
            "N": self.params.N,
            "n": list(self.n),
            "lambda": None if self.params.lam is None else format_rational(self.params.lam),
            "algorithm": self.algorithm,
            "e0": _scalar_json(self.e0),
            "tilde_e": self.tilde_e.to_json(),
        }


# -- Taylor coefficient table --------------------------------------------------

@dataclass
class GkTable:
    params: ModelParams
    n: tuple
    Lq: int
    Sg: int
    entries: list = field(default_factory=list)

    @property
    def kmax(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, k: int) -> BiSeries:
        return self.entries[k]

    def to_json(self) -> dict:
        return {
            "key": cache_key(self.params, self.n, self.Lq, self.Sg, self.kmax),
            "entries": [g.to_json() for g in self.entries],
        }

    @classmethod
    def from_json(cls, params, n, Lq, Sg, obj) -> "GkTable":
        return cls(params, tuple(n), Lq, Sg, [BiSeries.from_json(e) for e in obj["entries"]])


def cache_key(params: ModelParams, n, Lq: int, Sg: int, kmax: int) -> dict:
    lam = "P" if params.lam is None else format_rational(params.lam)
    return {
        "N": params.N,
        "n": list(n),
        "lambda": lam,
        "Lq": Lq,
        "Sg": Sg,
        "kmax": kmax,
        "variant": FORMULA_VARIANT,
    }


def _cache_path(cache_dir, key: dict) -> Path:
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
    return Path(cache_dir) / f"gk-{digest}.json"


def resolve_cache_dir(cache_dir=None):
    return cache_dir or os.environ.get(CACHE_ENV) or None


def gk_table(n, params: ModelParams, Lq: int, Sg: int, kmax: int | None = None,
             cache_dir=None) -> GkTable:
    """Taylor coefficients ``G_0..G_kmax`` (default ``kmax = Lq - 1``)."""
    if kmax is None:
        kmax = max(Lq - 1, 0)
    n = tuple(n)
    cache_dir = resolve_cache_dir(cache_dir)
    key = cache_key(params, n, Lq, Sg, kmax)
    if cache_dir:
        path = _cache_path(cache_dir, key)
        if path.exists():
            obj = json.loads(path.read_text())
            if obj.get("key") == key:
                return GkTable.from_json(params, n, Lq, Sg, obj)
    lat = Lattice(n, params, Lq)
    entries = taylor_sums(lat, closed_path_domain(params.N, Lq), Sg, kmax)
    table = GkTable(params, n, Lq, Sg, entries)
    if cache_dir:
        path = _cache_path(cache_dir, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_json(), sort_keys=True))
        tmp.replace(path)
    return table


def compute_gk(k: int, n, params: ModelParams, Lq: int, Sg: int) -> BiSeries:
    if k < 0:
        raise UsageError("k must be >= 0")
    return gk_table(n, params, Lq, Sg, kmax=k)[k]


# -- Lagrange inversion --------------------------------------------------------

@dataclass(frozen=True)
class LagrangeTerm:
    n: int
    ks: tuple  # multiplicities k_0..k_{n-1}
    coefficient: int

    def monomial(self) -> dict:
        return {j: k for j, k in enumerate(self.ks) if k}


def _partitions(total: int, largest: int):
    """Partitions of ``total`` into parts ``<= largest`` as multiplicity dicts."""
    if total == 0:
        yield {}
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            d = dict(rest)
            d[part] = d.get(part, 0) + 1
            yield d


def lagrange_terms(n: int) -> list[LagrangeTerm]:
    """Terms of the n-th order correction: sum_j j k_j = n-1, sum_j k_j = n."""
    if n < 1:
        raise UsageError("order must be >= 1")
    out = []
    for part in _partitions(n - 1, n - 1):
        ks = [0] * n
        for j, k in part.items():
            ks[j] = k
        ks[0] = n - sum(ks[1:])
        coeff = math.factorial(n - 1)
        for k in ks:
            coeff //= math.factorial(k)
        out.append(LagrangeTerm(n, tuple(ks), (-1) ** n * coeff))
    out.sort(key=lambda t: t.ks, reverse=True)
    return out


def lagrange_compose(gk: GkTable, n_eta: int) -> BiSeries:
    if n_eta < 1:
        raise UsageError("n_eta must be >= 1")
    if gk.kmax < n_eta - 1:
        raise UsageError(f"G_k table has kmax={gk.kmax}, need {n_eta - 1}")
    kind = gk.params.kind
    total = BiSeries.zero(kind, gk.Lq, gk.Sg)
    powers: dict = {}

    def power(j, k):
        key = (j, k)
        if key not in powers:
            powers[key] = gk[j] if k == 1 else power(j, k - 1) * gk[j]
        return powers[key]

    for order in range(1, n_eta + 1):
        for term in lagrange_terms(order):
            prod = None
            for j, k in term.monomial().items():
                f = power(j, k)
                prod = f if prod is None else prod * f
                if not prod:
                    break
            if prod:
                total = total + prod.scale(term.coefficient)
    return total


def eigenvalue_via_lagrange(n, params: ModelParams, Lq: int, Sg: int, cache_dir=None) -> EigenvalueSeries:
    n = tuple(n)
    energy = e0(n, params)
    if Lq == 0:
        return EigenvalueSeries(n, params, energy, BiSeries.zero(params.kind, 0, Sg), "lagrange")
    table = gk_table(n, params, Lq, Sg, kmax=Lq - 1, cache_dir=cache_dir)
    return EigenvalueSeries(n, params, energy, lagrange_compose(table, Lq), "lagrange")


# -- fixed point ---------------------------------------------------------------

def _horner(gk: GkTable, x: BiSeries) -> BiSeries:
    acc = gk[gk.kmax]
    for k in range(gk.kmax - 1, -1, -1):
        acc = acc * x + gk[k]
    return acc


def eigenvalue_via_fixed_point(n, params: ModelParams, Lq: int, Sg: int,
                               iterations: int | None = None, variant: str = "taylor",
                               cache_dir=None) -> EigenvalueSeries:
    """Picard iteration of ``E~ = -G(E~)`` from ``E~ = 0``.

    ``variant="taylor"`` evaluates G through its Taylor coefficients,
    ``variant="resolvent"`` re-sums closed paths with denominators
    ``1/(b - E~)`` on every sweep.  Each sweep fixes one more q^2 order.
    """
    n = tuple(n)
    if iterations is None:
        iterations = Lq
    kind = params.kind
    x = BiSeries.zero(kind, Lq, Sg)
    if variant == "taylor":
        table = gk_table(n, params, Lq, Sg, kmax=max(Lq - 1, 0), cache_dir=cache_dir)

        def step(v):
            return -_horner(table, v)
    elif variant == "resolvent":
        lat = Lattice(n, params, Lq)
        sites = closed_path_domain(params.N, Lq)

        def step(v):
            _, closed = resolvent_sums(lat, sites, Sg, v)
            return -BiSeries.from_dense(kind, Lq, Sg, closed)
    else:
        raise UsageError(f"unknown fixed-point variant {variant!r}")
    for _ in range(iterations):
        x = step(x)
    converged = step(x) == x
    return EigenvalueSeries(n, params, e0(n, params), x, f"fixpoint-{variant}", converged)


# -- q^2 recursion, two particles ----------------------------------------------

def _poly_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _poly_scale(a, c):
    return [x * c for x in a]


def eigenvalue_via_q2_recursion_n2(n, params: ModelParams, Lq: int, Sg: int):
    """Order-by-order solution in ``q^2`` for two particles.

    At order ``l`` the site values ``a_l(mu)`` vanish for ``mu < -l`` and are
    only needed for ``mu <= Lq - l``.  Negative sites are solved first, then
    the eigenvalue coefficient from the ``mu = 0`` equation, then positive
    sites; every quantity is a coupling polynomial truncated at ``Sg``.

    Returns ``(series, table)`` with ``table[(l, mu)]`` the coupling
    polynomial of ``a_l(mu)``.
    """
    if params.N != 2:
        raise UsageError("the q^2 recursion is implemented for N=2 only")
    n = tuple(n)
    kind = params.kind
    zero = field_zero(kind)
    P = p_value(n, params)
    polys: dict = {}
    energies = [[zero] * (Sg + 1)]

    def get(l, mu):
        if l < 0 or mu < -l:
            return None
        return polys.get((l, mu))

    def rhs_sum(l, mu):
        acc = [zero] * (Sg + 1)
        # nu >= 1 at the same order
        for nu in range(1, mu + l + 1):
            a = get(l, mu - nu)
            if a is not None:
                acc = _poly_add(acc, _poly_scale(a, nu))
        # geometric tails of S_nu and S_-nu
        for nu in range(1, l + 1):
            for m in range(1, l // nu + 1):
                for a in (get(l - nu * m, mu - nu), get(l - nu * m, mu + nu)):
                    if a is not None:
                        acc = _poly_add(acc, _poly_scale(a, nu))
        return [zero] + acc[:-1]  # times gamma

    def energy_sum(l, mu):
        acc = [zero] * (Sg + 1)
        for m in range(1, l + 1):
            a = get(l - m, mu)
            if a is not None:
                acc = _poly_add(acc, kernels.conv1d(energies[m], a, Sg))
        return acc

    def solve_site(l, mu):
        bmu = 2 * mu * (P + mu)
        if not bmu:
            raise ResonanceError(f"resonance: b({[mu, -mu]}) = 0", root=(mu, -mu))
        inv = 1 / bmu
        rhs = _poly_add(rhs_sum(l, mu), energy_sum(l, mu))
        polys[(l, mu)] = [c * inv if c else zero for c in rhs]

    one = [zero] * (Sg + 1)
    one[0] = one[0] + 1
    polys[(0, 0)] = one
    for l in range(0, Lq + 1):
        if l > 0:
            polys[(l, 0)] = [zero] * (Sg + 1)
        for mu in range(-l, 0):
            solve_site(l, mu)
        if l > 0:
            energies.append([-c for c in rhs_sum(l, 0)])
        for mu in range(1, Lq - l + 1):
            solve_site(l, mu)
    coeffs = {}
    for l in range(1, Lq + 1):
        for s, v in enumerate(energies[l]):
            if v:
                coeffs[(l, s)] = v
    series = EigenvalueSeries(n, params, e0(n, params), BiSeries(kind, Lq, Sg, coeffs), "q2-recursion")
    return series, polys


# -- coupling-squared closed form ----------------------------------------------

def gamma2_closed_form(n, params: ModelParams, Lq: int) -> BiSeries:
    """The gamma^2 slice from its resummed closed form.

    ``sum_k (1/(P-k) - 1/(P+k)) * k x^k / (2 (1-x^k)^2)`` with ``x = q^2``;
    ``k x^k/(1-x^k)^2 = sum_m m k x^(mk)``.
    """
    if params.N != 2:
        raise UsageError("closed form exists for N=2 only")
    kind = params.kind
    P = p_value(n, params)
    coeffs: dict = {}
    for k in range(1, Lq + 1):
        if not (P - k) or not (P + k):
            raise ResonanceError(f"resonance: P = {'+-'}{k}", root=(k, -k))
        weight = (1 / (P - k) - 1 / (P + k)) * Q(1, 2)
        for m in range(1, Lq // k + 1):
            key = (m * k, 2)
            term = weight * (m * k)
            coeffs[key] = coeffs[key] + term if key in coeffs else term
    return BiSeries(kind, Lq, 2, coeffs)


# -- abstract check of the inversion coefficients ------------------------------

def _mono_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def abstract_lagrange(nmax: int) -> list[dict]:
    """Order-``n`` corrections as integer polynomials in ``G_0..G_{nmax-1}``.

    Keys are exponent tuples of length ``nmax``; index 0 of the returned
    list is the (empty) order-0 part.
    """
    out = [dict()]
    for order in range(1, nmax + 1):
        poly = {}
        for t in lagrange_terms(order):
            e = tuple(t.ks) + (0,) * (nmax - order)
            poly[e] = t.coefficient
        out.append(poly)
    return out


def abstract_iteration(nmax: int) -> list[dict]:
    """Same corrections from iterating ``x <- -eta * sum_k G_k x^k``."""
    width = nmax

    def gen(j):
        e = [0] * width
        e[j] = 1
        return {tuple(e): 1}

    zero_e = (0,) * width
    x = [dict() for _ in range(nmax + 1)]  # graded by eta power
    for _ in range(nmax):
        # sum_k G_k x^k, graded; x has no eta^0 part
        total = [dict() for _ in range(nmax + 1)]
        xpow = [dict() for _ in range(nmax + 1)]
        xpow[0] = {zero_e: 1}
        for k in range(0, nmax):
            if k > 0:
                nxt = [dict() for _ in range(nmax + 1)]
                for i, pi in enumerate(xpow):
                    if not pi:
                        continue
                    for j, pj in enumerate(x):
                        if not pj or i + j > nmax:
                            continue
                        prod = _mono_mul(pi, pj)
                        for e, c in prod.items():
                            nxt[i + j][e] = nxt[i + j].get(e, 0) + c
                xpow = [{e: c for e, c in d.items() if c} for d in nxt]
            g = gen(k)
            for i, pi in enumerate(xpow):
                if pi:
                    for e, c in _mono_mul(g, pi).items():
                        total[i][e] = total[i].get(e, 0) + c
        new = [dict() for _ in range(nmax + 1)]
        for i in range(nmax):
            new[i + 1] = {e: -c for e, c in total[i].items() if c}
        x = new
    return x


def combinations_check(nmax: int) -> bool:
    return abstract_lagrange(nmax) == abstract_iteration(nmax)


__all__ = [
    "EigenvalueSeries",
    "FORMULA_VARIANT",
    "GkTable",
    "LagrangeTerm",
    "abstract_iteration",
    "abstract_lagrange",
    "compute_gk",
    "eigenvalue_via_fixed_point",
    "eigenvalue_via_lagrange",
    "eigenvalue_via_q2_recursion_n2",
    "gamma2_closed_form",
    "gk_table",
    "lagrange_compose",
    "lagrange_terms",
]
