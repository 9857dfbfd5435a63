"""Quantum numbers, root vectors, free dispersion and coupling coefficients.

Root vectors are stored as dense integer N-tuples with zero sum.  A step
``nu * E(j, k)`` adds ``nu`` at slot ``j`` and subtracts it at slot ``k``
(1-based, ``j < k``).  The cut sums ``F_c(mu) = mu_1 + ... + mu_c`` for
``c = 1..N-1`` are a bijective coordinate system on root vectors; a step
``nu * E(j, k)`` shifts exactly the cuts ``j <= c < k`` by ``nu``.  Every
negative step carries at least ``q^(2|nu|)``, so the q-budget bounds how
far any contributing path can wander in these coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra.poly import PPoly, PRatFunc, UsageError
from .algebra.rational import Q, Rational
from .algebra.series import P_RATIONAL, RATIONAL, BiSeries, ResonanceError


@dataclass(frozen=True)
class ModelParams:
    """Particle number and coupling.

    ``lam=None`` selects the symbolic two-particle mode, in which every
    scalar lives in Q(P) with ``P = n1 - n2 + lambda``.
    """

    N: int
    lam: Rational | None
    gamma: Rational | None = field(init=False)

    def __post_init__(self):
        if self.N < 2:
            raise UsageError("need at least two particles")
        if self.lam is None:
            if self.N != 2:
                raise UsageError("symbolic mode requires N=2")
            object.__setattr__(self, "gamma", None)
            return
        lam = Q(self.lam)
        if lam <= 0:
            raise UsageError("lambda must be positive")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "gamma", 2 * lam * (lam - 1))

    @classmethod
    def symbolic(cls) -> "ModelParams":
        return cls(2, None)

    @property
    def symbolic_mode(self) -> bool:
        return self.lam is None

    @property
    def kind(self) -> str:
        return P_RATIONAL if self.lam is None else RATIONAL

    def describe(self) -> str:
        lam = "P-symbolic" if self.lam is None else f"{self.lam}"
        return f"N={self.N}, lambda={lam}"


class QuantumNumbers(tuple):
    """Weakly decreasing integer vector labelling an eigenstate."""

    def __new__(cls, values):
        vals = tuple(int(v) for v in values)
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise UsageError(f"quantum numbers must be weakly decreasing: {vals}")
        return super().__new__(cls, vals)

    @classmethod
    def parse(cls, text: str) -> "QuantumNumbers":
        return cls(int(t) for t in text.split(",") if t.strip())


class RootVector(tuple):
    """Integer vector with zero component sum."""

    def __new__(cls, values):
        vals = tuple(int(v) for v in values)
        if sum(vals) != 0:
            raise UsageError(f"root vector components must sum to zero: {vals}")
        return super().__new__(cls, vals)

    @classmethod
    def zero(cls, N: int) -> "RootVector":
        return cls((0,) * N)

    @classmethod
    def pair(cls, N: int, j: int, k: int, nu: int = 1) -> "RootVector":
        if not 1 <= j < k <= N:
            raise UsageError(f"need 1 <= j < k <= N, got ({j}, {k})")
        v = [0] * N
        v[j - 1] += nu
        v[k - 1] -= nu
        return cls(v)

    @classmethod
    def from_steps(cls, N: int, steps) -> "RootVector":
        """Sum of ``nu * E(j, k)`` over ``(j, k, nu)`` triples."""
        v = [0] * N
        for j, k, nu in steps:
            if not 1 <= j < k <= N:
                raise UsageError(f"need 1 <= j < k <= N, got ({j}, {k})")
            v[j - 1] += nu
            v[k - 1] -= nu
        return cls(v)

    def moment(self) -> int:
        return sum(i * m for i, m in enumerate(self, start=1))

    def __add__(self, other):
        return RootVector(a + b for a, b in zip(self, other))

    def __neg__(self):
        return RootVector(-a for a in self)


def pairs(N: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(1, N + 1) for k in range(j + 1, N + 1)]


def step_of(diff) -> tuple[int, int, int] | None:
    """Decompose a difference vector as a single ``nu * E(j, k)``."""
    nz = [(i, d) for i, d in enumerate(diff, start=1) if d]
    if len(nz) != 2:
        return None
    (j, a), (k, c) = nz
    if a != -c:
        return None
    return j, k, a


# -- dispersion ----------------------------------------------------------------

def e0_raw(n, lam) -> Rational:
    """Sum_j (n_j + lam*((N+1)/2 - j))^2 for a rational lam (lam = 0 allowed)."""
    lam = Q(lam)
    N = len(n)
    half = Q(N + 1, 2)
    return sum(((n[j - 1] + lam * (half - j)) ** 2 for j in range(1, N + 1)), Rational(0))


def p_value(n, params: ModelParams):
    """The two-particle spectral parameter ``n1 - n2 + lambda``."""
    if params.N != 2:
        raise UsageError("P is defined for N=2 only")
    if params.lam is None:
        return PRatFunc.P()
    return Q(n[0] - n[1]) + params.lam


def e0(n, params: ModelParams):
    if len(n) != params.N:
        raise UsageError("quantum number length does not match N")
    if params.lam is None:
        # (n1 + lam/2)^2 + (n2 - lam/2)^2 = (K^2 + P^2)/2, P taken at n itself
        K = n[0] + n[1]
        P = PRatFunc.P()
        return (P * P + K * K) * Q(1, 2)
    return e0_raw(n, params.lam)


def b(mu, n, params: ModelParams):
    """E0(n + mu) - E0(n)."""
    if params.lam is None:
        m = mu[0]
        # 2 m (P + m) with P the indeterminate shifted to the base state
        return PRatFunc(PPoly([2 * m * m, 2 * m]))
    lam = params.lam
    N = params.N
    half = Q(N + 1, 2)
    total = Rational(0)
    for j in range(1, N + 1):
        m = mu[j - 1]
        if m:
            base = n[j - 1] + lam * (half - j)
            total += m * (2 * base + m)
    return total


# -- coupling coefficients -----------------------------------------------------

def s_terms(nu: int, Lq: int) -> list[tuple[int, int]]:
    """Nonzero ``(l, c)`` terms of S_nu in powers ``q^(2l)`` up to ``l <= Lq``."""
    if nu > 0:
        return [(l, nu) for l in range(0, Lq + 1, nu)]
    if nu < 0:
        m = -nu
        return [(l, m) for l in range(m, Lq + 1, m)]
    return []


def s_coeff(nu: int, Lq: int) -> BiSeries:
    if Lq < 0:
        raise UsageError("Lq must be >= 0")
    return BiSeries(RATIONAL, Lq, 0, {(l, 0): c for l, c in s_terms(nu, Lq)})


def q0_limit_check(nu: int) -> bool:
    """True iff the q^0 coefficient of S_nu vanishes exactly when nu <= 0."""
    c0 = s_coeff(nu, 0).coeff(0, 0)
    return (c0 == 0) == (nu <= 0)


# -- cut-sum coordinates and domains ------------------------------------------

def cut_sums(mu) -> tuple[int, ...]:
    out = []
    acc = 0
    for m in mu[:-1]:
        acc += m
        out.append(acc)
    return tuple(out)


def from_cut_sums(F) -> tuple[int, ...]:
    prev = 0
    mu = []
    for f in F:
        mu.append(f - prev)
        prev = f
    mu.append(-prev)
    return tuple(mu)


def closed_path_domain(N: int, Lq: int) -> list[tuple[int, ...]]:
    """Nonzero root vectors that a closed path of q-cost <= Lq can visit.

    Reaching ``mu`` and returning costs at least
    ``max(0, max_c -F_c) + max(0, max_c F_c)``.
    """
    out = []
    for F in itertools.product(range(-Lq, Lq + 1), repeat=N - 1):
        up = max(0, max(F))
        down = max(0, -min(F))
        if up + down <= Lq and any(F):
            out.append(from_cut_sums(F))
    return sorted(out)


def box_domain(N: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    """Root vectors with every cut sum in ``[lo, hi]``."""
    return sorted(from_cut_sums(F) for F in itertools.product(range(lo, hi + 1), repeat=N - 1))


def in_box(mu, lo: int, hi: int) -> bool:
    return all(lo <= f <= hi for f in cut_sums(mu))


# -- resonances ----------------------------------------------------------------

def detect_resonance(n, params: ModelParams, search_radius: int) -> list[RootVector]:
    """All nonzero ``mu`` with ``max|mu_j| <= radius`` and ``b(mu; n) = 0``."""
    if search_radius < 1:
        raise UsageError("search_radius must be >= 1")
    if params.lam is None:
        raise UsageError("resonance search needs a numeric lambda")
    N = params.N
    r = search_radius
    found = []
    for head in itertools.product(range(-r, r + 1), repeat=N - 1):
        last = -sum(head)
        if abs(last) > r:
            continue
        mu = head + (last,)
        if any(mu) and b(mu, n, params) == 0:
            found.append(RootVector(mu))
    return sorted(found)


def check_denominator(value, mu) -> None:
    if not value:
        raise ResonanceError(f"resonance: b({list(mu)}) = 0", root=tuple(mu))
