"""Theta function, pair potential and Weierstrass function in double precision.

Partial sums are cut at ``m_cut`` terms; with ``q = exp(-beta/2)`` the
neglected tail of every product or sum here is ``O(q^(2(m_cut+1)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np


@dataclass(frozen=True)
class EllipticParams:
    q: float
    m_cut: int

    def __post_init__(self):
        if not 0 <= self.q < 1:
            raise ValueError("nome must satisfy 0 <= q < 1")
        if self.m_cut < 1:
            raise ValueError("m_cut must be >= 1")

    @classmethod
    def from_q(cls, q: float, tail: float = 1e-18) -> "EllipticParams":
        """Pick ``m_cut`` so that ``q^(2(m_cut+1))`` is below ``tail``."""
        if q == 0:
            return cls(0.0, 1)
        m = max(1, math.ceil(math.log(tail) / (2 * math.log(q))))
        return cls(float(q), m)

    @classmethod
    def from_beta(cls, beta: float, tail: float = 1e-18) -> "EllipticParams":
        if beta <= 0:
            raise ValueError("beta must be positive")
        return cls.from_q(math.exp(-beta / 2), tail)

    @property
    def beta(self) -> float:
        return math.inf if self.q == 0 else -2 * math.log(self.q)

    def tail_bound(self) -> float:
        return self.q ** (2 * (self.m_cut + 1))

    def powers(self) -> np.ndarray:
        """``q^(2m)`` for ``m = 1..m_cut``."""
        return self.q ** (2 * np.arange(1, self.m_cut + 1))


def eval_theta(z, ep: EllipticParams):
    z = np.asarray(z, dtype=float)
    out = np.sin(z / 2)
    c = np.cos(z)
    for t in ep.powers():
        out = out * (1 - 2 * t * c + t * t)
    return out


def _pair_sum(x, ep):
    """Sum over m != 0 of 1/(4 sin^2((x + i beta m)/2)), folded into m > 0."""
    c = np.cos(x)
    acc = np.zeros_like(c)
    for t in ep.powers():
        acc += 2 * t * (2 * t - c * (1 + t * t)) / (1 - 2 * c * t + t * t) ** 2
    return acc


def eval_potential(r, ep: EllipticParams):
    r = np.asarray(r, dtype=float)
    s = np.sin(r / 2)
    if np.any(np.abs(s) < 1e-300):
        raise ValueError("potential is singular at multiples of 2*pi")
    return 1 / (4 * s * s) + _pair_sum(r, ep)


def _ratio_sum(x, ep):
    c = np.cos(x)
    acc = np.zeros_like(c)
    for t in ep.powers():
        acc += 2 * t / (1 - 2 * c * t + t * t)
    return acc


def theta_log_derivative(x, ep: EllipticParams):
    """theta'/theta."""
    x = np.asarray(x, dtype=float)
    return 0.5 / np.tan(x / 2) + np.sin(x) * _ratio_sum(x, ep)


def conjugated_potential(x, ep: EllipticParams):
    """``V - (theta'/theta)^2``, written without the cancelling poles.

    With ``theta'/theta = cot(x/2)/2 + sin(x) r(x)`` the double poles of the
    two terms cancel exactly and leave
    ``1/4 + (m != 0 part of V) - 2 cos^2(x/2) r - sin^2(x) r^2``.
    """
    x = np.asarray(x, dtype=float)
    r = _ratio_sum(x, ep)
    return 0.25 + _pair_sum(x, ep) - 2 * np.cos(x / 2) ** 2 * r - np.sin(x) ** 2 * r * r


def weierstrass_p(z: float, q: float, dps: int = 30) -> float:
    """Weierstrass function with half-periods pi and i*beta/2, via Jacobi sn.

    The Jacobi nome of this lattice is exactly ``q``.
    """
    with mpmath.workdps(dps):
        m = mpmath.mfrom(q=mpmath.mpf(q))
        K = mpmath.ellipk(m)
        sn = mpmath.ellipfun("sn", K * mpmath.mpf(z) / mpmath.pi, m=m)
        val = (K / mpmath.pi) ** 2 * (1 / sn**2 - (1 + m) / 3)
        return float(val)


def potential_offset(ep: EllipticParams) -> float:
    """1/12 - (1/2) sum_{m>=1} sinh^-2(beta m / 2)."""
    acc = 1.0 / 12
    for t in ep.powers():
        # sinh(beta m/2) = (1/t^(1/2) - t^(1/2))/2 with t = q^(2m)
        acc -= 0.5 * 4 * t / (1 - t) ** 2
    return acc


# -- extended precision twins (used only to resolve sub-epsilon differences) --

def _mp_powers(q, m_cut):
    q2 = mpmath.mpf(q) ** 2
    out = []
    t = mpmath.mpf(1)
    for _ in range(m_cut):
        t *= q2
        out.append(t)
    return out


def theta_mp(x, q, m_cut: int):
    c = mpmath.cos(x)
    out = mpmath.sin(x / 2)
    for t in _mp_powers(q, m_cut):
        out *= 1 - 2 * t * c + t * t
    return out


def conjugated_potential_mp(x, q, m_cut: int):
    c = mpmath.cos(x)
    pair = mpmath.mpf(0)
    r = mpmath.mpf(0)
    for t in _mp_powers(q, m_cut):
        den = 1 - 2 * c * t + t * t
        pair += 2 * t * (2 * t - c * (1 + t * t)) / den**2
        r += 2 * t / den
    return mpmath.mpf(1) / 4 + pair - 2 * mpmath.cos(x / 2) ** 2 * r - mpmath.sin(x) ** 2 * r * r


def potential_mp(r, q, m_cut: int):
    c = mpmath.cos(r)
    pair = mpmath.mpf(0)
    for t in _mp_powers(q, m_cut):
        pair += 2 * t * (2 * t - c * (1 + t * t)) / (1 - 2 * c * t + t * t) ** 2
    return 1 / (4 * mpmath.sin(r / 2) ** 2) + pair
