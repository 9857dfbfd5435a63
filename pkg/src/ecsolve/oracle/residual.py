"""Grid residual of an assembled two-particle eigenfunction.

``psi = theta(x1 - x2)^lam * Phi(z1, z2)`` is evaluated in extended
precision and the Hamiltonian is applied with central finite differences of
configurable order, so the residual can resolve truncation errors far below
double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from ..algebra.poly import UsageError
from .special import potential_mp, theta_mp


class GridError(UsageError):
    pass


def second_derivative_weights(half_width: int) -> list:
    """Central weights ``w_k`` (k = -p..p) with ``sum w_k f(x + k h) ~ h^2 f''(x)``."""
    p = half_width
    size = 2 * p + 1
    A = mpmath.matrix(size, size)
    rhs = mpmath.matrix(size, 1)
    for m in range(size):
        for i, k in enumerate(range(-p, p + 1)):
            A[m, i] = mpmath.mpf(k) ** m
    rhs[2] = 2
    w = mpmath.lu_solve(A, rhs)
    return [w[i] for i in range(size)]


@dataclass
class GridResidual:
    residual: float
    fd_estimate: float
    points: int
    h: float
    order: int

    @property
    def discretization_dominated(self) -> bool:
        return self.fd_estimate >= 0.1 * self.residual


def _mp(x):
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)


def residual_check(phi, e, lam, q: float, grid: int = 6, h: float = 1e-3, order: int = 8,
                   dps: int = 40) -> GridResidual:
    """``max |H psi - E psi| / max |psi|`` over a grid of ``grid^2`` points.

    ``phi`` is an assembled Laurent polynomial, ``e`` the eigenvalue series
    at the same truncation.  ``fd_estimate`` compares the Laplacian at step
    ``h`` and ``2h``; when it is not small against the residual the grid
    spacing, not the series, limits the result.
    """
    if phi.N != 2:
        raise UsageError("the grid residual is implemented for N=2")
    if grid < 2:
        raise GridError("need at least 2 grid points per direction")
    if order % 2 or order < 2:
        raise UsageError("finite-difference order must be even and >= 2")
    p = order // 2
    with mpmath.workdps(dps):
        lam_mp = _mp(lam)
        gamma = 2 * lam_mp * (lam_mp - 1)
        qm = mpmath.mpf(q)
        q2 = qm * qm
        m_cut = max(1, math.ceil(dps * math.log(10) / (-2 * math.log(q)))) if q > 0 else 1
        coeffs = []
        for exps, s in phi.terms.items():
            c = sum(_mp(v) * q2**l * gamma**k for (l, k), v in s.terms())
            if c:
                coeffs.append((exps, c))
        energy = _mp(e.e0) + sum(_mp(v) * q2**l * gamma**k for (l, k), v in e.tilde_e.terms())
        hm = mpmath.mpf(h)
        if p * 2 * hm >= mpmath.pi / grid:
            raise GridError("finite-difference stencil reaches a collision point")
        w1 = second_derivative_weights(p)

        def psi(x1, x2):
            z1, z2 = mpmath.expj(x1), mpmath.expj(x2)
            val = sum(c * z1**a * z2**b for (a, b), c in coeffs)
            return theta_mp(x1 - x2, qm, m_cut) ** lam_mp * val

        def laplacian(x1, x2, step):
            acc = 0
            for i, k in enumerate(range(-p, p + 1)):
                acc += w1[i] * (psi(x1 + k * step, x2) + psi(x1, x2 + k * step))
            return acc / step**2

        worst = mpmath.mpf(0)
        fd = mpmath.mpf(0)
        scale = mpmath.mpf(0)
        count = 0
        for i in range(grid):
            x2 = 2 * mpmath.pi * i / grid
            for j in range(grid):
                r = 2 * mpmath.pi * (j + mpmath.mpf(1) / 2) / grid
                x1 = x2 + r
                f = psi(x1, x2)
                lap = laplacian(x1, x2, hm)
                lap2 = laplacian(x1, x2, 2 * hm)
                hpsi = -lap + gamma * potential_mp(r, qm, m_cut) * f
                worst = max(worst, abs(hpsi - energy * f))
                fd = max(fd, abs(lap - lap2))
                scale = max(scale, abs(f))
                count += 1
        return GridResidual(float(worst / scale), float(fd / scale), count, h, order)


__all__ = ["GridError", "GridResidual", "residual_check", "second_derivative_weights"]
