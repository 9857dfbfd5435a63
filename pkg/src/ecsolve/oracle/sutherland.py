"""Numeric diagonalisation of the trigonometric model on symmetric polynomials.

The Hamiltonian is applied to ``ground * m_kappa`` by numerical
differentiation, divided by the ground-state factor, and the result is
fitted on the monomial symmetric functions of the same degree at sample
points.  Nothing about the conjugated operator is assumed beyond the fact
that the block of fixed degree is invariant, which the fit residual checks.
"""

from __future__ import annotations

import itertools

import mpmath
import numpy as np


def partitions(degree: int, parts: int) -> list[tuple[int, ...]]:
    """Weakly decreasing non-negative integer vectors of length ``parts`` summing to ``degree``."""
    out = []

    def rec(prefix, left, cap):
        if len(prefix) == parts - 1:
            if left <= cap:
                out.append(tuple(prefix) + (left,))
            return
        for x in range(min(left, cap), -1, -1):
            rec(prefix + [x], left - x, x)

    if parts == 1:
        return [(degree,)]
    rec([], degree, degree)
    return out


def monomial_symmetric(kappa, z):
    total = 0
    for perm in set(itertools.permutations(kappa)):
        t = 1
        for zj, e in zip(z, perm):
            t *= zj**e
        total += t
    return total


def _ground(x, lam):
    g = mpmath.mpf(1)
    for j, k in itertools.combinations(range(len(x)), 2):
        g *= mpmath.sin((x[j] - x[k]) / 2) ** lam
    return g


def _potential(x):
    return sum(1 / (4 * mpmath.sin((x[j] - x[k]) / 2) ** 2)
               for j, k in itertools.combinations(range(len(x)), 2))


def _sample_points(N: int, count: int, seed: int):
    # strictly decreasing coordinates inside one period keep every sine positive
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        x = np.sort(rng.uniform(0.3, 2 * np.pi - 0.3, N))[::-1]
        if np.min(-np.diff(x)) > 0.25:
            pts.append([mpmath.mpf(float(v)) for v in x])
    return pts


def operator_matrix(N: int, degree: int, lam, dps: int = 30, seed: int = 7):
    """Matrix of ``ground^-1 H ground`` on the monomial basis of one degree.

    Returns ``(basis, matrix, fit_residual)``; column ``c`` holds the
    coordinates of the image of ``basis[c]``.
    """
    basis = partitions(degree, N)
    nb = len(basis)
    with mpmath.workdps(dps):
        lam = mpmath.mpf(lam)
        gamma = 2 * lam * (lam - 1)
        pts = _sample_points(N, 3 * nb + 4, seed)
        design = np.zeros((len(pts), nb), dtype=complex)
        images = np.zeros((len(pts), nb), dtype=complex)
        for r, x in enumerate(pts):
            z = [mpmath.expj(v) for v in x]
            g = _ground(x, lam)
            v = _potential(x)
            for c, kappa in enumerate(basis):
                design[r, c] = complex(monomial_symmetric(kappa, z))

                def psi(*y, kappa=kappa):
                    zz = [mpmath.expj(t) for t in y]
                    return _ground(y, lam) * monomial_symmetric(kappa, zz)

                lap = 0
                for i in range(N):
                    orders = [0] * N
                    orders[i] = 2
                    lap += mpmath.diff(psi, x, orders)
                images[r, c] = complex((-lap + gamma * v * psi(*x)) / g)
    coef, *_ = np.linalg.lstsq(design, images, rcond=None)
    fit = float(np.max(np.abs(design @ coef - images)) / max(np.max(np.abs(images)), 1e-300))
    return basis, coef, fit


def sutherland_eigenvector(n, lam, dps: int = 30):
    """Eigenvector on the monomial basis for the level closest to the free energy of ``n``.

    Returns ``(basis, energy, vector, fit_residual)`` with the vector scaled
    so that its entry on the partition ``n`` is 1.
    """
    n = tuple(int(v) for v in n)
    N = len(n)
    basis, M, fit = operator_matrix(N, sum(n), lam, dps)
    target = sum((n[j] + float(lam) * ((N + 1) / 2 - (j + 1))) ** 2 for j in range(N))
    w, V = np.linalg.eig(M)
    i = int(np.argmin(np.abs(w - target)))
    vec = V[:, i]
    vec = vec / vec[basis.index(n)]
    return basis, complex(w[i]), vec, fit


__all__ = ["monomial_symmetric", "operator_matrix", "partitions", "sutherland_eigenvector"]
