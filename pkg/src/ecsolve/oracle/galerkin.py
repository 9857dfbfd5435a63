"""Galerkin eigensolver for the two-particle relative operator.

With ``X = (x1 + x2)/2`` and ``x = x1 - x2`` the Hamiltonian separates into
``-(1/2) d^2/dX^2`` (eigenvalue ``K^2/2`` for total momentum ``K``) and the
relative operator ``-2 d^2/dx^2 + gamma V(x)`` on ``(0, 2 pi)``.  Trial
functions are ``theta(x)^lam exp(i k_m x)`` with ``k_m = m + K/2``, which
builds in the collision behaviour.  Conjugating by ``theta^lam`` and
integrating by parts gives the weighted forms

    A[m, m'] = 2 k_m k_m' <w> + <w U>,   B[m, m'] = <w>,

with ``w = theta^(2 lam)`` and ``U = 2 lam^2 (V - (theta'/theta)^2)``, a smooth
function.  All brackets are Fourier coefficients of ``w`` and ``w U``, so both
matrices are real symmetric Toeplitz.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import mpmath
import numpy as np

from .special import (
    EllipticParams,
    conjugated_potential,
    conjugated_potential_mp,
    eval_theta,
    theta_mp,
)


class QuadratureError(RuntimeError):
    pass


@dataclass
class GalerkinProblem:
    M: int
    K: int
    lam: float
    overlap: np.ndarray
    operator: np.ndarray
    symmetry_error: float


def _fourier_coefficients(lam: float, ep: EllipticParams, dmax: int, nquad: int):
    """(1/2pi) int_0^2pi f(x) exp(-i d x) dx for f = w and f = w U.

    The substitution ``x = t - sin t`` flattens the endpoint zero of ``w`` so
    the trapezoid rule in ``t`` converges quickly.
    """
    t = 2 * np.pi * (np.arange(nquad) + 0.5) / nquad
    x = t - np.sin(t)
    jac = 1 - np.cos(t)
    th = np.abs(eval_theta(x, ep))
    w = th ** (2 * lam)
    u = 2 * lam * lam * conjugated_potential(x, ep)
    d = np.arange(-dmax, dmax + 1)
    phase = np.exp(-1j * np.outer(d, x))
    cw = phase @ (w * jac) / nquad
    cu = phase @ (w * u * jac) / nquad
    return d, cw, cu


def build_problem(n, lam: float, ep: EllipticParams, M: int, nquad: int | None = None,
                  tol: float = 1e-10) -> GalerkinProblem:
    if M < 1 or M % 2 == 0:
        raise ValueError("basis size M must be odd")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    K = int(n[0]) + int(n[1])
    half = (M - 1) // 2
    dmax = M - 1
    if nquad is None:
        nquad = max(2048, 16 * M)
    d, cw, cu = _fourier_coefficients(float(lam), ep, dmax, nquad)
    # real, even coefficients expected by symmetry of w about x = pi
    scale = max(np.max(np.abs(cw)), 1e-300)
    sym = float(max(np.max(np.abs(cw.imag)), np.max(np.abs(cw - cw[::-1]))) / scale)
    uscale = max(np.max(np.abs(cu)), 1e-300)
    sym = max(sym, float(max(np.max(np.abs(cu.imag)), np.max(np.abs(cu - cu[::-1]))) / uscale))
    if sym > tol:
        raise QuadratureError(f"Galerkin matrices not symmetric to {tol:g} (error {sym:.2e})")
    cw = cw.real
    cu = cu.real
    m = np.arange(-half, half + 1)
    k = m + K / 2.0
    idx = (m[:, None] - m[None, :]) + dmax
    B = cw[idx]
    A = 2 * np.outer(k, k) * B + cu[idx]
    return GalerkinProblem(M, K, float(lam), B, A, sym)


def solve_generalized(A: np.ndarray, B: np.ndarray, cutoff: float = 1e-13):
    """Symmetric-definite ``A v = E B v`` by canonical orthogonalisation.

    Directions of the overlap below ``cutoff`` times its largest eigenvalue
    are discarded, which keeps the reduction stable when the trial functions
    are nearly dependent.
    """
    s, U = np.linalg.eigh(B)
    keep = s > cutoff * s[-1]
    X = U[:, keep] / np.sqrt(s[keep])
    H = X.T @ A @ X
    H = (H + H.T) / 2
    e, y = np.linalg.eigh(H)
    return e, X @ y


def lame_eigenvalues(n, lam: float, ep: EllipticParams, M: int = 61, nquad: int | None = None,
                     with_vectors: bool = False):
    """Eigenvalues of the full two-particle Hamiltonian in the momentum sector of ``n``."""
    prob = build_problem(n, lam, ep, M, nquad)
    e, v = solve_generalized(prob.operator, prob.overlap)
    total = e + prob.K**2 / 2.0
    if with_vectors:
        return total, v, prob
    return total


def select_level(levels, n, lam: float) -> int:
    """Index of the level continuously connected to the free state ``n``.

    The weight vanishes at the collision point, so the trial space is
    complete for either boundary phase and levels ``(d + lam)^2/2`` of the
    opposite parity of ``d`` show up as well (converging slowly).  Near the
    trigonometric limit the wanted level is the one closest to
    ``E0(n) = K^2/2 + (n1 - n2 + lam)^2/2``.
    """
    K = int(n[0]) + int(n[1])
    target = K * K / 2 + (int(n[0]) - int(n[1]) + lam) ** 2 / 2
    return int(np.argmin(np.abs(np.asarray(levels) - target)))


def galerkin_energy(n, lam: float, ep: EllipticParams, M: int = 61, nquad: int | None = None) -> float:
    levels = lame_eigenvalues(n, lam, ep, M, nquad)
    return float(levels[select_level(levels, n, lam)])


# -- extended precision refinement ---------------------------------------------

def _to_mpf(x):
    num = getattr(x, "numerator", None)
    if num is not None and not isinstance(x, float):
        return mpmath.mpf(int(num)) / int(x.denominator)
    return mpmath.mpf(x)


def _fourier_coefficients_mp(lam, q: float, dmax: int, nquad: int, dps: int):
    """Cosine coefficients of ``w`` and ``w U`` in ``dps``-digit arithmetic.

    Both functions are even about ``x = pi``, so only the half interval is
    sampled (midpoint rule in ``t`` on ``(0, pi)``).
    """
    lam = _to_mpf(lam)
    m_cut = max(1, math.ceil(dps * math.log(10) / (-2 * math.log(q)))) if q > 0 else 1
    half = nquad // 2
    cw = [mpmath.mpf(0)] * (dmax + 1)
    cu = [mpmath.mpf(0)] * (dmax + 1)
    for j in range(half):
        t = mpmath.pi * (2 * j + 1) / nquad
        x = t - mpmath.sin(t)
        jac = 1 - mpmath.cos(t)
        w = abs(theta_mp(x, q, m_cut)) ** (2 * lam) * jac
        wu = w * 2 * lam * lam * conjugated_potential_mp(x, q, m_cut)
        # cos(d x) by recurrence
        c1 = mpmath.cos(x)
        prev, cur = mpmath.mpf(1), c1
        cw[0] += w
        cu[0] += wu
        for d in range(1, dmax + 1):
            cw[d] += w * cur
            cu[d] += wu * cur
            prev, cur = cur, 2 * c1 * cur - prev
    scale = mpmath.mpf(2) / nquad
    return [v * scale for v in cw], [v * scale for v in cu]


def refine_energy(n, lam, ep: EllipticParams, M: int = 61, nquad: int | None = None,
                  dps: int = 40, sweeps: int = 3) -> mpmath.mpf:
    """Galerkin level of ``n`` resolved below double precision.

    Starts from the double-precision eigenpair and applies shifted inverse
    iteration with Rayleigh quotients on the same Galerkin pencil built in
    ``dps``-digit arithmetic.  The result is the Rayleigh-Ritz value of the
    M-term trial space, not of the exact operator.
    """
    levels, vecs, prob = lame_eigenvalues(n, float(lam), ep, M, nquad, with_vectors=True)
    i = select_level(levels, n, float(lam))
    if nquad is None:
        nquad = max(2048, 16 * M)
    K = prob.K
    with mpmath.workdps(dps):
        cw, cu = _fourier_coefficients_mp(lam, ep.q, M - 1, nquad, dps)
        half = (M - 1) // 2
        ks = [mpmath.mpf(m) + mpmath.mpf(K) / 2 for m in range(-half, half + 1)]
        B = mpmath.matrix(M, M)
        A = mpmath.matrix(M, M)
        for a in range(M):
            for c in range(M):
                d = abs(a - c)
                B[a, c] = cw[d]
                A[a, c] = 2 * ks[a] * ks[c] * cw[d] + cu[d]
        v = mpmath.matrix([float(x) for x in vecs[:, i]])
        rel = mpmath.mpf(levels[i]) - mpmath.mpf(K * K) / 2
        for _ in range(sweeps):
            shifted = A - rel * B
            try:
                v = mpmath.lu_solve(shifted, B * v)
            except ZeroDivisionError:
                break  # the shift is already a level to working precision

            v = v / mpmath.norm(v)
            rel = (v.T * A * v)[0] / (v.T * B * v)[0]
        return rel + mpmath.mpf(K * K) / 2
