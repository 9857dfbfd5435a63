import math

import mpmath
import numpy as np
import pytest

from ecsolve.algebra import Q
from ecsolve.eigenfunction import alpha_table
from ecsolve.eigenvalue import eigenvalue_via_lagrange
from ecsolve.fhat import assemble_phi
from ecsolve.lattice import ModelParams
from ecsolve.oracle.galerkin import (
    build_problem,
    galerkin_energy,
    lame_eigenvalues,
    refine_energy,
    select_level,
)
from ecsolve.oracle.residual import GridError, residual_check, second_derivative_weights
from ecsolve.oracle.special import (
    EllipticParams,
    eval_potential,
    eval_theta,
    potential_offset,
    theta_log_derivative,
    weierstrass_p,
)
from ecsolve.oracle.sutherland import partitions, sutherland_eigenvector


@pytest.mark.parametrize("q", [0.05, 0.2, 0.4])
def test_theta_matches_jacobi_theta(q):
    # theta_1(z/2, q) = 2 q^(1/4) sin(z/2) prod (1 - q^2m)(1 - 2 q^2m cos z + q^4m)
    ep = EllipticParams.from_q(q)
    norm = 2 * q**0.25 * float(mpmath.qp(q * q, q * q))
    for z in (0.3, 1.7, 4.0):
        ref = float(mpmath.jtheta(1, z / 2, q)) / norm
        assert abs(eval_theta(z, ep) - ref) < 1e-13


@pytest.mark.parametrize("q", [0.1, 0.3])
def test_potential_is_shifted_weierstrass(q):
    ep = EllipticParams.from_q(q)
    for r in (0.7, 2.0, 3.1):
        assert abs(float(eval_potential(r, ep)) - weierstrass_p(r, q) - potential_offset(ep)) < 1e-12


def test_log_derivative_matches_finite_difference():
    ep = EllipticParams.from_q(0.3)
    x, h = 1.3, 1e-5
    fd = (math.log(eval_theta(x + h, ep)) - math.log(eval_theta(x - h, ep))) / (2 * h)
    assert abs(theta_log_derivative(x, ep) - fd) < 1e-8


def test_elliptic_params_validation():
    with pytest.raises(ValueError):
        EllipticParams(1.0, 3)
    with pytest.raises(ValueError):
        EllipticParams.from_beta(-1)
    ep = EllipticParams.from_q(0.1)
    assert ep.tail_bound() < 1e-18
    assert abs(EllipticParams.from_beta(ep.beta).q - 0.1) < 1e-15


@pytest.mark.parametrize("n,lam", [((1, 0), 2.5), ((2, 0), 0.5), ((0, 0), 1.5)])
def test_galerkin_is_exact_at_zero_nome(n, lam):
    ep = EllipticParams.from_q(0.0)
    e0 = (n[0] + lam / 2) ** 2 + (n[1] - lam / 2) ** 2
    assert abs(galerkin_energy(n, lam, ep, M=31) - e0) < 1e-9 * e0


def test_galerkin_matrices_are_symmetric():
    prob = build_problem((1, 0), 2.5, EllipticParams.from_q(0.1), 21)
    assert prob.symmetry_error < 1e-10
    assert np.allclose(prob.overlap, prob.overlap.T)
    assert np.allclose(prob.operator, prob.operator.T)
    assert np.all(np.linalg.eigvalsh(prob.overlap) > 0)


def test_galerkin_converges_from_above():
    ep = EllipticParams.from_q(0.2)
    values = [galerkin_energy((1, 0), 2.5, ep, M) for M in (21, 41, 61)]
    assert values[2] <= values[1] + 1e-10 and values[1] <= values[0] + 1e-10
    assert abs(values[2] - values[1]) < 1e-8


def test_level_selection_tracks_free_state():
    ep = EllipticParams.from_q(0.02)
    levels = lame_eigenvalues((2, 0), 2.5, ep, 21)
    assert abs(levels[select_level(levels, (2, 0), 2.5)] - (3.25**2 + 1.25**2)) < 0.05
    with pytest.raises(ValueError):
        build_problem((1, 0), 2.5, ep, 20)


def test_refinement_agrees_with_double_precision():
    ep = EllipticParams.from_q(0.08)
    fine = refine_energy((1, 0), Q(5, 2), ep, 31, dps=30)
    assert abs(float(fine) - galerkin_energy((1, 0), 2.5, ep, 31)) < 1e-11


def test_finite_difference_weights():
    w = second_derivative_weights(1)
    assert [float(v) for v in w] == [1.0, -2.0, 1.0]
    assert abs(float(sum(w))) < 1e-30


@pytest.mark.parametrize("Lq", [1, 2])
def test_assembled_eigenfunction_residual_scales_with_truncation(Lq):
    lam = Q(5, 2)
    params = ModelParams(2, lam)
    S = 2 * Lq + 2
    phi = assemble_phi((1, 0), alpha_table((1, 0), params, Lq, S), params)
    e = eigenvalue_via_lagrange((1, 0), params, Lq, S)
    r = [residual_check(phi, e, lam, q, grid=4) for q in (0.02, 0.04)]
    assert not any(x.discretization_dominated for x in r)
    assert math.log2(r[1].residual / r[0].residual) > 2 * (Lq + 1) - 0.5


def test_residual_grid_errors():
    params = ModelParams(2, Q(5, 2))
    phi = assemble_phi((1, 0), alpha_table((1, 0), params, 1, 2), params)
    e = eigenvalue_via_lagrange((1, 0), params, 1, 2)
    with pytest.raises(GridError):
        residual_check(phi, e, Q(5, 2), 0.02, grid=1)
    with pytest.raises(GridError):
        residual_check(phi, e, Q(5, 2), 0.02, grid=64, h=0.05)


def test_partitions():
    assert partitions(3, 2) == [(3, 0), (2, 1)]
    assert partitions(2, 3) == [(2, 0, 0), (1, 1, 0)]


@pytest.mark.parametrize("n,lam", [((2, 0), 1), ((2, 1), 2), ((1, 0, 0), 0.5)])
def test_sutherland_block_energies(n, lam):
    basis, energy, vec, fit = sutherland_eigenvector(n, lam)
    N = len(n)
    e0 = sum((n[j] + lam * ((N + 1) / 2 - (j + 1))) ** 2 for j in range(N))
    assert fit < 1e-10
    assert abs(energy - e0) < 1e-9 * max(e0, 1)
    assert vec[basis.index(n)] == 1
