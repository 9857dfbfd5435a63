import json
import math

import mpmath
import numpy as np
import pytest
from _oracles import contour_block, theta_power_numeric
from hypothesis import given, settings
from hypothesis import strategies as st

from ecsolve.algebra import Q, UsageError
from ecsolve.eigenfunction import alpha_table, trig_alpha_table
from ecsolve.fhat import (
    WindowError,
    assemble_phi,
    binomial,
    complete_degree,
    expand_theta_power,
    fhat_block,
    fhat_series,
    format_monomials,
)
from ecsolve.lattice import ModelParams

lambdas = st.builds(lambda p, q: Q(p, q), st.integers(1, 12), st.sampled_from([1, 2, 3, 5]))


def _value(poly, z, q, gamma=0):
    with mpmath.workdps(30):
        return complex(poly.evaluate([mpmath.mpc(x) for x in z], mpmath.mpf(q), mpmath.mpf(gamma)))


def test_binomial():
    assert binomial(Q(1, 2), 2) == Q(-1, 8)
    assert binomial(Q(3), 4) == 0
    assert binomial(Q(-1), 3) == -1


@pytest.mark.parametrize("e", ["5/2", "-5/2", "1/3"])
def test_theta_expansion_matches_product(e):
    L, D = 3, 48
    t = expand_theta_power(Q(e), L, D)
    u, q = 0.5 * np.exp(0.4j), 0.02
    approx = sum(float(c) * q ** (2 * l) * u**d for l, d, c in t.table())
    exact = theta_power_numeric(u, q, float(Q(e)))
    assert abs(approx - exact) < 1e-9
    assert all(d >= -l for l, d, _ in t.table())


@pytest.mark.parametrize("m,lam,L", [
    ((1, 0), "5/2", 1),
    ((1, 0), "5/2", 2),
    ((2, -1), "1/3", 2),
    ((0, 0), "3/2", 2),
])
def test_block_matches_contour_integral(m, lam, L):
    block = fhat_series(m, ModelParams(2, Q(lam)), L)
    z = [0.3 * np.exp(0.7j), 0.3 * np.exp(-1.9j)]
    errs = []
    for q in (0.05, 0.1):
        ref = contour_block(m, float(Q(lam)), z, q, (0.55, 1.0))
        errs.append(abs(ref - _value(block, z, q)))
    assert errs[0] < 1e3 * 0.05 ** (2 * (L + 1))
    slope = math.log(errs[1] / errs[0]) / math.log(2)
    assert slope > 2 * (L + 1) - 0.5


def test_three_variable_block_matches_contour_integral():
    m, lam, L = (1, 0, 0), Q(3, 2), 1
    block = fhat_series(m, ModelParams(3, lam), L)
    z = [0.15 * np.exp(0.3j), 0.15 * np.exp(2.1j), 0.15 * np.exp(-2.0j)]
    errs = []
    for q in (0.05, 0.1):
        ref = contour_block(m, float(lam), z, q, (0.3, 0.55, 1.0), points=48, mmax=8)
        errs.append(abs(ref - _value(block, z, q)))
    slope = math.log(errs[1] / errs[0]) / math.log(2)
    assert errs[0] < 1e3 * 0.05 ** (2 * (L + 1)) and slope > 2 * (L + 1) - 0.5


def test_single_variable_block():
    # one variable: constant term of xi^m Theta(z/xi)^-lam
    block = fhat_block((1,), Q(1, 2), 1)
    z, q = 0.3 * np.exp(0.2j), 0.05
    ref = contour_block((1,), 0.5, [z], q, (0.6,))
    assert abs(ref - _value(block, [z], q)) < 1e-4


@settings(max_examples=200)
@given(st.tuples(st.integers(-2, 3), st.integers(-2, 3)), lambdas, st.integers(0, 2))
def test_block_is_symmetric_and_homogeneous(m, lam, L):
    block = fhat_series(m, ModelParams(2, lam), L)
    assert block.is_symmetric()
    assert block.is_homogeneous(sum(m))
    assert block.complete


@settings(max_examples=200)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3)).map(lambda t: (max(t), min(t))),
       lambdas.filter(lambda v: v.denominator != 1), st.integers(0, 1))
def test_eigenfunction_is_symmetric_and_homogeneous(n, lam, L):
    params = ModelParams(2, lam)
    phi = assemble_phi(n, alpha_table(n, params, L, 2), params)
    assert phi.is_symmetric()
    assert phi.is_homogeneous(sum(n))
    assert phi.complete


@settings(max_examples=200)
@given(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).map(
    lambda t: tuple(sorted(t, reverse=True))), lambdas.filter(lambda v: v.denominator != 1))
def test_three_particle_eigenfunction_symmetry(n, lam):
    params = ModelParams(3, lam)
    phi = assemble_phi(n, trig_alpha_table(n, params, max(sum(n[1:]), 1), 2 * max(sum(n[1:]), 1)),
                       params, 0)
    assert phi.is_symmetric()
    assert phi.is_homogeneous(sum(n))


def test_trigonometric_limit_free_fermions():
    # lambda = 1: the q = 0 eigenfunction for n = (2, 0) is the Schur function m_(2) + m_(11)
    params = ModelParams(2, Q(1))
    phi = assemble_phi((2, 0), trig_alpha_table((2, 0), params, 2, 2), params, 0)
    coeffs = {k: v for k, v in phi.specialize(params.gamma).items() if list(k) == sorted(k, reverse=True)}
    lead = coeffs[(2, 0)]
    assert {k: v / lead for k, v in coeffs.items()} == {(2, 0): 1, (1, 1): 1}


def test_window_errors():
    params = ModelParams(2, Q(5, 2))
    table = alpha_table((1, 0), params, 1, 2, W=1)
    with pytest.raises(WindowError):
        assemble_phi((1, 0), alpha_table((1, 0), params, 1, 2, W=0), params)
    with pytest.raises(WindowError):
        assemble_phi((1, 0), table, params, Dmax=0)
    partial = assemble_phi((1, 0), table, params, Dmax=0, allow_partial=True)
    assert not partial.complete
    with pytest.raises(UsageError):
        assemble_phi((1, 0), table, params, Lq=2)


def test_complete_degree_keeps_every_term():
    m, L = (2, -1), 2
    full = fhat_series(m, ModelParams(2, Q(5, 2)), L, Dmax=complete_degree(m, L) + 3)
    assert fhat_series(m, ModelParams(2, Q(5, 2)), L).terms == full.terms


def test_json_and_text():
    block = fhat_series((1, 0), ModelParams(2, Q(5, 2)), 1)
    obj = json.loads(block.dumps())
    assert obj["complete"] and obj["n"] == 2
    assert [t["exps"] for t in obj["terms"]] == sorted([t["exps"] for t in obj["terms"]], reverse=True)
    assert format_monomials({(1, 0): Q(1)}) == "(1/1)*m[1, 0]"


def test_usage_errors():
    with pytest.raises(UsageError):
        fhat_series((1, 0), ModelParams.symbolic(), 1)
    with pytest.raises(UsageError):
        fhat_series((1, 0, 0), ModelParams(2, Q(1)), 1)
    with pytest.raises(UsageError):
        expand_theta_power(Q(1), -1, 2)
