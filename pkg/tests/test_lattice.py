import pytest
from conftest import rationals
from hypothesis import assume, given
from hypothesis import strategies as st

from ecsolve.algebra import RATIONAL, BiSeries, Q, UsageError
from ecsolve.lattice import (
    ModelParams,
    QuantumNumbers,
    RootVector,
    b,
    box_domain,
    closed_path_domain,
    cut_sums,
    detect_resonance,
    e0,
    e0_raw,
    from_cut_sums,
    q0_limit_check,
    s_coeff,
    step_of,
)

positive = rationals.map(abs).filter(bool)
nus = st.integers(1, 25)
orders = st.integers(0, 30)


def vectors(N, lo=-4, hi=4):
    return st.lists(st.integers(lo, hi), min_size=N, max_size=N).map(tuple)


def roots(N, r=4):
    return vectors(N - 1, -r, r).map(lambda h: h + (-sum(h),))


dims = st.integers(2, 4)


def _x_power(nu, L):
    return BiSeries.monomial(RATIONAL, L, 0, nu, 0)


@given(nus, orders)
def test_coupling_difference_is_constant(nu, L):
    assert s_coeff(nu, L) - s_coeff(-nu, L) == BiSeries.constant(RATIONAL, L, 0, nu)


@given(nus, orders)
def test_negative_coupling_is_shifted_positive(nu, L):
    assert s_coeff(-nu, L) == s_coeff(nu, L) * _x_power(nu, L)


@given(nus, orders)
def test_coupling_times_denominator(nu, L):
    one_minus = BiSeries.one(RATIONAL, L, 0) - _x_power(nu, L)
    assert s_coeff(nu, L) * one_minus == BiSeries.constant(RATIONAL, L, 0, nu)


@given(st.integers(-400, 400).filter(bool))
def test_coupling_trigonometric_limit(nu):
    assert q0_limit_check(nu)


@given(dims.flatmap(lambda N: st.tuples(vectors(N), roots(N), roots(N))), positive)
def test_b_is_an_energy_difference(data, lam):
    n, mu, nu = data
    params = ModelParams(len(n), lam)
    shifted = tuple(a + c for a, c in zip(n, mu))
    assert b(mu, n, params) == e0_raw(shifted, lam) - e0_raw(n, lam)
    # antisymmetry: moving back from n + mu costs the opposite energy
    assert b(tuple(-m for m in mu), shifted, params) == -b(mu, n, params)
    # additivity along a path
    both = tuple(a + c for a, c in zip(mu, nu))
    assert b(both, n, params) == b(mu, n, params) + b(nu, shifted, params)


@given(dims.flatmap(lambda N: st.tuples(vectors(N), roots(N))), positive, st.integers(-5, 5))
def test_b_ignores_center_of_mass_shift(data, lam, c):
    n, mu = data
    params = ModelParams(len(n), lam)
    assert b(mu, tuple(x + c for x in n), params) == b(mu, n, params)


@given(vectors(2), st.integers(-5, 5), positive)
def test_symbolic_b_specializes(n, m, lam):
    sym = b((m, -m), n, ModelParams.symbolic())
    P = n[0] - n[1] + lam
    assert sym.evaluate(P) == b((m, -m), n, ModelParams(2, lam))
    assert sym.evaluate(P) == 2 * m * (P + m)


@given(st.integers(0, 4), st.integers(0, 4), positive)
def test_symbolic_free_energy_specializes(a, c, lam):
    n = (a + c, c)
    assert e0(n, ModelParams.symbolic()).evaluate(a + lam) == e0(n, ModelParams(2, lam))


@given(dims.flatmap(lambda N: st.lists(
    st.tuples(st.integers(1, N), st.integers(1, N), st.integers(-4, 4)), max_size=5
).map(lambda s: (N, [(min(j, k), max(j, k), nu) for j, k, nu in s if j != k]))))
def test_root_vectors_sum_to_zero(data):
    N, steps = data
    v = RootVector.from_steps(N, steps)
    assert sum(v) == 0
    assert v + (-v) == RootVector.zero(N)


@given(dims.flatmap(lambda N: roots(N, 6)))
def test_cut_sums_roundtrip(mu):
    assert from_cut_sums(cut_sums(mu)) == mu


@given(dims.flatmap(lambda N: st.tuples(st.just(N), st.integers(1, N - 1), st.integers(-60, 60))))
def test_step_of_recovers_single_steps(data):
    N, j, nu = data
    assume(nu)
    k = N
    assert step_of(RootVector.pair(N, j, k, nu)) == (j, k, nu)


def test_step_of_rejects_compound_moves():
    assert step_of((1, 1, -2)) is None
    assert step_of((0, 0, 0)) is None


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("L", range(5))
def test_closed_path_domain_is_reachable_and_returnable(N, L):
    for mu in closed_path_domain(N, L):
        F = cut_sums(mu)
        assert any(mu) and sum(mu) == 0
        assert max(0, max(F)) + max(0, -min(F)) <= L


def test_box_domain_counts():
    assert len(box_domain(3, -1, 2)) == 16
    assert all(-1 <= f <= 2 for mu in box_domain(3, -1, 2) for f in cut_sums(mu))


def test_resonance_detection():
    # lambda = 1, n = (1, 0): b((-2, 2)) = 2(-2)(2 - 2) = 0
    assert RootVector((-2, 2)) in detect_resonance((1, 0), ModelParams(2, Q(1)), 3)
    assert detect_resonance((1, 0), ModelParams(2, Q(5, 2)), 4) == []


def test_quantum_numbers_validation():
    assert QuantumNumbers.parse("3, 1,0") == (3, 1, 0)
    with pytest.raises(UsageError):
        QuantumNumbers((0, 1))


def test_model_params_validation():
    with pytest.raises(UsageError):
        ModelParams(3, None)
    with pytest.raises(UsageError):
        ModelParams(2, Q(-1))
    with pytest.raises(UsageError):
        RootVector((1, 1))
    assert ModelParams(2, Q(5, 2)).gamma == Q(15, 2)
