import json
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest
from _oracles import brute_eigenvalue
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ecsolve.algebra import P_RATIONAL, Q, ResonanceError, UsageError
from ecsolve.eigenvalue import (
    FORMULA_VARIANT,
    abstract_iteration,
    abstract_lagrange,
    cache_key,
    compute_gk,
    eigenvalue_via_fixed_point,
    eigenvalue_via_lagrange,
    eigenvalue_via_q2_recursion_n2,
    gamma2_closed_form,
    gk_table,
    lagrange_compose,
    lagrange_terms,
)
from ecsolve.lattice import ModelParams

# non-integer lambda keeps every two-particle denominator 2 m (P + m) away from zero
lambdas = st.builds(lambda p, q: Q(p, q), st.integers(1, 15), st.sampled_from([2, 3, 5, 7]))
lambdas = lambdas.filter(lambda v: v.denominator != 1 and v < 4)
pairs_n = st.tuples(st.integers(0, 4), st.integers(0, 4)).map(lambda t: (max(t), min(t)))


def _as_fractions(series):
    return {k: Fraction(int(v.numerator), int(v.denominator)) for k, v in series.terms()}


@pytest.mark.parametrize("n,lam,L,S", [
    ((1, 0), "5/2", 3, 4),
    ((3, 1), "1/3", 2, 5),
    ((0, 0), "7/5", 3, 4),
    ((2, 1, 0), "3/7", 2, 4),
    ((1, 1, 0), "5/3", 2, 3),
])
def test_matches_brute_force_paths(n, lam, L, S):
    params = ModelParams(len(n), Q(lam))
    got = eigenvalue_via_lagrange(n, params, L, S).tilde_e
    assert _as_fractions(got) == brute_eigenvalue(n, Fraction(lam), L, S)


@settings(max_examples=200)
@given(pairs_n, lambdas)
def test_three_routes_agree_two_particles(n, lam):
    params = ModelParams(2, lam)
    a = eigenvalue_via_lagrange(n, params, 2, 6).tilde_e
    assert eigenvalue_via_fixed_point(n, params, 2, 6).tilde_e == a
    assert eigenvalue_via_fixed_point(n, params, 2, 6, variant="resolvent").tilde_e == a
    assert eigenvalue_via_q2_recursion_n2(n, params, 2, 6)[0].tilde_e == a


def test_symbolic_routes_agree():
    params = ModelParams.symbolic()
    a = eigenvalue_via_lagrange((1, 0), params, 3, 6)
    assert a.tilde_e.kind == P_RATIONAL
    assert eigenvalue_via_fixed_point((1, 0), params, 3, 6).tilde_e == a.tilde_e
    assert eigenvalue_via_q2_recursion_n2((1, 0), params, 3, 6)[0].tilde_e == a.tilde_e


@pytest.mark.parametrize("lam", ["1/3", "5/2", "7/3"])
def test_symbolic_series_specializes(lam):
    lam = Q(lam)
    n = (2, 0)
    sym = eigenvalue_via_lagrange(n, ModelParams.symbolic(), 3, 5).tilde_e
    num = eigenvalue_via_lagrange(n, ModelParams(2, lam), 3, 5).tilde_e
    assert sym.substitute_P(2 + lam) == num


@settings(max_examples=200)
@given(lambdas, st.integers(-3, 3))
def test_center_of_mass_shift_leaves_correction_unchanged(lam, c):
    n = (3, 1, 0)
    params = ModelParams(3, lam)
    try:
        base = eigenvalue_via_lagrange(n, params, 2, 3).tilde_e
    except ResonanceError:
        assume(False)
    shifted = eigenvalue_via_lagrange(tuple(x + c for x in n), params, 2, 3).tilde_e
    assert shifted == base


@pytest.mark.parametrize("n,params", [
    ((1, 0), ModelParams.symbolic()),
    ((2, 1, 0), ModelParams(3, Q(3, 7))),
])
def test_structural_vanishing(n, params):
    L, S = 3, 5
    series = eigenvalue_via_lagrange(n, params, L, S)
    assert not any(series.tilde_e.gamma_slice(1))
    assert not any(series.tilde_e.q2_slice(0))
    table = gk_table(n, params, L, S)
    for k in range(table.kmax + 1):
        assert table[k].min_q2_power() is None or table[k].min_q2_power() >= 1
    prev = lagrange_compose(table, 1).scale(0)
    for order in range(1, L + 1):
        cur = lagrange_compose(table, order)
        piece = cur - prev
        assert piece.min_q2_power() is None or piece.min_q2_power() >= order
        prev = cur


def test_gamma_squared_slice_closed_form():
    params = ModelParams.symbolic()
    series = eigenvalue_via_lagrange((1, 0), params, 5, 2)
    closed = gamma2_closed_form((1, 0), params, 5)
    for l in range(6):
        assert series.tilde_e.coeff(l, 2) == closed.coeff(l, 2)


def test_inversion_coefficients():
    assert abstract_lagrange(8) == abstract_iteration(8)
    # E~_2 = G_0 G_1 and E~_3 = -G_0^2 G_2 - G_0 G_1^2
    assert [(t.ks, t.coefficient) for t in lagrange_terms(2)] == [((1, 1), 1)]
    assert {t.ks: t.coefficient for t in lagrange_terms(3)} == {(2, 0, 1): -1, (1, 2, 0): -1}


def test_lagrange_terms_counting_rule():
    for n in range(1, 9):
        for t in lagrange_terms(n):
            assert sum(t.ks) == n
            assert sum(j * k for j, k in enumerate(t.ks)) == n - 1


def test_trivial_order_is_free_energy():
    params = ModelParams(2, Q(5, 2))
    s = eigenvalue_via_lagrange((1, 0), params, 0, 4)
    assert s.e0 == Q(53, 8) and not s.tilde_e


def test_resonance_is_reported_with_root():
    with pytest.raises(ResonanceError) as info:
        eigenvalue_via_lagrange((1, 0), ModelParams(2, Q(1)), 3, 4)
    assert tuple(info.value.root) == (-2, 2)


def test_cache_is_transparent(tmp_path):
    params = ModelParams(3, Q(3, 7))
    n = (2, 1, 0)
    cold = eigenvalue_via_lagrange(n, params, 2, 4, cache_dir=tmp_path)
    files = sorted(tmp_path.iterdir())
    assert len(files) == 1
    stored = files[0].read_bytes()
    warm = eigenvalue_via_lagrange(n, params, 2, 4, cache_dir=tmp_path)
    assert json.dumps(cold.to_json(), sort_keys=True) == json.dumps(warm.to_json(), sort_keys=True)
    assert files[0].read_bytes() == stored
    plain = eigenvalue_via_lagrange(n, params, 2, 4)
    assert plain.tilde_e == cold.tilde_e


@settings(max_examples=200)
@given(pairs_n, lambdas, st.integers(0, 2))
def test_warm_cache_is_byte_identical(n, lam, L):
    params = ModelParams(2, lam)
    with tempfile.TemporaryDirectory() as d:
        cold = eigenvalue_via_lagrange(n, params, L, 4, cache_dir=d)
        stored = {p.name: p.read_bytes() for p in Path(d).iterdir()}
        warm = eigenvalue_via_lagrange(n, params, L, 4, cache_dir=d)
        assert {p.name: p.read_bytes() for p in Path(d).iterdir()} == stored
    assert json.dumps(cold.to_json(), sort_keys=True) == json.dumps(warm.to_json(), sort_keys=True)
    assert cold.tilde_e == eigenvalue_via_lagrange(n, params, L, 4).tilde_e


def test_cache_key_carries_formula_variant():
    key = cache_key(ModelParams.symbolic(), (1, 0), 2, 4, 1)
    assert key["variant"] == FORMULA_VARIANT and key["lambda"] == "P"


def test_cache_env_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("ECS_CACHE_DIR", str(tmp_path))
    eigenvalue_via_lagrange((1, 0), ModelParams(2, Q(1, 3)), 2, 4)
    assert any(tmp_path.iterdir())


@settings(max_examples=200)
@given(pairs_n, lambdas)
def test_serialization_is_deterministic(n, lam):
    params = ModelParams(2, lam)
    a = eigenvalue_via_lagrange(n, params, 1, 3)
    b = eigenvalue_via_lagrange(n, params, 1, 3)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_usage_errors():
    with pytest.raises(UsageError):
        compute_gk(-1, (1, 0), ModelParams.symbolic(), 2, 2)
    with pytest.raises(UsageError):
        eigenvalue_via_q2_recursion_n2((1, 1, 0), ModelParams(3, Q(1, 2)), 2, 2)
    with pytest.raises(UsageError):
        eigenvalue_via_fixed_point((1, 0), ModelParams(2, Q(1, 2)), 1, 2, variant="newton")
