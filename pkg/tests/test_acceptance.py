"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; each test prints its line
directly to the terminal.
"""

import random
import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from ecsolve.algebra import PRatFunc, Q, ResonanceError
from ecsolve.cli import verify_rows
from ecsolve.eigenfunction import alpha_table, corollary_residual, default_window, trig_alpha_table
from ecsolve.eigenvalue import (
    abstract_iteration,
    abstract_lagrange,
    eigenvalue_via_fixed_point,
    eigenvalue_via_lagrange,
    eigenvalue_via_q2_recursion_n2,
    gk_table,
    lagrange_compose,
    lagrange_terms,
)
from ecsolve.fhat import assemble_phi
from ecsolve.golden import CORRECTED, GOLDEN
from ecsolve.lattice import ModelParams
from ecsolve.oracle.sutherland import sutherland_eigenvector

TESTS = Path(__file__).resolve().parent


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else ""))
    return emit


def _symbolic_series():
    return eigenvalue_via_lagrange((1, 0), ModelParams.symbolic(), 4, 8).tilde_e


def _golden_mismatches():
    series = _symbolic_series()
    bad = {}
    for l in range(1, 5):
        for s in range(9):
            got = series.coeff(l, s)
            if got != GOLDEN[l].get(s, 0):
                bad[(l, s)] = got
    return series, bad


# -- 1 ----------------------------------------------------------------------------

@pytest.mark.xfail(strict=True, reason="printed gamma^4 coefficient of E_4 has a denominator typo")
def test_criterion_1_golden_symbolic_eigenvalues(report):
    series, bad = _golden_mismatches()
    P = PRatFunc.P()
    one = PRatFunc.constant(1)
    # worked examples given with the criterion
    d1, d4 = P * P - 1, P * P - 4
    examples = series.coeff(1, 2) == one / d1 and \
        series.coeff(2, 4) == (P * P * 5 + 7) / (d1 * d1 * d4 * d1 * 4)
    ok = examples and not bad
    detail = "" if ok else f"mismatch at (q^2l, gamma^s) = {sorted(bad)}"
    report(1, ok, detail)
    assert ok


def test_criterion_1_mismatch_is_exactly_the_known_typo():
    # every other coefficient agrees; the one that does not equals the
    # printed numerator over (P^2-4)^3 in place of (P^2-2)^2
    _, bad = _golden_mismatches()
    assert set(bad) == {(4, 4)}
    assert bad[(4, 4)] == CORRECTED[(4, 4)]


# -- 2 ----------------------------------------------------------------------------

def test_criterion_2_divisor_sum(report):
    series = eigenvalue_via_lagrange((1, 0), ModelParams.symbolic(), 7, 2).tilde_e
    P = PRatFunc.P()
    bad = []
    for l in range(1, 8):
        want = PRatFunc.constant(0)
        for k in range(1, l + 1):
            if l % k == 0:
                want = want + (1 / (P - k) - 1 / (P + k))
        if series.coeff(l, 2) != want * Q(l, 2):
            bad.append(l)
    report(2, not bad, "l = 1..7" if not bad else f"fails at l = {bad}")
    assert not bad


# -- 3 ----------------------------------------------------------------------------

def _random_two_particle_configs(count, seed=20240601):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        den = rng.randint(1, 9)
        lam = Q(rng.randint(1, 4 * den - 1), den)
        n2 = rng.randint(0, 3)
        n = (n2 + rng.randint(0, 4), n2)
        try:
            eigenvalue_via_lagrange(n, ModelParams(2, lam), 3, 8)
        except ResonanceError:
            continue
        out.append((n, lam))
    return out


TWO = _random_two_particle_configs(12)
THREE = [((2, 1, 0), Q(3, 7)), ((3, 1, 0), Q(5, 3)), ((2, 2, 0), Q(4, 9)), ((1, 0, 0), Q(7, 5))]


def test_criterion_3_cross_algorithm_equivalence(report):
    bad = []
    for n, lam in TWO:
        params = ModelParams(2, lam)
        a = eigenvalue_via_lagrange(n, params, 3, 8).tilde_e
        routes = [
            eigenvalue_via_fixed_point(n, params, 3, 8).tilde_e,
            eigenvalue_via_fixed_point(n, params, 3, 8, variant="resolvent").tilde_e,
            eigenvalue_via_q2_recursion_n2(n, params, 3, 8)[0].tilde_e,
        ]
        if any(r != a for r in routes):
            bad.append((n, str(lam)))
    for n, lam in THREE:
        params = ModelParams(3, lam)
        if eigenvalue_via_lagrange(n, params, 3, 6).tilde_e != eigenvalue_via_fixed_point(n, params, 3, 6).tilde_e:
            bad.append((n, str(lam)))
    report(3, not bad, f"{len(TWO)} two-particle and {len(THREE)} three-particle configs"
           if not bad else f"disagree: {bad}")
    assert not bad


# -- 4 ----------------------------------------------------------------------------

# printed corrections: (sign * coefficient, exponents of G_0, G_1, ...), in printed order
PRINTED = {
    1: [(-1, (1,))],
    2: [(1, (1, 1))],
    3: [(-1, (2, 0, 1)), (-1, (1, 2))],
    4: [(3, (2, 1, 1)), (1, (1, 3)), (1, (3, 0, 0, 1))],
    5: [(-4, (3, 1, 0, 1)), (-6, (2, 2, 1)), (-2, (3, 0, 2)), (-1, (3, 0, 0, 0, 1)), (-1, (1, 4))],
}
# [G_0]^3 G_4 has total degree 4 but every term of the fifth correction has degree 5
PRINTED_MONOMIAL_TYPOS = {(5, (3, 0, 0, 0, 1)): (4, 0, 0, 0, 1)}


def _pad(e, width):
    return tuple(e) + (0,) * (width - len(e))


def test_criterion_4_lagrange_coefficients(report):
    inversion_ok = abstract_lagrange(8) == abstract_iteration(8)
    computed = abstract_lagrange(5)
    coeff_bad, monomial_notes = [], []
    for order, printed in PRINTED.items():
        got = computed[order]
        signs = sorted(c for c, _ in printed)
        if signs != sorted(got.values()) or len(got) != len(printed):
            coeff_bad.append(order)
            continue
        for c, e in printed:
            key = _pad(PRINTED_MONOMIAL_TYPOS.get((order, e), e), 5)
            if got.get(key) != c:
                coeff_bad.append(order)
            elif (order, e) in PRINTED_MONOMIAL_TYPOS:
                monomial_notes.append(f"printed G0^{e[0]} G4 in order {order} read as G0^{key[0]} G4")
    ok = inversion_ok and not coeff_bad
    detail = "n <= 8 inversion = iteration; n <= 5 coefficients and signs as printed"
    if monomial_notes:
        detail += "; " + "; ".join(monomial_notes)
    report(4, ok, detail if ok else f"orders {coeff_bad} differ")
    assert ok


def test_criterion_4_counting_rule_forces_the_reading():
    # with sum k_j = 5 and sum j k_j = 4 the only G_4 term is G_0^4 G_4
    g4 = [t.ks for t in lagrange_terms(5) if len(t.ks) > 4 and t.ks[4]]
    assert g4 == [(4, 0, 0, 0, 1)]


# -- 5 ----------------------------------------------------------------------------

def _vanishing_failures(n, params, L, S):
    series = eigenvalue_via_lagrange(n, params, L, S).tilde_e
    fails = []
    if any(series.gamma_slice(1)):
        fails.append("gamma^1 slice")
    if any(series.q2_slice(0)):
        fails.append("q^0 slice")
    table = gk_table(n, params, L, S)
    prev = None
    for order in range(1, L + 1):
        cur = lagrange_compose(table, order)
        piece = cur if prev is None else cur - prev
        low = piece.min_q2_power()
        if low is not None and low < order:
            fails.append(f"order {order} starts at q^{2 * low}")
        prev = cur
    return fails


def test_criterion_5_structural_vanishing(report):
    configs = [((1, 0), ModelParams.symbolic(), 4, 8), ((2, 0), ModelParams.symbolic(), 3, 6)]
    configs += [(n, ModelParams(2, lam), 3, 8) for n, lam in TWO]
    configs += [(n, ModelParams(3, lam), 3, 6) for n, lam in THREE]
    bad = {}
    for n, params, L, S in configs:
        f = _vanishing_failures(n, params, L, S)
        if f:
            bad[(n, params.kind)] = f
    report(5, not bad, f"{len(configs)} configs" if not bad else str(bad))
    assert not bad


# -- 6 ----------------------------------------------------------------------------

def test_criterion_6_corollary_residual(report):
    cases = [
        ((1, 0), ModelParams.symbolic(), 3, 6, 4),
        ((2, 0), ModelParams.symbolic(), 2, 4, 3),
        ((2, 1, 0), ModelParams(3, Q(3, 7)), 2, 5, 3),
        ((3, 1, 0), ModelParams(3, Q(5, 3)), 2, 4, 3),
    ]
    bad, interior = [], 0
    for n, params, L, S, W in cases:
        r = corollary_residual(alpha_table(n, params, L, S, W=W))
        interior += r.interior
        if not (r.ok and r.max_interior == "0" and r.interior > 0):
            bad.append(n)
    report(6, not bad, f"residual 0 on {interior} interior points" if not bad else f"nonzero for {bad}")
    assert not bad


# -- 7 ----------------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_7_numeric_oracle(report):
    lam, n, Lq, Sg = Q(5, 2), (1, 0), 4, 12
    qs = [0.0, 0.02, 0.04, 0.08]
    rows = verify_rows(n, lam, Lq, Sg, qs, M=61, digits=40)
    errs = {q: err for q, _, _, _, _, err, _ in rows}
    e_q0 = rows[0][3]
    rel0 = errs[0.0] / abs(e_q0)
    series = eigenvalue_via_lagrange(n, ModelParams(2, lam), Lq, Sg).tilde_e
    gamma = float(ModelParams(2, lam).gamma)
    lead = abs(sum(float(v) * gamma**s for (l, s), v in series.terms() if l == 1)) * 0.08**2
    x = np.log(qs[1:])
    y = np.log([errs[q] for q in qs[1:]])
    slope = float(np.polyfit(x, y, 1)[0])
    ok = rel0 <= 1e-8 and slope >= 2 * Lq and all(errs[q] < lead for q in qs[1:])
    report(7, ok, f"q=0 rel err {rel0:.1e}, slope {slope:.2f} (need >= {2 * Lq}), "
                  f"max err {max(errs.values()):.1e} < leading term {lead:.1e}")
    assert ok


# -- 8 ----------------------------------------------------------------------------

def _jack_coefficients(n, lam):
    params = ModelParams(2, lam)
    W = default_window(n, 0)
    phi = assemble_phi(n, trig_alpha_table(n, params, W, W), params, 0)
    coeffs = {e: c for e, c in phi.specialize(params.gamma).items() if list(e) == sorted(e, reverse=True)}
    lead = coeffs[n]
    return {e: c / lead for e, c in coeffs.items()}


def test_criterion_8_jack_limit(report):
    worst, bad = 0.0, []
    for n in [(1, 0), (2, 0), (2, 1)]:
        for lam in [Q(1, 2), Q(1), Q(2)]:
            exact = _jack_coefficients(n, lam)
            basis, _, vec, fit = sutherland_eigenvector(n, float(lam))
            ours = np.array([float(exact.get(k, 0)) for k in basis])
            rel = float(np.max(np.abs(ours - vec)) / np.max(np.abs(vec)))
            worst = max(worst, rel)
            if rel > 1e-8 or fit > 1e-10:
                bad.append((n, str(lam)))
    schur = _jack_coefficients((2, 0), Q(1)) == {(2, 0): 1, (1, 1): 1}
    ok = not bad and schur
    report(8, ok, f"max relative deviation {worst:.1e}; lambda=1 (2,0) is m(2)+m(11)"
           if ok else f"deviating {bad}, schur {schur}")
    assert ok


# -- 9 ----------------------------------------------------------------------------

PROPERTY_MODULES = ["test_algebra.py", "test_lattice.py", "test_eigenvalue.py", "test_eigenfunction.py",
                    "test_fhat.py", "test_kernels.py"]
REQUIRED_LAWS = [
    "test_ppoly_ring_laws", "test_pratfunc_field_laws", "test_biseries_ring_laws",
    "test_coupling_difference_is_constant", "test_negative_coupling_is_shifted_positive",
    "test_coupling_times_denominator", "test_b_is_an_energy_difference",
    "test_block_is_symmetric_and_homogeneous", "test_eigenfunction_is_symmetric_and_homogeneous",
    "test_warm_cache_is_byte_identical", "test_serialization_is_deterministic",
    "test_table_dump_is_deterministic",
]


@pytest.mark.slow
def test_criterion_9_property_suites(report):
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "--hypothesis-show-statistics",
         *[str(TESTS / m) for m in PROPERTY_MODULES]],
        capture_output=True, text=True, cwd=TESTS.parent, check=False)
    counts = {}
    current = None
    for line in proc.stdout.splitlines():
        m = re.match(r"^\S+::(\w+)(\[.*\])?:$", line)
        if m:
            current = m.group(1)
            continue
        m = re.search(r"- (\d+) passing examples", line)
        if m and current:
            counts[current] = counts.get(current, 0) + int(m.group(1))
            current = None
    short = {k: v for k, v in counts.items() if v < 200}
    missing = [law for law in REQUIRED_LAWS if law not in counts]
    ok = proc.returncode == 0 and not short and not missing
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(9, ok, f"{len(counts)} laws, min {min(counts.values(), default=0)} cases; {summary}"
           if ok else f"rc {proc.returncode}, short {short}, missing {missing}; {summary}")
    assert ok
