from __future__ import annotations

import itertools
import math
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from srsat.bounds import (NA, SATISFIED, VIOLATED, bound_report, f_of_q, fq_factor,
                          gaussian_binomial, homogeneous_sandwich, lex_lemma_disagreements,
                          lex_sum_squares_compare, length_lower_bound, partitions,
                          quadratic_lower_bound, sphere_feasibility, sphere_sum)
from srsat.errors import BadArgs, BadProfiles


def count_subspaces_brute(a, b, q):
    """Distinct spans of b-tuples of vectors in F_q^a (prime q)."""
    vecs = list(itertools.product(range(q), repeat=a))
    seen = set()
    for combo in itertools.combinations(vecs[1:], b):
        span = {tuple([0] * a)}
        for v in combo:
            span = {tuple((x + c * y) % q for x, y in zip(s, v)) for s in span for c in range(q)}
        if len(span) == q ** b:
            seen.add(frozenset(span))
    return len(seen) if b else 1


def test_gaussian_examples():
    assert gaussian_binomial(3, 1, 2) == 7
    assert all(gaussian_binomial(a, 0, q) == 1 for a in range(6) for q in (2, 3, 4))
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(2, 3, 2) == 0
    with pytest.raises(BadArgs):
        gaussian_binomial(-1, 0, 2)


@pytest.mark.parametrize("a,b,q", [(3, 1, 2), (4, 2, 2), (3, 2, 3), (4, 1, 3), (5, 2, 2)])
def test_gaussian_against_enumeration(a, b, q):
    assert gaussian_binomial(a, b, q) == count_subspaces_brute(a, b, q)


@given(st.integers(1, 12), st.integers(0, 12), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_gaussian_symmetry_and_pascal(a, b, q):
    b = min(a, b)
    assert gaussian_binomial(a, b, q) == gaussian_binomial(a, a - b, q)
    if 1 <= b < a:
        assert gaussian_binomial(a, b, q) == (gaussian_binomial(a - 1, b - 1, q)
                                              + q ** b * gaussian_binomial(a - 1, b, q))


def sphere_sum_brute(q, n, rho):
    tot = 0
    for s in itertools.product(*[range(x + 1) for x in n]):
        if sum(s) == rho:
            tot += math.prod(gaussian_binomial(x, y, q) for x, y in zip(n, s))
    return tot


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(0, 12),
       st.sampled_from([2, 3, 4]))
def test_sphere_sum_matches_multi_index_sum(n, rho, q):
    assert sphere_sum(q, n, rho) == sphere_sum_brute(q, n, rho)


@given(st.integers(1, 10), st.integers(0, 10), st.sampled_from([2, 3, 5]))
def test_sphere_sum_single_block(n, rho, q):
    want = gaussian_binomial(n, rho, q) if rho <= n else 0
    assert sphere_sum(q, [n], rho) == want


def test_sphere_examples():
    e = sphere_feasibility(2, 2, 2, 1, (1, 1))
    assert (e.lhs, e.rhs, e.verdict) == (8, 16, VIOLATED)
    e = sphere_feasibility(2, 2, 2, 1, (3,))
    assert (e.lhs, e.rhs, e.verdict) == (28, 16, SATISFIED)
    assert sphere_feasibility(3, 2, 1, 0, (2, 2)).verdict == VIOLATED


def test_quadratic_examples():
    e = quadratic_lower_bound(2, 2, 2, 1, 1, (3,))
    assert e[0].lhs == 4 and e[0].rhs == 2 and e[0].verdict == SATISFIED
    e = quadratic_lower_bound(2, 6, 2, 1, 1, (3,))
    assert e[0].lhs == 4 and e[0].rhs == 6 and e[0].verdict == VIOLATED
    e = quadratic_lower_bound(3, 6, 2, 1, 1, (3,))
    assert e[0].lhs == 3            # +t for q > 2


def test_quadratic_term_vanishes_for_equal_blocks():
    for t in range(1, 5):
        e = quadratic_lower_bound(2, 3, 4, 2, t, (3,) * t)
        assert e[0].lhs == Fraction(2 * (3 * t - 2), t) + 2 * t
        assert e[1].name == "quadratic-homogeneous"


def test_quadratic_term_value():
    e = quadratic_lower_bound(2, 2, 3, 1, 3, (4, 2, 1))
    sq = (2 - 4) ** 2 + (1 - 4) ** 2 + (1 - 2) ** 2
    assert e[0].lhs == Fraction(sq, 12) + Fraction(1 * 6, 3) + 6
    assert len(e) == 1


def test_homogeneous_specialisation():
    e = quadratic_lower_bound(2, 2, 3, 2, 2, (2, 2))
    h = e[1]
    assert h.lhs == 4 and h.rhs == Fraction(2 * 2 * 1, 2) + 2 - Fraction(8, 2)
    e = quadratic_lower_bound(3, 2, 3, 1, 2, (2, 2))
    assert e[1].rhs == Fraction(2 * 2 * 2, 1) + 1 - 4
    assert quadratic_lower_bound(2, 2, 3, 0, 2, (2, 2))[1].verdict == NA


def test_f_of_q_values():
    assert abs(float(f_of_q(2)) - 3.46275) < 1e-4
    naive = math.prod(1 / (1 - 2.0 ** -i) for i in range(1, 200))
    assert abs(float(f_of_q(2)) - naive) < 1e-12
    vals = [f_of_q(q) for q in (2, 3, 4, 5, 7, 8, 9, 16, 211)]
    assert all(v > 1 for v in vals)
    assert vals == sorted(vals, reverse=True)
    assert f_of_q(10 ** 6) - 1 < Decimal("1.1e-6")


def test_fq_factor_211():
    assert abs(fq_factor(211, 20) - Decimal("1.105407")) < Decimal("5e-7")


def test_f_of_q_tolerance():
    loose = f_of_q(2, tol=1e-3)
    assert abs(loose - f_of_q(2)) < Decimal("1e-3")
    with pytest.raises(BadArgs):
        f_of_q(2, tol=0)
    with pytest.raises(BadArgs):
        f_of_q(1)


def test_lex_examples():
    v = lex_sum_squares_compare((2, 2), (3, 1))
    assert (v.squares, v.lex, v.agree) == (-1, -1, True)
    v = lex_sum_squares_compare((3, 2, 1), (3, 2, 1))
    assert (v.squares, v.lex) == (0, 0)
    with pytest.raises(BadProfiles):
        lex_sum_squares_compare((1, 2), (2, 1))
    with pytest.raises(BadProfiles):
        lex_sum_squares_compare((2, 1), (2, 2))


def test_lex_disagreements_are_ties_only():
    for a, b, v in lex_lemma_disagreements(4, 10):
        assert v.squares == 0 and v.lex != 0


def test_partitions_enumeration():
    got = list(partitions(6, 3))
    want = sorted({tuple(sorted(p, reverse=True)) for p in itertools.product(range(1, 7), repeat=3)
                   if sum(p) == 6}, reverse=True)
    assert got == want
    assert all(max(p) <= 2 for p in partitions(6, 3, cap=2))


def test_sandwich_examples():
    assert homogeneous_sandwich(2, 1, 1, 2) == (3, 3)
    assert homogeneous_sandwich(3, 2, 1, 2) == (3, 4)
    for t in range(1, 5):
        lo, hi = homogeneous_sandwich(5, 2, t, 3)
        assert (lo, hi) == (t * homogeneous_sandwich(5, 2, 1, 3)[0], t * homogeneous_sandwich(5, 2, 1, 3)[1])
    for h in range(1, 6):
        lo, hi = homogeneous_sandwich(h, 1, 2, 3)
        assert lo == hi
    with pytest.raises(BadArgs):
        homogeneous_sandwich(1, 2, 1, 2)


def test_bound_report_text():
    rep = bound_report(2, 2, 2, 1, 2, (1, 1))
    assert rep.violated
    txt = rep.text()
    assert "sphere" in txt and "quadratic" in txt and "absorbed" in txt
    assert not bound_report(2, 2, 2, 1, 1, (3,)).violated


def test_length_lower_bound_small():
    assert length_lower_bound(2, 2, 2, 1, 1) == 3
    assert length_lower_bound(2, 2, 2, 2, 2) == 2
    assert length_lower_bound(2, 2, 2, 1, 2) >= 3
