from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srsat.errors import BadArgs, DivisionByZero, NotPrime, TooLarge
from srsat.field import (GF, arith, context_for, field_create, fq_coords, is_irreducible,
                         lex_least_irreducible, prime_power)
from conftest import oracle_for
from oracles import is_irreducible_brute

SMALL = [(2, 1, 1), (3, 1, 1), (2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2),
         (5, 1, 2), (2, 3, 2), (3, 2, 1), (2, 2, 3)]


def test_f4_polynomial_and_products():
    ctx = field_create(2, 1, 2)
    assert ctx.fqm_poly == (1, 1, 1)
    a = ctx.alpha
    assert arith(ctx, "mul", a, a) == ctx.element([1, 1])
    assert arith(ctx, "inv", a) == ctx.element([1, 1])
    assert arith(ctx, "frobenius_q", a) == ctx.element([1, 1])


def test_f4_inverse_exhaustive():
    ctx = field_create(2, 1, 2)
    a = ctx.alpha
    sols = [y for y in range(4) if arith(ctx, "mul", a, y) == 1]
    assert sols == [arith(ctx, "inv", a)]


def test_f3_trivial_tower():
    ctx = field_create(3, 1, 1)
    assert ctx.Q == 3 and ctx.m == 1
    assert [arith(ctx, "mul", 2, x) for x in range(3)] == [0, 2, 1]


def test_f16_is_lex_least_quartic():
    ctx = field_create(2, 1, 4)
    quartics = [tuple(c) + (1,) for c in itertools.product(range(2), repeat=4)]
    irreducible = [f for f in quartics if is_irreducible_brute(2, f)]
    # lexicographic on the integer value sum c_i 2^i
    expected = min(irreducible, key=lambda f: sum(c << i for i, c in enumerate(f)))
    assert ctx.fqm_poly == expected == (1, 1, 0, 0, 1)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_factor_search(p, d):
    F = GF.prime(p)
    for c in itertools.product(range(p), repeat=d):
        f = tuple(c) + (1,)
        assert is_irreducible(F, f) == is_irreducible_brute(p, f), f
    assert is_irreducible_brute(p, lex_least_irreducible(F, d))


@pytest.mark.parametrize("p,e,m", SMALL)
def test_generator_is_primitive(p, e, m):
    ctx = field_create(p, e, m)
    F = ctx.fqm
    order = F.order - 1
    g = ctx.generator
    powers = {F.pow1(g, i) for i in range(order)}
    assert len(powers) == order
    # smallest primitive code
    for h in range(1, g):
        assert len({F.pow1(h, i) for i in range(order)}) < order


@pytest.mark.parametrize("p,e,m", SMALL)
def test_arithmetic_matches_schoolbook_oracle(p, e, m):
    ctx = field_create(p, e, m)
    O = oracle_for(ctx)
    F = ctx.fqm
    Q = ctx.Q
    elems = range(Q)
    for a, b in itertools.product(elems, repeat=2):
        assert F.mul1(a, b) == O.mul(a, b)
        assert F.add1(a, b) == O.add(a, b)
    for a in range(1, Q):
        assert F.pow1(a, Q - 1) == 1


@pytest.mark.parametrize("p,e,m", [(2, 1, 6), (2, 3, 2), (3, 1, 3), (2, 2, 3)])
def test_field_axioms_exhaustive(p, e, m):
    ctx = field_create(p, e, m)
    F = ctx.fqm
    a = np.arange(F.order)
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    assert np.array_equal(F.mul(A, F.add(B, C)), F.add(F.mul(A, B), F.mul(A, C)))
    assert np.array_equal(F.mul(F.mul(A, B), C), F.mul(A, F.mul(B, C)))


def test_field_axioms_random_large():
    ctx = field_create(2, 1, 10)
    F = ctx.fqm
    rng = np.random.default_rng(7)
    A, B, C = rng.integers(0, F.order, size=(3, 1000))
    assert np.array_equal(F.mul(A, F.add(B, C)), F.add(F.mul(A, B), F.mul(A, C)))
    assert np.array_equal(F.mul(F.mul(A, B), C), F.mul(A, F.mul(B, C)))
    O = oracle_for(ctx)
    for x, y in zip(A[:200], B[:200]):
        assert F.mul1(int(x), int(y)) == O.mul(int(x), int(y))


def test_fq_coords_examples(f4):
    assert fq_coords(f4, 0) == (0, 0)
    assert fq_coords(f4, f4.alpha) == (0, 1)
    assert fq_coords(f4, f4.element([1, 1])) == (1, 1)


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_fq_coords_linear(data):
    ctx = field_create(3, 1, 2)
    F, Fq = ctx.fqm, ctx.fq
    x, y = data.draw(st.integers(0, 8)), data.draw(st.integers(0, 8))
    a, b = data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2))
    lhs = fq_coords(ctx, F.add1(F.mul1(a, x), F.mul1(b, y)))
    rhs = tuple(Fq.add1(Fq.mul1(a, u), Fq.mul1(b, v))
                for u, v in zip(fq_coords(ctx, x), fq_coords(ctx, y)))
    assert lhs == rhs


@pytest.mark.parametrize("p,e,m", SMALL)
def test_encoding_bijection(p, e, m):
    ctx = field_create(p, e, m)
    seen = {fq_coords(ctx, x) for x in range(ctx.Q)}
    assert len(seen) == ctx.Q
    assert all(ctx.element(list(fq_coords(ctx, x))) == x for x in range(ctx.Q))


def test_errors():
    with pytest.raises(NotPrime):
        field_create(4, 1, 1)
    with pytest.raises(TooLarge) as exc:
        field_create(2, 1, 30)
    assert exc.value.knob == "SRC_FIELD_GUARD_LOG2"
    ctx = field_create(2, 1, 2)
    with pytest.raises(DivisionByZero):
        arith(ctx, "inv", 0)
    with pytest.raises(BadArgs):
        arith(ctx, "mul", 7, 1)
    with pytest.raises(BadArgs):
        field_create(2, 1, 2, fqm_poly=(1, 0, 1))


def test_field_guard_env(monkeypatch):
    monkeypatch.setenv("SRC_FIELD_GUARD_LOG2", "3")
    with pytest.raises(TooLarge):
        field_create(2, 1, 4)
    field_create(2, 1, 4, guard_log2=8)


def test_tower_f16_over_f4():
    ctx = field_create(2, 2, 2)
    assert ctx.fq_poly == (1, 1, 1)
    assert ctx.q == 4 and ctx.Q == 16
    assert prime_power(16) == (2, 4)
    assert context_for(4, 2) == ctx


def test_frobenius_fixes_base_field():
    ctx = field_create(3, 1, 3)
    for x in range(ctx.Q):
        fx = arith(ctx, "frobenius_q", x)
        assert (fx == x) == (x < ctx.q)
