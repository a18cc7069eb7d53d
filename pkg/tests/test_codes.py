from __future__ import annotations

import numpy as np
import pytest

from srsat.codes import (SumRankCode, covering_radius, dual_code, is_minimal_code, min_distance,
                         rank_support, rank_weight, sumrank_distance, sumrank_weight,
                         sumrank_weights, weight_via_system)
from srsat.errors import BadArgs, Degenerate, LengthMismatch, TooLarge, ZeroMessage
from srsat.field import context_for
from srsat.linalg import Space, matmul, rank
from conftest import oracle_for, random_code
from oracles import covering_radius_brute, min_distance_brute, rank_weight as rw_oracle
from oracles import sumrank_weight as srw_oracle

A = 2  # alpha in F_4 under x^2 + x + 1
A1 = 3  # alpha + 1


def test_rank_weight_examples(f4):
    assert rank_weight(f4, [0, 0, 0]) == 0
    assert rank_weight(f4, [1, A]) == 2
    assert rank_weight(f4, [1, A, A1]) == 2


def test_sumrank_weight_examples(f4):
    assert sumrank_weight(f4, (2, 1), [0, 0, 0]) == 0
    assert sumrank_weight(f4, (2, 1), [1, A, 1]) == 3
    assert sumrank_weight(f4, (2, 1), [1, 1, A]) == 2
    with pytest.raises(LengthMismatch):
        sumrank_weight(f4, (2, 1), [1, 1])


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (3, 2), (4, 2)])
def test_bulk_weights_match_oracle(q, m):
    ctx = context_for(q, m)
    O = oracle_for(ctx)
    rng = np.random.default_rng(q * 10 + m)
    prof = (3, 2, 1)
    X = rng.integers(0, ctx.Q, size=(300, 6))
    got = sumrank_weights(ctx, prof, X)
    want = [srw_oracle(O, prof, list(map(int, x))) for x in X]
    assert got.tolist() == want
    for x in X[:50]:
        assert rank_weight(ctx, x[:3]) == rw_oracle(O, list(map(int, x[:3])))


def test_triangle_inequality_random(f4):
    rng = np.random.default_rng(1)
    prof = (2, 2, 1)
    for _ in range(1000):
        x, y, z = rng.integers(0, 4, size=(3, 5))
        assert (sumrank_distance(f4, prof, x, z)
                <= sumrank_distance(f4, prof, x, y) + sumrank_distance(f4, prof, y, z))


def test_min_distance_examples(f4, f4_oracle):
    full = SumRankCode(f4, (1, 1), np.eye(2, dtype=np.int64))
    assert min_distance(full) == 1
    C = SumRankCode(f4, (2,), [[1, A]])
    assert min_distance(C) == 2
    G = [[1, 0, 0, 1], [0, 1, A, 0]]
    C = SumRankCode(f4, (2, 2), G)
    assert min_distance(C) == min_distance_brute(f4_oracle, (2, 2), G)


@pytest.mark.parametrize("seed", range(12))
def test_min_distance_random_against_brute(seed):
    ctx = context_for(2, 2) if seed % 2 else context_for(3, 2)
    rng = np.random.default_rng(seed)
    prof = [(2, 1), (2, 2), (1, 1, 1), (3, 1)][seed % 4]
    k = 1 + seed % 2
    C = random_code(ctx, prof, k, rng)
    assert min_distance(C) == min_distance_brute(oracle_for(ctx), prof, C.G.tolist())


def test_dual_code_examples(f4):
    full = SumRankCode(f4, (1, 1), np.eye(2, dtype=np.int64))
    assert dual_code(full).k == 0
    C = SumRankCode(f4, (2,), [[1, A]])
    D = dual_code(C)
    assert D.k == 1
    assert not np.any(matmul(f4.fqm, C.G, D.G.T))
    zero = SumRankCode(f4, (1, 1), np.zeros((0, 2), dtype=np.int64))
    assert dual_code(zero).k == 2


@pytest.mark.parametrize("seed", range(8))
def test_double_dual_same_row_space(seed):
    ctx = context_for(3, 2)
    rng = np.random.default_rng(seed)
    C = random_code(ctx, (2, 2, 1), 2, rng)
    DD = dual_code(dual_code(C))
    assert DD.k == C.k
    assert rank(ctx.fqm, np.concatenate([C.G, DD.G])) == C.k


def test_covering_radius_trivial_cases(f4):
    full = SumRankCode(f4, (2, 1), np.eye(3, dtype=np.int64))
    assert covering_radius(full) == 0
    for prof in [(2, 1), (3,), (1, 1, 1)]:
        zero = SumRankCode(f4, prof, np.zeros((0, sum(prof)), dtype=np.int64))
        assert covering_radius(zero) == sum(min(n, f4.m) for n in prof)


def test_covering_radius_of_a21_dual(f4):
    C = SumRankCode(f4, (3,), [[1, 0, 0], [0, 1, A]])
    assert covering_radius(dual_code(C)) == 1


@pytest.mark.parametrize("seed", range(10))
def test_covering_radius_against_definition(seed):
    ctx = context_for(2, 2)
    rng = np.random.default_rng(100 + seed)
    prof = [(2, 1), (1, 1, 1), (2, 2), (3,)][seed % 4]
    k = 1 + seed % 2
    C = random_code(ctx, prof, k, rng)
    assert covering_radius(C) == covering_radius_brute(oracle_for(ctx), prof, C.G.tolist())


def test_covering_radius_odd_characteristic():
    ctx = context_for(3, 2)
    rng = np.random.default_rng(5)
    C = random_code(ctx, (2, 1), 1, rng)
    assert covering_radius(C) == covering_radius_brute(oracle_for(ctx), (2, 1), C.G.tolist())


@pytest.mark.parametrize("seed", range(6))
def test_subcode_has_larger_covering_radius(seed):
    ctx = context_for(2, 2)
    rng = np.random.default_rng(seed)
    C = random_code(ctx, (2, 2, 1), 3, rng)
    sub = SumRankCode(ctx, C.profile, C.G[:2])
    assert covering_radius(C) <= covering_radius(sub)


def test_weight_via_system_example(f4):
    C = SumRankCode(f4, (2, 1), [[1, 0, 0], [0, 1, 1]])
    assert weight_via_system(C, [1, 0]) == 1 == sumrank_weight(f4, (2, 1), [1, 0, 0])
    with pytest.raises(ZeroMessage):
        weight_via_system(C, [0, 0])
    deg = SumRankCode(f4, (2,), [[1, 1]])
    with pytest.raises(Degenerate):
        weight_via_system(deg, [1])


def test_weight_via_system_random(f4):
    rng = np.random.default_rng(11)
    Sk = Space(f4.fqm, 2)
    for _ in range(100):
        C = random_code(f4, (2, 2, 1), 2, rng, nondegenerate=True)
        x = Sk.coords(int(rng.integers(1, 16)))
        assert weight_via_system(C, x) == sumrank_weight(f4, C.profile, C.codewords([Sk.index(x)])[0])


def test_full_weight_message_gives_n(f4):
    C = SumRankCode(f4, (2,), [[1, A]])
    assert weight_via_system(C, [1]) == 2


def test_rank_support_examples(f4):
    zero = rank_support(f4, (2, 1), [0, 0, 0])
    assert zero == ((), ())
    s = rank_support(f4, (2, 1), [1, A, 1])
    assert len(s[0]) == 2 and s[1] == (1,)
    c = np.array([1, A1, A])
    for lam in (2, 3):
        assert rank_support(f4, (2, 1), f4.fqm.mul(lam, c)) == rank_support(f4, (2, 1), c)


def test_rank_support_dimension_is_rank(f4):
    rng = np.random.default_rng(3)
    for _ in range(100):
        x = rng.integers(0, 4, size=5)
        sup = rank_support(f4, (3, 2), x)
        assert len(sup[0]) == rank_weight(f4, x[:3])
        assert len(sup[1]) == rank_weight(f4, x[3:])


def test_minimality_examples(f4):
    C = SumRankCode(f4, (2, 1), [[1, A, 1]])
    assert is_minimal_code(C) == (True, None)
    full = SumRankCode(f4, (1, 1), np.eye(2, dtype=np.int64))
    ok, (c, c2) = is_minimal_code(full)
    assert not ok
    sc = rank_support(f4, (1, 1), c)
    sc2 = rank_support(f4, (1, 1), c2)
    assert all(set(Space(f4.fq, 1).span(b)) <= set(Space(f4.fq, 1).span(a)) for a, b in zip(sc, sc2))


def test_guards(f4, monkeypatch):
    C = SumRankCode(f4, (3, 3), np.zeros((1, 6), dtype=np.int64) + 1)
    with pytest.raises(TooLarge):
        covering_radius(C, guard_log2=8)
    monkeypatch.setenv("SRC_GUARD_LOG2", "1")
    with pytest.raises(TooLarge):
        min_distance(C)


def test_generator_validation(f4):
    with pytest.raises(BadArgs):
        SumRankCode(f4, (2,), [[1, A], [A, A1]])     # second row is a multiple
    with pytest.raises(LengthMismatch):
        SumRankCode(f4, (3,), [[1, A]])
