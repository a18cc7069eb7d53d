from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srsat.field import field_create
from srsat.linalg import Space, enumerate_rref, matmul, nullspace, rank, rref, rref_key
from conftest import oracle_for
from oracles import fqm_rank


def _distinct_spans(F, D, r):
    S = Space(F, D)
    spans = set()
    for combo in itertools.combinations(range(1, S.size), r):
        sp = S.span(combo)
        if len(sp) == F.order ** r:
            spans.add(tuple(sp))
    return spans


@pytest.mark.parametrize("p,D,r", [(2, 3, 1), (2, 3, 2), (2, 4, 2), (3, 3, 1), (3, 2, 1)])
def test_enumerate_rref_hits_every_subspace_once(p, D, r):
    F = field_create(p, 1, 1).fq
    keys = list(enumerate_rref(F, D, r))
    assert len(keys) == len(set(keys))
    S = Space(F, D)
    spans = {tuple(S.span(k)) for k in keys}
    assert len(spans) == len(keys)
    assert spans == _distinct_spans(F, D, r)


def test_rref_key_is_span_invariant(f4):
    S = Space(f4.fq, 4)
    a = rref_key(S, [3, 5])
    assert a == rref_key(S, [5, 6]) == rref_key(S, [6, 3])


@given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=1, max_size=4))
@settings(max_examples=100, deadline=None)
def test_rank_and_nullspace_against_oracle(rows):
    ctx = field_create(2, 1, 2)
    F = ctx.fqm
    M = np.array(rows, dtype=np.int64)
    assert rank(F, M) == fqm_rank(oracle_for(ctx), rows)
    K = nullspace(F, M)
    assert K.shape[0] == 4 - rank(F, M)
    if K.size:
        assert not np.any(matmul(F, M, K.T))
    R, piv = rref(F, M)
    assert len(piv) == R.shape[0]


def test_space_ops_odd_characteristic():
    ctx = field_create(3, 1, 2)
    S = Space(ctx.fqm, 2)
    v = int(S.index([2, 5]))
    assert int(S.add(v, S.neg(v))) == 0
    n = S.normalize(S.scale(7, v))
    assert S.coords(n)[0][0] == 1
    assert int(n[0]) == int(S.normalize(v)[0])
