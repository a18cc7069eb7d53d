from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from srsat.field import context_for  # noqa: E402
from oracles import PolyField  # noqa: E402


@pytest.fixture
def f4():
    return context_for(2, 2)


@pytest.fixture
def f4_oracle(f4):
    return PolyField(f4.p, f4.fq_poly, f4.fqm_poly)


def oracle_for(ctx):
    return PolyField(ctx.p, ctx.fq_poly, ctx.fqm_poly)


def random_code(ctx, profile, k, rng, nondegenerate=False):
    """Random full-rank generator over F_{q^m}, optionally with F_q-independent block columns."""
    from srsat.codes import SumRankCode
    from srsat.errors import BadArgs
    N = sum(profile)
    for _ in range(1000):
        G = rng.integers(0, ctx.Q, size=(k, N))
        try:
            C = SumRankCode(ctx, tuple(profile), G)
        except BadArgs:
            continue
        if nondegenerate and not C.is_nondegenerate():
            continue
        return C
    raise RuntimeError("no random code found")
