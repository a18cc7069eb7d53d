"""F_{q^m}-linear sum-rank metric codes: weights, duals, distance, covering radius."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import config
from .errors import BadArgs, Degenerate, InternalDisagreement, LengthMismatch, TooLarge, ZeroMessage
from .field import FieldContext
from .linalg import Space, nullspace, rank, rref

_CHUNK = 1 << 16


def check_guard(count_log2: float, guard_log2=None, what: str = "enumeration"):
    limit = config.enum_guard_log2(guard_log2)
    if count_log2 > limit + 1e-9:
        raise TooLarge(f"{what} needs 2^{count_log2:.1f} steps, guard is 2^{limit:g} "
                       f"(raise with --guard-log2 or {config.ENUM_ENV})",
                       limit=what, knob=config.ENUM_ENV)


@dataclass(frozen=True)
class SumRankProfile:
    n: tuple[int, ...]

    def __post_init__(self):
        if not self.n or any(x < 1 for x in self.n):
            raise BadArgs(f"profile entries must be positive, got {self.n}")

    @property
    def N(self) -> int:
        return sum(self.n)

    @property
    def t(self) -> int:
        return len(self.n)

    @property
    def is_standard(self) -> bool:
        """Nonincreasing, the ordering assumed throughout the theory."""
        return all(a >= b for a, b in zip(self.n, self.n[1:]))

    def offsets(self) -> list[int]:
        out = [0]
        for x in self.n:
            out.append(out[-1] + x)
        return out


@dataclass(eq=False)
class SumRankCode:
    """Row space of a k x N generator matrix G = (G_1 | ... | G_t) over F_{q^m}."""

    ctx: FieldContext
    profile: tuple[int, ...]
    G: np.ndarray
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.profile = tuple(int(x) for x in self.profile)
        SumRankProfile(self.profile)
        G = np.asarray(self.G, dtype=np.int64)
        if G.ndim == 1 and G.size == 0:
            G = G.reshape(0, self.N)
        if G.ndim != 2 or G.shape[1] != self.N:
            raise LengthMismatch(f"generator has {G.shape[-1]} columns, profile sums to {self.N}")
        if np.any((G < 0) | (G >= self.ctx.Q)):
            raise BadArgs("generator entries must be element codes")
        if G.shape[0] and rank(self.ctx.fqm, G) != G.shape[0]:
            raise BadArgs("generator rows are not F_{q^m}-linearly independent")
        self.G = G

    @property
    def k(self) -> int:
        return self.G.shape[0]

    @property
    def N(self) -> int:
        return sum(self.profile)

    @property
    def t(self) -> int:
        return len(self.profile)

    def blocks(self) -> list[np.ndarray]:
        off = SumRankProfile(self.profile).offsets()
        return [self.G[:, off[i]:off[i + 1]] for i in range(self.t)]

    def is_nondegenerate(self) -> bool:
        Sq = Space(self.ctx.fq, self.ctx.m * self.k)
        Sk = Space(self.ctx.fqm, self.k)
        for Gi in self.blocks():
            cols = Sk.index(Gi.T)
            if rank(self.ctx.fq, Sq.coords(cols)) != Gi.shape[1]:
                return False
        return True

    def codewords(self, messages=None) -> np.ndarray:
        """Codewords xG for message indices (all of F_{q^m}^k by default)."""
        Sk = Space(self.ctx.fqm, self.k)
        if messages is None:
            messages = np.arange(Sk.size, dtype=np.int64)
        X = Sk.coords(messages)
        return encode(self.ctx, X, self.G)


def encode(ctx: FieldContext, X, G) -> np.ndarray:
    F = ctx.fqm
    X = np.asarray(X, dtype=np.int64)
    out = np.zeros((X.shape[0], G.shape[1]), dtype=np.int64)
    for j in range(G.shape[0]):
        out = F.add(out, F.mul(X[:, j][:, None], G[j][None, :]))
    return out


# -- rank weights ---------------------------------------------------------------

class _SpanDP:
    """Memoised transitions  (F_q-span of a prefix, next entry) -> F_q-span.

    Walking a block left to right through these states yields its rank weight
    without Gaussian elimination, vectorised over many vectors at once.
    """

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.elems = [np.zeros(1, dtype=np.int64)]
        self.ids = {(0,): 0}
        self.dims = [0]
        self.trans: dict[int, int] = {}
        self._dims_arr = np.zeros(1, dtype=np.int64)

    def _step1(self, sid: int, x: int) -> int:
        key = sid * self.ctx.Q + x
        hit = self.trans.get(key)
        if hit is not None:
            return hit
        E = self.elems[sid]
        idx = np.searchsorted(E, x)
        if idx < len(E) and E[idx] == x:
            out = sid
        else:
            F = self.ctx.fqm
            mult = F.mul(np.arange(self.ctx.q, dtype=np.int64), x)
            new = np.unique(F.add(E[:, None], mult[None, :]).ravel())
            tkey = tuple(int(v) for v in new)
            out = self.ids.get(tkey)
            if out is None:
                out = len(self.elems)
                self.ids[tkey] = out
                self.elems.append(new)
                self.dims.append(self.dims[sid] + 1)
                self._dims_arr = np.array(self.dims, dtype=np.int64)
        self.trans[key] = out
        return out

    def step(self, sid, x):
        keys = np.asarray(sid, dtype=np.int64) * self.ctx.Q + np.asarray(x, dtype=np.int64)
        uk, inv = np.unique(keys, return_inverse=True)
        res = np.fromiter((self._step1(int(k) // self.ctx.Q, int(k) % self.ctx.Q) for k in uk),
                          dtype=np.int64, count=len(uk))
        return res[inv.reshape(keys.shape)]

    def ranks(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        sid = np.zeros(X.shape[:-1], dtype=np.int64)
        for j in range(X.shape[-1]):
            sid = self.step(sid, X[..., j])
        return self._dims_arr[sid]


@lru_cache(maxsize=32)
def _span_dp(ctx: FieldContext) -> _SpanDP:
    return _SpanDP(ctx)


def rank_weight(ctx: FieldContext, v) -> int:
    v = np.asarray(v, dtype=np.int64).ravel()
    if v.size == 0:
        return 0
    M = Space(ctx.fq, ctx.m).coords(v)      # n x m over F_q
    return rank(ctx.fq, M)


def sumrank_weight(ctx: FieldContext, profile, x) -> int:
    x = np.asarray(x, dtype=np.int64).ravel()
    off = SumRankProfile(tuple(profile)).offsets()
    if x.size != off[-1]:
        raise LengthMismatch(f"vector of length {x.size} does not match profile {tuple(profile)}")
    return sum(rank_weight(ctx, x[off[i]:off[i + 1]]) for i in range(len(profile)))


def sumrank_weights(ctx: FieldContext, profile, X) -> np.ndarray:
    """Sum-rank weights of the rows of X (vectorised)."""
    X = np.asarray(X, dtype=np.int64)
    off = SumRankProfile(tuple(profile)).offsets()
    if X.shape[-1] != off[-1]:
        raise LengthMismatch("row length does not match profile")
    dp = _span_dp(ctx)
    total = np.zeros(X.shape[:-1], dtype=np.int64)
    for i in range(len(profile)):
        total += dp.ranks(X[..., off[i]:off[i + 1]])
    return total


def sumrank_distance(ctx: FieldContext, profile, x, y) -> int:
    return sumrank_weight(ctx, profile, ctx.fqm.sub(np.asarray(x), np.asarray(y)))


# -- code invariants ------------------------------------------------------------

def _fq_span_elements(ctx: FieldContext, k: int, Gi) -> np.ndarray:
    Sk = Space(ctx.fqm, k)
    cols = Sk.index(np.asarray(Gi, dtype=np.int64).T)
    return Space(ctx.fq, ctx.m * k).span(cols)


def hyperplane_normals(ctx: FieldContext, k: int) -> np.ndarray:
    """Normalised representatives of the points of PG(k-1, q^m) (also the hyperplane normals)."""
    Sk = Space(ctx.fqm, k)
    allv = np.arange(1, Sk.size, dtype=np.int64)
    return np.unique(Sk.normalize(allv))


def min_distance(C: SumRankCode, guard_log2=None) -> int:
    """Minimum nonzero weight, cross-checked against the hyperplane formula."""
    ctx, k = C.ctx, C.k
    if k == 0:
        raise BadArgs("the zero code has no minimum distance")
    check_guard(k * math.log2(ctx.Q), guard_log2, "q^{mk} codewords")
    reps = hyperplane_normals(ctx, k)
    direct = int(sumrank_weights(ctx, C.profile, C.codewords(reps)).min())
    # N - max_H sum_i dim(U_i cap H), with sum dim U_i in place of N when degenerate
    Sk = Space(ctx.fqm, k)
    total_dim = 0
    inter = np.zeros(len(reps), dtype=np.int64)
    for Gi in C.blocks():
        E = _fq_span_elements(ctx, k, Gi)
        total_dim += round(math.log(len(E), ctx.q))
        zero = Sk.dot(reps[:, None], E[None, :]) == 0
        inter += np.round(np.log(zero.sum(axis=1)) / np.log(ctx.q)).astype(np.int64)
    geometric = total_dim - int(inter.max())
    if geometric != direct:
        raise InternalDisagreement(f"min distance {direct} != hyperplane formula {geometric}")
    return direct


def dual_code(C: SumRankCode) -> SumRankCode:
    H = nullspace(C.ctx.fqm, C.G, C.N)
    return SumRankCode(C.ctx, C.profile, H)


def parity_check(C: SumRankCode) -> np.ndarray:
    return nullspace(C.ctx.fqm, C.G, C.N)


def covering_radius(C: SumRankCode, guard_log2=None) -> int:
    """Exact sum-rank covering radius max_x min_c w(x - c).

    Every x in F_{q^m}^N is visited once and binned by its syndrome xH^T; each
    bin is one coset, so the per-bin minimum is the coset's minimum weight and
    the answer is the largest such minimum.
    """
    ctx, N = C.ctx, C.N
    check_guard(N * math.log2(ctx.Q), guard_log2, "q^{mN} covering-radius enumeration")
    F = ctx.fqm
    H = parity_check(C)
    r = H.shape[0]
    if r == 0:
        return 0
    SN = Space(F, N)
    Sr = Space(F, r)
    best = np.full(Sr.size, np.iinfo(np.int64).max, dtype=np.int64)
    for start in range(0, SN.size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, SN.size), dtype=np.int64)
        X = SN.coords(idx)
        syn = encode(ctx, X, H.T)
        s_idx = Sr.index(syn)
        w = sumrank_weights(ctx, C.profile, X)
        np.minimum.at(best, s_idx, w)
    if np.any(best == np.iinfo(np.int64).max):
        raise InternalDisagreement("parity-check matrix does not reach every syndrome")
    return int(best.max())


def weight_via_system(C: SumRankCode, x) -> int:
    """w(xG) computed as N - sum_i dim_{F_q}(U_i cap x^perp)."""
    ctx, k = C.ctx, C.k
    x = np.asarray(x, dtype=np.int64).ravel()
    if x.size != k:
        raise LengthMismatch(f"message must have length {k}")
    if not np.any(x):
        raise ZeroMessage("the formula needs a nonzero message")
    if not C.is_nondegenerate():
        raise Degenerate("the formula holds for nondegenerate codes")
    Sk = Space(ctx.fqm, k)
    xi = int(Sk.index(x))
    total = 0
    for Gi in C.blocks():
        E = _fq_span_elements(ctx, k, Gi)
        cnt = int(np.count_nonzero(Sk.dot(xi, E) == 0))
        total += round(math.log(cnt, ctx.q))
    return C.N - total


# -- supports and minimality -----------------------------------------------------

def rank_support(ctx: FieldContext, profile, c) -> tuple[tuple[int, ...], ...]:
    """Per block, the RREF basis (rows as F_q^{n_i} indices) of the F_q-row space
    of the m x n_i expansion of the block."""
    c = np.asarray(c, dtype=np.int64).ravel()
    off = SumRankProfile(tuple(profile)).offsets()
    if c.size != off[-1]:
        raise LengthMismatch("codeword length does not match profile")
    Sm = Space(ctx.fq, ctx.m)
    out = []
    for i in range(len(profile)):
        blk = c[off[i]:off[i + 1]]
        M = Sm.coords(blk).T                    # m x n_i
        R, _ = rref(ctx.fq, M)
        Sn = Space(ctx.fq, blk.size)
        out.append(tuple(int(v) for v in Sn.index(R)) if len(R) else ())
    return tuple(out)


def _support_masks(ctx: FieldContext, profile, support) -> tuple[int, ...]:
    masks = []
    for ni, rows in zip(profile, support):
        elems = Space(ctx.fq, ni).span(rows)
        mask = 0
        for e in elems:
            mask |= 1 << int(e)
        masks.append(mask)
    return tuple(masks)


def is_minimal_code(C: SumRankCode, guard_log2=None):
    """(True, None) if every nonzero codeword is minimal, else (False, (c, c'))
    with supp(c') contained in supp(c) and c' not a multiple of c."""
    ctx, k = C.ctx, C.k
    if k == 0:
        return True, None
    check_guard(k * math.log2(ctx.Q), guard_log2, "q^{mk} codewords")
    reps = hyperplane_normals(ctx, k)
    words = C.codewords(reps)
    masks = [_support_masks(ctx, C.profile, rank_support(ctx, C.profile, w)) for w in words]
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if i != j and all(b & ~a == 0 for a, b in zip(mi, mj)):
                return False, (words[i].copy(), words[j].copy())
    return True, None
