"""q-systems, linear sets, saturation, cutting systems and system surgery."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .codes import SumRankCode, check_guard, covering_radius, dual_code, hyperplane_normals
from .errors import (BadArgs, ContextMismatch, Degenerate, HypothesisNotSatisfied,
                     InternalDisagreement, ShapeMismatch, TooLarge)
from .field import FieldContext
from .linalg import Space, enumerate_rref, matmul, rank, rref_key


@dataclass(eq=False)
class QSystem:
    """t-tuple of F_q-subspaces of F_{q^m}^k, each given by an ordered basis.

    Vectors are indices in F_{q^m}^k (equivalently in F_q^{mk}).
    """

    ctx: FieldContext
    k: int
    bases: list
    check: bool = True
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bases = [np.asarray(b, dtype=np.int64).ravel() for b in self.bases]
        if self.k < 1:
            raise BadArgs("k must be positive")
        size = self.ctx.Q ** self.k
        for b in self.bases:
            if b.size == 0:
                raise BadArgs("every block needs at least one basis vector")
            if np.any((b <= 0) | (b >= size)):
                raise BadArgs("basis vectors must be nonzero indices of F_{q^m}^k")
        if self.check:
            Sq = self.fq_space
            for i, b in enumerate(self.bases):
                if rank(self.ctx.fq, Sq.coords(b)) != b.size:
                    raise Degenerate(f"block {i} basis is not F_q-independent")
            if not self.spans():
                raise Degenerate("blocks do not span F_{q^m}^k over F_{q^m}")

    @property
    def t(self) -> int:
        return len(self.bases)

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(int(b.size) for b in self.bases)

    @property
    def N(self) -> int:
        return sum(self.profile)

    @property
    def fq_space(self) -> Space:
        return Space(self.ctx.fq, self.ctx.m * self.k)

    @property
    def fqm_space(self) -> Space:
        return Space(self.ctx.fqm, self.k)

    def spans(self) -> bool:
        allv = np.concatenate(self.bases)
        return rank(self.ctx.fqm, self.fqm_space.coords(allv)) == self.k

    def elements(self, i: int) -> np.ndarray:
        """All vectors of U_i."""
        return self.fq_space.span(self.bases[i])

    def __repr__(self):
        return f"QSystem(q={self.ctx.q}, m={self.ctx.m}, k={self.k}, profile={self.profile})"


def fq_combine(ctx: FieldContext, k: int, coeffs, basis) -> np.ndarray:
    """Rows of coefficient indices (in F_q^n) applied to an F_q-basis."""
    basis = np.asarray(basis, dtype=np.int64)
    Sn = Space(ctx.fq, len(basis))
    Sq = Space(ctx.fq, ctx.m * k)
    C = Sn.coords(np.asarray(coeffs, dtype=np.int64))
    out = np.zeros(C.shape[:-1], dtype=np.int64)
    for j, u in enumerate(basis):
        out = Sq.add(out, Sq.scale(C[..., j], int(u)))
    return out


# -- code <-> system ------------------------------------------------------------

def system_from_code(C: SumRankCode) -> QSystem:
    if not C.is_nondegenerate():
        raise Degenerate("block columns are F_q-dependent")
    Sk = Space(C.ctx.fqm, C.k)
    return QSystem(C.ctx, C.k, [Sk.index(Gi.T) for Gi in C.blocks()])


def code_from_system(U: QSystem) -> SumRankCode:
    Sk = U.fqm_space
    G = np.concatenate([Sk.coords(b).T for b in U.bases], axis=1)
    return SumRankCode(U.ctx, U.profile, G)


# -- linear sets ------------------------------------------------------------------

@dataclass
class LinearSet:
    ctx: FieldContext
    k: int
    rank: int
    weights: dict

    @property
    def points(self) -> list[int]:
        return sorted(self.weights)

    def __len__(self):
        return len(self.weights)


def linear_set(ctx: FieldContext, k: int, basis) -> LinearSet:
    basis = np.asarray(basis, dtype=np.int64).ravel()
    Sq = Space(ctx.fq, ctx.m * k)
    elems = Sq.span(basis)[1:]
    n = rank(ctx.fq, Sq.coords(basis)) if basis.size else 0
    pts, counts = np.unique(Space(ctx.fqm, k).normalize(elems), return_counts=True)
    weights = {int(P): round(math.log(int(c) + 1, ctx.q)) for P, c in zip(pts, counts)}
    return LinearSet(ctx, k, n, weights)


def is_scattered(L: LinearSet) -> bool:
    q = L.ctx.q
    return len(L) == (q ** L.rank - 1) // (q - 1)


def union_points(U: QSystem) -> np.ndarray:
    Sk = U.fqm_space
    pts = [Sk.normalize(U.elements(i)[1:]) for i in range(U.t)]
    return np.unique(np.concatenate(pts))


# -- saturation -------------------------------------------------------------------

def _block_subspaces(U: QSystem, i: int, d: int) -> list[np.ndarray]:
    """F_q-bases (as vectors of F_{q^m}^k) of every d-dim subspace of U_i."""
    rows = list(enumerate_rref(U.ctx.fq, U.profile[i], d))
    if d == 0:
        return [np.zeros(0, dtype=np.int64)]
    arr = np.array(rows, dtype=np.int64)
    vecs = fq_combine(U.ctx, U.k, arr, U.bases[i])
    return list(vecs)


def _dim_splits(profile, total):
    def rec(i, left):
        if i == len(profile) - 1:
            if left <= profile[i]:
                yield (left,)
            return
        for d in range(min(profile[i], left), -1, -1):
            for rest in rec(i + 1, left - d):
                yield (d,) + rest
    yield from rec(0, total)


def sphere_set(U: QSystem, rho: int, guard_log2=None) -> np.ndarray:
    """Boolean mask of S_rho(U) over F_{q^m}^k by the subspace-tuple route."""
    Sk = U.fqm_space
    check_guard(U.k * math.log2(U.ctx.Q), guard_log2, "q^{mk} point bitmap")
    mask = np.zeros(Sk.size, dtype=bool)
    mask[0] = True
    r = min(rho, U.N)
    if r <= 0:
        return mask
    seen = set()
    cache = {}
    for dims in _dim_splits(U.profile, r):
        choices = []
        for i, d in enumerate(dims):
            if (i, d) not in cache:
                cache[i, d] = _block_subspaces(U, i, d)
            choices.append(cache[i, d])
        for combo in itertools.product(*choices):
            vecs = np.concatenate(combo)
            key = rref_key(Sk, vecs)
            if key in seen:
                continue
            seen.add(key)
            mask[Sk.span(key)] = True
    return mask


def sphere_set_size(U: QSystem, rho: int, guard_log2=None) -> int:
    return int(np.count_nonzero(sphere_set(U, rho, guard_log2)))


def _cone(U: QSystem) -> np.ndarray:
    Sk = U.fqm_space
    F = U.ctx.fqm
    els = np.unique(np.concatenate([U.elements(i)[1:] for i in range(U.t)]))
    scal = np.arange(1, F.order, dtype=np.int64)
    return np.unique(Sk.scale(scal[:, None], els[None, :]).ravel())


def sumset_layers(U: QSystem, max_rho: int | None = None, guard_log2=None):
    """Yield |S_j(U)| for j = 0, 1, ... via S_{j+1} = S_j + cone.

    The cone is every F_{q^m}-multiple of a vector of some U_i, so S_j is the set
    of sums of j such multiples, which is S_j(U) from the subspace-tuple route.
    Stops once the whole space is covered or max_rho is reached.
    """
    Sk = U.fqm_space
    check_guard(U.k * math.log2(U.ctx.Q), guard_log2, "q^{mk} point bitmap")
    cone = _cone(U)
    cur = np.zeros(Sk.size, dtype=bool)
    cur[0] = True
    j = 0
    yield j, int(cur.sum())
    while not cur.all() and (max_rho is None or j < max_rho):
        idx = np.nonzero(cur)[0]
        nxt = cur.copy()
        for s in range(0, len(idx), 4096):
            nxt[Sk.add(idx[s:s + 4096, None], cone[None, :]).ravel()] = True
        j += 1
        if nxt.sum() == cur.sum():
            return
        cur = nxt
        yield j, int(cur.sum())


def sumset_radius(U: QSystem, max_rho: int | None = None, guard_log2=None):
    """Saturation radius from the sumset layers (None if not reached by max_rho)."""
    full = U.ctx.Q ** U.k
    for j, size in sumset_layers(U, max_rho, guard_log2):
        if size == full:
            return j
    return None


def geometric_radius(U: QSystem, guard_log2=None) -> int:
    full = U.ctx.Q ** U.k
    for rho in range(0, U.N + 1):
        if sphere_set_size(U, rho, guard_log2) == full:
            return rho
    raise Degenerate("system does not span")


def dual_radius(U: QSystem, guard_log2=None) -> int:
    return covering_radius(dual_code(code_from_system(U)), guard_log2)


def saturation_routes(U: QSystem, routes=("dual", "geometric"), guard_log2=None) -> dict:
    """Radius by each requested route.

    When the dual enumeration exceeds the guard it is replaced by the sumset
    route and the result dict records that under 'fallback'.
    """
    out = {}
    for r in routes:
        if r == "geometric":
            out[r] = geometric_radius(U, guard_log2)
        elif r == "sumset":
            out[r] = sumset_radius(U, guard_log2=guard_log2)
        elif r == "dual":
            try:
                out[r] = dual_radius(U, guard_log2)
            except TooLarge:
                if len(routes) == 1:
                    raise
                out["sumset"] = sumset_radius(U, guard_log2=guard_log2)
                out["fallback"] = "dual route above guard; sumset used"
        else:
            raise BadArgs(f"unknown route {r!r}")
    return out


def saturation_radius(U: QSystem, routes=("dual", "geometric"), guard_log2=None) -> int:
    res = saturation_routes(U, routes, guard_log2)
    vals = {v for k, v in res.items() if k != "fallback"}
    if len(vals) != 1:
        raise InternalDisagreement(f"saturation routes disagree: {res}")
    return vals.pop()


def is_saturating(U: QSystem, rho: int, routes=("dual", "geometric"), guard_log2=None) -> bool:
    """Coverage test: S_rho(U) is everything (i.e. radius <= rho)."""
    return saturation_radius(U, routes, guard_log2) <= rho


# -- cutting -----------------------------------------------------------------------

def is_cutting(U: QSystem, guard_log2=None):
    """(True, None) or (False, h) with h the normal of a hyperplane not spanned."""
    k = U.k
    if k == 1:
        return True, None
    check_guard(k * math.log2(U.ctx.Q), guard_log2, "hyperplane enumeration")
    Sk = U.fqm_space
    pts = union_points(U)
    normals = hyperplane_normals(U.ctx, k)
    for h in normals:
        on = pts[Sk.dot(int(h), pts) == 0]
        if rank(U.ctx.fqm, Sk.coords(on)) != k - 1:
            return False, int(h)
    return True, None


# -- sums ----------------------------------------------------------------------------

def _same_ctx(U1: QSystem, U2: QSystem):
    if U1.ctx != U2.ctx:
        raise ContextMismatch("systems live over different fields")


def direct_sum(U1: QSystem, U2: QSystem) -> QSystem:
    _same_ctx(U1, U2)
    shift = U1.ctx.Q ** U1.k
    return QSystem(U1.ctx, U1.k + U2.k, list(U1.bases) + [b * shift for b in U2.bases])


def f_sum(U1: QSystem, U2: QSystem, f) -> QSystem:
    """System of the code {(u, f(u) + v) : u in C1, v in C2}; f is an N1 x N2 matrix."""
    _same_ctx(U1, U2)
    ctx = U1.ctx
    C1, C2 = code_from_system(U1), code_from_system(U2)
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (C1.N, C2.N):
        raise ShapeMismatch(f"f must be {C1.N} x {C2.N}, got {f.shape}")
    top = np.concatenate([C1.G, matmul(ctx.fqm, C1.G, f)], axis=1)
    bot = np.concatenate([np.zeros((C2.k, C1.N), dtype=np.int64), C2.G], axis=1)
    G = np.concatenate([top, bot], axis=0)
    C = SumRankCode(ctx, U1.profile + U2.profile, G)
    return system_from_code(C)


def plotkin_sum(U1: QSystem, U2: QSystem) -> QSystem:
    if U1.N != U2.N:
        raise ShapeMismatch("Plotkin sum needs equal lengths")
    return f_sum(U1, U2, np.eye(U1.N, dtype=np.int64))


def is_reducible(parts) -> tuple[bool, int | None]:
    """For a direct sum U_1 + ... + U_s given by its summands: (True, i) if dropping
    summand i keeps the saturation radius, else (False, None)."""
    parts = list(parts)
    if len(parts) < 2:
        return False, None

    def dsum(ps):
        out = ps[0]
        for p in ps[1:]:
            out = direct_sum(out, p)
        return out

    rho = saturation_radius(dsum(parts))
    for i in range(len(parts)):
        if saturation_radius(dsum(parts[:i] + parts[i + 1:])) == rho:
            return True, i
    return False, None


# -- shortening ------------------------------------------------------------------------

@dataclass
class ShortenReport:
    system: QSystem
    scalar: int
    old_radius: int
    new_radius: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.new_radius <= self.bound


def shorten_basis_vector(U: QSystem, i: int, basis=None, support_blocks=None) -> ShortenReport:
    """Drop the last basis vector u of U_i after checking u = lambda * w with w an
    F_q-combination of the other basis vectors of the blocks in support_blocks
    (default: block i alone).  An optional replacement basis for U_i may be given;
    its last vector is the one dropped.
    """
    ctx, k = U.ctx, U.k
    bases = [b.copy() for b in U.bases]
    if basis is not None:
        nb = np.asarray(basis, dtype=np.int64).ravel()
        Sq = U.fq_space
        if rref_key(Sq, nb) != rref_key(Sq, bases[i]) or nb.size != bases[i].size:
            raise BadArgs("replacement is not a basis of the same block")
        bases[i] = nb
    if bases[i].size < 2:
        raise HypothesisNotSatisfied("block has a single basis vector")
    S = sorted(set(support_blocks) if support_blocks is not None else {i})
    last = int(bases[i][-1])
    others = [bases[j] if j != i else bases[j][:-1] for j in S]
    span = U.fq_space.span(np.concatenate(others))
    Sk = U.fqm_space
    lam = None
    for a in range(1, ctx.Q):
        w = int(Sk.scale(ctx.fqm.inv1(a), last))
        if np.searchsorted(span, w) < len(span) and span[np.searchsorted(span, w)] == w:
            lam = a
            break
    if lam is None:
        raise HypothesisNotSatisfied("dropped vector is not a scalar multiple of an "
                                     "F_q-combination of the remaining ones")
    old = saturation_radius(QSystem(ctx, k, bases))
    bases[i] = bases[i][:-1]
    V = QSystem(ctx, k, bases)
    new = saturation_radius(V)
    return ShortenReport(V, lam, old, new, old + len(S))


# -- equivalence ---------------------------------------------------------------------

def _gl(F, k):
    Sk = Space(F, k)
    for combo in itertools.product(range(1, Sk.size), repeat=k):
        M = Sk.coords(np.array(combo))
        if rank(F, M) == k:
            yield M


def are_equivalent(U: QSystem, V: QSystem, guard_log2=None) -> bool:
    """Brute force over GL(k, q^m), block scalars and block permutations."""
    if U.ctx != V.ctx or U.k != V.k or sorted(U.profile) != sorted(V.profile):
        return False
    ctx, k = U.ctx, U.k
    limit = config.equiv_guard_log2(guard_log2)
    need = k * k * math.log2(ctx.Q)
    if need > limit + 1e-9:
        raise TooLarge(f"GL({k},{ctx.Q}) brute force needs 2^{need:.1f}, guard 2^{limit:g}",
                       limit="equivalence", knob=config.ENUM_ENV)
    Sq, Sk = U.fq_space, U.fqm_space
    orbit = []
    for b in V.bases:
        keys = {rref_key(Sq, Sk.scale(a, b)) for a in range(1, ctx.Q)}
        orbit.append(keys)
    t = U.t
    for M in _gl(ctx.fqm, k):
        imgs = [Sk.index(matmul(ctx.fqm, Sk.coords(b), M.T)) for b in U.bases]
        keys = [rref_key(Sq, im) for im in imgs]
        ok = [[keys[i] in orbit[j] for j in range(t)] for i in range(t)]
        for perm in itertools.permutations(range(t)):
            if all(ok[i][perm[i]] for i in range(t)):
                return True
    return False
