"""Explicit saturating systems: A_{h,r}, G_t, partitions, deLRS, cutting lifts."""

from __future__ import annotations

import math

import numpy as np

from . import config
from .codes import SumRankCode, is_minimal_code
from .errors import (BadArgs, ClassNotSaturating, ConstructionCheckFailed, NotAPartition,
                     NotCutting, TooLarge)
from .field import FieldContext, context_for, extend, field_create, poly_eval
from .linalg import Space, rank
from .systems import (QSystem, is_cutting, linear_set, is_scattered,
                      saturation_routes, sumset_layers, system_from_code)


def _verify_radius(U: QSystem, guard_log2=None) -> dict:
    """Radius by the geometric route plus the dual route (or the sumset route when
    the dual enumeration is too large).  Returns the routes dict."""
    try:
        res = saturation_routes(U, ("dual", "geometric"), guard_log2)
    except TooLarge:
        return {}
    vals = {v for k, v in res.items() if k != "fallback"}
    if len(vals) != 1:
        raise ConstructionCheckFailed(f"saturation routes disagree: {res}")
    return res


def _radius_of(res: dict):
    for key in ("dual", "geometric", "sumset"):
        if key in res:
            return res[key]
    return None


# -- A_{h,r} and G_t ---------------------------------------------------------------

def build_Ahr(ctx: FieldContext, h: int, r: int, verify: bool = True) -> SumRankCode:
    """h x (m(h-r)+r) matrix [I_r 0 ... 0 ; 0 I_{h-r} a I_{h-r} ... a^{m-1} I_{h-r}]."""
    return build_Gt(ctx, h, r, 1, verify)


def _ahr_matrix(ctx: FieldContext, h: int, r: int) -> np.ndarray:
    m = ctx.m
    a = ctx.generator
    n = m * (h - r) + r
    A = np.zeros((h, n), dtype=np.int64)
    for i in range(r):
        A[i, i] = 1
    for j in range(m):
        aj = ctx.fqm.pow1(a, j)
        for i in range(h - r):
            A[r + i, r + j * (h - r) + i] = aj
    return A


def build_Gt(ctx: FieldContext, h: int, r: int, t: int, verify: bool = True) -> SumRankCode:
    if not (h >= r >= 1 and t >= 1):
        raise BadArgs("need h >= r >= 1 and t >= 1")
    A = _ahr_matrix(ctx, h, r)
    hh, n = A.shape
    G = np.zeros((t * hh, t * n), dtype=np.int64)
    for i in range(t):
        G[i * hh:(i + 1) * hh, i * n:(i + 1) * n] = A
    C = SumRankCode(ctx, (n,) * t, G)
    C.tags["expected_radius"] = t * r
    if verify:
        res = _verify_radius(system_from_code(C))
        if not res:
            C.tags["status"] = "unverified"
        else:
            rad = _radius_of(res)
            if rad != t * r:
                raise ConstructionCheckFailed(f"G_t radius {rad}, expected {t * r}")
            C.tags.update(status="verified", radius=rad, routes=res)
    return C


# -- subgeometry partitions -----------------------------------------------------------

def _subfield_basis(ctx: FieldContext, k: int, elems) -> np.ndarray:
    """Greedy F_q-basis of a set of vectors of F_{q^m}^k."""
    Sq = Space(ctx.fq, ctx.m * k)
    basis = []
    for x in elems:
        x = int(x)
        if x and rank(ctx.fq, Sq.coords(np.array(basis + [x]))) == len(basis) + 1:
            basis.append(x)
    return np.array(basis, dtype=np.int64)


def _big_field(ctx: FieldContext, k: int, guard_log2=None):
    limit = config.field_guard_log2(guard_log2)
    if ctx.m * k * math.log2(ctx.q) > limit + 1e-9:
        raise TooLarge(f"F_{{q^{{mk}}}} with q^mk = {ctx.q}^{ctx.m * k} exceeds 2^{limit:g}",
                       limit="q^{mk}", knob=config.FIELD_ENV)
    return extend(ctx.fqm, k)


class Partition:
    """Point classes of PG(k-1, q^m) with an F_q-system per class."""

    def __init__(self, ctx, k, classes, system, tags=None):
        self.ctx = ctx
        self.k = k
        self.classes = classes
        self.system = system
        self.tags = tags or {}

    def __len__(self):
        return len(self.classes)


def subgeometry_partition(q: int, m: int, k: int, verify: bool = True, guard_log2=None) -> Partition:
    """Partition of PG(k-1, q^m) into copies of PG(k-1, q) when gcd(m, k) = 1.

    F_{q^{mk}} is built over F_{q^m}; its power-basis coordinates identify it with
    F_{q^m}^k, and the class of w^j (w primitive) is j mod g with g the index of
    <w^((Q^k-1)/(q^k-1)), w^((Q^k-1)/(Q-1))>.  Class i is the linear set of
    w^i F_{q^k}.
    """
    if math.gcd(m, k) != 1:
        raise BadArgs(f"gcd(m, k) = {math.gcd(m, k)} != 1")
    ctx = context_for(q, m)
    Q = ctx.Q
    big = _big_field(ctx, k, guard_log2)
    order = Q ** k - 1
    a, b = order // (q ** k - 1), order // (Q - 1)
    g = math.gcd(math.gcd(a, b), order)
    t_formula = (Q ** k - 1) * (q - 1) // ((Q - 1) * (q ** k - 1))
    sub = [0] + [big.exp1(a * j) for j in range(q ** k - 1)]
    base = _subfield_basis(ctx, k, sorted(sub))
    Sk = Space(ctx.fqm, k)
    bases = []
    for i in range(g):
        wi = big.exp1(i)
        bases.append(np.array([big.mul1(wi, int(x)) for x in base], dtype=np.int64))
    classes = []
    for i in range(g):
        js = np.arange(i, order, g)
        pts = np.unique(Sk.normalize(big._exp[js]))
        classes.append(pts)
    U = QSystem(ctx, k, bases)
    P = Partition(ctx, k, classes, U, {"t": g, "t_formula": t_formula})
    if verify:
        _check_subgeometry(P, q, guard_log2)
    return P


def _check_subgeometry(P: Partition, q: int, guard_log2=None):
    ctx, k = P.ctx, P.k
    Q = ctx.Q
    npoints = (Q ** k - 1) // (Q - 1)
    allpts = np.concatenate(P.classes)
    # (i) partition
    if len(allpts) != npoints or len(np.unique(allpts)) != npoints:
        raise ConstructionCheckFailed("classes do not partition the points")
    # (ii) count
    if len(P.classes) != P.tags["t_formula"]:
        raise ConstructionCheckFailed(f"{len(P.classes)} classes, formula gives {P.tags['t_formula']}")
    Sk = Space(ctx.fqm, k)
    per_class = (q ** k - 1) // (q - 1)
    for i, pts in enumerate(P.classes):
        U = P.system
        # (iii) the class is the scattered rank-k linear set of U_i, closed under F_q-combination
        L = linear_set(ctx, k, U.bases[i])
        if len(pts) != per_class or not np.array_equal(np.array(L.points), pts) or not is_scattered(L):
            raise ConstructionCheckFailed(f"class {i} is not the linear set of a subgeometry")
        if rank(ctx.fqm, Sk.coords(U.bases[i])) != k:
            raise ConstructionCheckFailed(f"class {i} does not span")
        els = U.elements(i)[1:]
        cls = set(int(x) for x in pts)
        for lam in range(ctx.q):
            comb = Sk.add(els[:, None], Sk.scale(lam, els)[None, :]).ravel()
            comb = comb[comb != 0]
            if not set(int(x) for x in np.unique(Sk.normalize(comb))) <= cls:
                raise ConstructionCheckFailed(f"class {i} not F_q-closed")
    # (iv) 1-saturating of total length k t
    U = P.system
    if U.N != k * len(P.classes):
        raise ConstructionCheckFailed("total length is not k t")
    res = _verify_radius(U, guard_log2)
    if not res:
        P.tags["status"] = "unverified"
        return
    if _radius_of(res) != 1:
        raise ConstructionCheckFailed(f"partition system has radius {_radius_of(res)}")
    P.tags.update(status="verified", radius=1, routes=res)


def spread_partition(ctx: FieldContext, k: int, b: int, guard_log2=None) -> list[np.ndarray]:
    """Desarguesian spread of PG(k-1, q^m) by (b-1)-spaces, b | k, as F_{q^m}-bases."""
    if b < 1 or k % b:
        raise BadArgs("b must divide k")
    Q = ctx.Q
    big = _big_field(ctx, k, guard_log2)
    order = Q ** k - 1
    step = order // (Q ** b - 1)
    sub = sorted([0] + [big.exp1(step * j) for j in range(Q ** b - 1)])
    # F_{q^m}-basis of the subfield F_{q^{mb}} (an F_{q^m}-subspace of F_{q^m}^k)
    Sk = Space(ctx.fqm, k)
    basis = []
    for x in sub:
        if x and rank(ctx.fqm, Sk.coords(np.array(basis + [x]))) == len(basis) + 1:
            basis.append(int(x))
    return [np.array([big.mul1(big.exp1(i), x) for x in basis], dtype=np.int64)
            for i in range(step)]


def partition_lift(ctx: FieldContext, k: int, classes, blocks, guard_log2=None) -> QSystem:
    """Concatenate per-class systems over a partition of PG(k-1, q^m) into subspaces.

    classes: F_{q^m}-bases of the subspaces; blocks: F_q-bases inside them.
    """
    Sk = Space(ctx.fqm, k)
    Q = ctx.Q
    if len(classes) != len(blocks):
        raise BadArgs("one block per class is needed")
    seen = []
    spans = []
    for B in classes:
        sp = Sk.span(np.asarray(B, dtype=np.int64))
        spans.append(sp)
        seen.append(np.unique(Sk.normalize(sp[1:])))
    allpts = np.concatenate(seen)
    npoints = (Q ** k - 1) // (Q - 1)
    if len(allpts) != npoints or len(np.unique(allpts)) != npoints:
        raise NotAPartition("classes do not partition PG(k-1, q^m)")
    rho = 0
    for i, (B, sp, blk) in enumerate(zip(classes, spans, blocks)):
        blk = np.asarray(blk, dtype=np.int64)
        if not np.all(np.isin(blk, sp)):
            raise ClassNotSaturating(f"block {i} leaves its class")
        V = QSystem(ctx, k, [blk], check=False)
        need = len(sp)
        r = None
        for j, size in sumset_layers(V, guard_log2=guard_log2):
            if size == need:
                r = j
                break
        if r is None:
            raise ClassNotSaturating(f"block {i} does not saturate its class")
        rho = max(rho, r)
    U = QSystem(ctx, k, [np.asarray(b, dtype=np.int64) for b in blocks])
    U.tags["class_radius"] = rho
    res = _verify_radius(U, guard_log2)
    if res:
        rad = _radius_of(res)
        if rad > rho:
            raise ConstructionCheckFailed(f"lifted radius {rad} exceeds class radius {rho}")
        U.tags.update(status="verified", radius=rad, routes=res)
    else:
        U.tags["status"] = "unverified"
    return U


# -- doubly extended linearized Reed-Solomon --------------------------------------------

def build_deLRS(ctx: FieldContext, verify: bool = True) -> SumRankCode:
    """Blocks {(x, g^i x^q)} for i = 0..q-2, then <e_1>, <e_2>; k = 2."""
    q, m, Q = ctx.q, ctx.m, ctx.Q
    F = ctx.fqm
    fq_basis = [q ** j for j in range(m)]        # 1, a, ..., a^{m-1}
    bases = []
    for i in range(q - 1):
        gam = F.pow1(ctx.generator, i)
        bases.append([x + Q * F.mul1(gam, F.pow1(x, q)) for x in fq_basis])
    bases.append([1])
    bases.append([Q])
    U = QSystem(ctx, 2, bases)
    from .systems import code_from_system
    C = code_from_system(U)
    if C.N != (q - 1) * m + 2:
        raise ConstructionCheckFailed("length differs from (q-1)m+2")
    if verify:
        ok, wit = is_minimal_code(C)
        if not ok:
            raise ConstructionCheckFailed(f"deLRS code is not minimal, witness {wit}")
        C.tags["status"] = "verified"
    return C


# -- cutting systems as saturating systems over a larger field ----------------------------

def embedding(ctx: FieldContext, ctx2: FieldContext) -> np.ndarray:
    """Table phi[x] of an F_q-algebra embedding F_{q^m} -> F_{q^{m'}} (m | m').

    The adjoined root of the F_{q^m}/F_q modulus is sent to its smallest-code
    root inside the subfield of order q^m of the larger field.
    """
    if ctx.p != ctx2.p or ctx.e != ctx2.e or ctx.fq_poly != ctx2.fq_poly or ctx2.m % ctx.m:
        raise BadArgs("no compatible embedding")
    if ctx == ctx2:
        return np.arange(ctx.Q, dtype=np.int64)
    F2 = ctx2.fqm
    f = ctx.fqm_poly
    step = (ctx2.Q - 1) // (ctx.Q - 1)
    cands = sorted(F2.exp1(step * j) for j in range(ctx.Q - 1))
    beta = next(x for x in cands if poly_eval(F2, f, x) == 0)
    pw = [F2.pow1(beta, j) for j in range(ctx.m)]
    table = np.zeros(ctx.Q, dtype=np.int64)
    Sm = Space(ctx.fq, ctx.m)
    for x in range(ctx.Q):
        acc = 0
        for c, bj in zip(Sm.coords(x), pw):
            acc = F2.add1(acc, F2.mul1(int(c), bj))
        table[x] = acc
    return table


def lift_cutting_to_saturating(U: QSystem, guard_log2=None) -> QSystem:
    ok, h = is_cutting(U, guard_log2)
    if not ok:
        raise NotCutting(f"hyperplane with normal {h} is not spanned")
    ctx, k = U.ctx, U.k
    if k == 1:
        raise BadArgs("k = 1 gives no larger field")
    ctx2 = field_create(ctx.p, ctx.e, ctx.m * (k - 1), fq_poly=ctx.fq_poly)
    phi = embedding(ctx, ctx2)
    S1, S2 = Space(ctx.fqm, k), Space(ctx2.fqm, k)
    bases = [S2.index(phi[S1.coords(b)]) for b in U.bases]
    V = QSystem(ctx2, k, bases)
    res = _verify_radius(V, guard_log2)
    if not res:
        V.tags["status"] = "unverified"
        return V
    rad = _radius_of(res)
    if rad > k - 1:
        raise ConstructionCheckFailed(f"lifted system has radius {rad} > k-1")
    V.tags.update(status="verified", radius=rad, routes=res)
    return V
