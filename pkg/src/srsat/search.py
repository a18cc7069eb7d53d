"""Exhaustive search for the shortest length of sum-rank rho-saturating systems."""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bounds import (length_lower_bound, partitions, profile_feasible,
                     quadratic_lower_bound, sphere_feasibility)
from .codes import check_guard
from .errors import BadArgs, BudgetExhausted, IncompleteTable
from .field import FieldContext, context_for
from .linalg import Space, enumerate_rref, rref_key
from .systems import QSystem, saturation_routes


@dataclass
class SearchReport:
    q: int
    m: int
    k: int
    rho: int
    t: int
    homogeneous: bool
    value: int | None = None
    status: str = "running"          # exact | budget | infeasible
    witness: QSystem | None = None
    candidates: int = 0
    pruned: int = 0
    seconds: float = 0.0
    start_length: int = 0
    exhausted_below: int = 0          # every length < this was searched completely
    certificate: str = ""
    routes: dict = field(default_factory=dict)
    bound_check: dict = field(default_factory=dict)

    @property
    def profile(self):
        return self.witness.profile if self.witness is not None else None

    def value_text(self) -> str:
        if self.status == "exact":
            return str(self.value)
        if self.status == "infeasible":
            return "inf"
        return f">{self.exhausted_below - 1}"

    def text(self) -> str:
        lines = [f"s{'^hom' if self.homogeneous else ''}_{{{self.q}^{self.m}/{self.q}}}"
                 f"(k={self.k}, rho={self.rho}, t={self.t}) = {self.value_text()}  [{self.status}]",
                 f"  candidates={self.candidates} pruned={self.pruned} seconds={self.seconds:.2f}",
                 f"  start length {self.start_length}; {self.certificate}"]
        if self.witness is not None:
            lines.append(f"  witness profile {self.witness.profile}: "
                         + " | ".join(" ".join(map(str, b)) for b in self.witness.bases))
            lines.append(f"  routes {self.routes}")
        return "\n".join(lines)


# -- candidate spaces ---------------------------------------------------------------------

class _Enumerator:
    def __init__(self, ctx: FieldContext, k: int):
        self.ctx = ctx
        self.k = k
        self.Sq = Space(ctx.fq, ctx.m * k)
        self.Sk = Space(ctx.fqm, k)
        self._reps = {}

    def all_subspaces(self, n):
        return enumerate_rref(self.ctx.fq, self.ctx.m * self.k, n)

    def _is_orbit_min(self, key) -> bool:
        rows = np.array(key, dtype=np.int64)
        for a in range(2, self.ctx.Q):
            if rref_key(self.Sq, self.Sk.scale(a, rows)) < key:
                return False
        return True

    def iter_orbit_reps(self, n):
        """Subspaces of dim n that are lex-least in their F_{q^m}^* scalar orbit (lazy)."""
        if n in self._reps:
            yield from self._reps[n]
            return
        found = []
        for key in self.all_subspaces(n):
            if self._is_orbit_min(key):
                found.append(key)
                yield key
        self._reps[n] = found

    def orbit_reps(self, n) -> list:
        if n not in self._reps:
            for _ in self.iter_orbit_reps(n):
                pass
        return self._reps[n]

    def first_blocks(self, n):
        """U_1 = <e_1..e_d>_{F_q} + W, W inside the non-constant digits of coordinates 1..d."""
        q, m = self.ctx.q, self.ctx.m
        for d in range(1, min(self.k, n) + 1):
            extra = n - d
            if extra > (m - 1) * d:
                continue
            unit = [q ** (j * m) for j in range(d)]
            wbasis = [q ** (j * m + i) for j in range(d) for i in range(1, m)]
            for wkey in enumerate_rref(self.ctx.fq, (m - 1) * d, extra):
                wvecs = _combine(self.ctx.fq, wkey, wbasis, self.Sq)
                yield tuple(unit + wvecs)


@lru_cache(maxsize=16)
def _enumerator(q, m, k) -> _Enumerator:
    return _Enumerator(context_for(q, m), k)


def _combine(F, keys, basis, Sq: Space) -> list:
    Sn = Space(F, len(basis))
    out = []
    for key in keys:
        co = Sn.coords(int(key))
        v = 0
        for c, b in zip(co, basis):
            if c:
                v = int(Sq.add(v, Sq.scale(int(c), b)))
        out.append(v)
    return out


def _runs(profile):
    """Group consecutive equal entries: [(dim, count), ...]."""
    return [(d, len(list(g))) for d, g in itertools.groupby(profile)]


def _tails(en: _Enumerator, dims):
    runs = _runs(dims)
    if len(runs) == 1 and runs[0][1] == 1:
        for rep in en.iter_orbit_reps(runs[0][0]):
            yield (rep,)
        return
    iters = [list(itertools.combinations_with_replacement(en.orbit_reps(d), c)) for d, c in runs]
    for parts in itertools.product(*iters):
        yield tuple(itertools.chain.from_iterable(parts))


# -- the saturation test used inside the search ------------------------------------------

class _Checker:
    def __init__(self, ctx: FieldContext, k: int, rho: int):
        self.ctx = ctx
        self.k = k
        self.rho = rho
        self.Sq = Space(ctx.fq, ctx.m * k)
        self.Sk = Space(ctx.fqm, k)
        self.size = ctx.Q ** k
        self.scal = np.arange(1, ctx.Q, dtype=np.int64)
        self.xor = ctx.p == 2

    def radius_is_rho(self, bases) -> bool:
        els = np.unique(np.concatenate([self.Sq.span(b)[1:] for b in bases]))
        cone = np.unique(self.Sk.scale(self.scal[:, None], els[None, :]).ravel())
        cur = np.zeros(self.size, dtype=bool)
        cur[0] = True
        count = 1
        for j in range(1, self.rho + 1):
            idx = np.nonzero(cur)[0]
            if self.xor:
                new = np.bitwise_xor(idx[:, None], cone[None, :]).ravel()
            else:
                new = self.Sk.add(idx[:, None], cone[None, :]).ravel()
            cur[new] = True
            c2 = int(np.count_nonzero(cur))
            if c2 == self.size:
                return j == self.rho
            if c2 == count:
                return False
            count = c2
        return False


# -- shards ---------------------------------------------------------------------------

def _shard_iter(en: _Enumerator, profile, first, prune):
    if prune:
        for tail in _tails(en, profile[1:]):
            yield (first,) + tail
    else:
        rest = [list(en.all_subspaces(n)) for n in profile[1:]]
        for tail in itertools.product(*rest):
            yield (first,) + tail


def _run_shard(args):
    (q, m, k, rho, profile, first, prune, deadline, cap) = args
    en = _enumerator(q, m, k)
    chk = _Checker(en.ctx, k, rho)
    n = 0
    for cand in _shard_iter(en, profile, first, prune):
        n += 1
        if chk.radius_is_rho([np.array(b, dtype=np.int64) for b in cand]):
            return cand, n, False
        if (cap is not None and n >= cap) or (deadline is not None and time.monotonic() > deadline):
            return None, n, True
    return None, n, False


def _profiles(L, t, cap, homogeneous, prune):
    if homogeneous:
        if L % t == 0 and L // t <= cap:
            yield (L // t,) * t
        return
    if prune:
        yield from partitions(L, t, cap)
    else:
        for comp in itertools.product(range(1, cap + 1), repeat=t):
            if sum(comp) == L:
                yield comp


def _verify_witness(ctx, k, rho, bases, rep: SearchReport):
    U = QSystem(ctx, k, [np.array(b, dtype=np.int64) for b in bases])
    res = saturation_routes(U, ("dual", "geometric", "sumset"))
    vals = {v for key, v in res.items() if key != "fallback"}
    if vals != {rho}:
        from .errors import InternalDisagreement
        raise InternalDisagreement(f"witness radius check failed: {res}")
    rep.witness = U
    rep.routes = res
    n = U.profile
    sph = sphere_feasibility(ctx.q, ctx.m, k, rho, n)
    quad = quadratic_lower_bound(ctx.q, ctx.m, k, rho, len(n), n)[0]
    rep.bound_check = {"sphere": sph.verdict, "quadratic": quad.verdict}


def shortest_length(q: int, m: int, k: int, rho: int, t: int, homogeneous: bool = False,
                    budget_secs: float | None = None, budget_candidates: int | None = None,
                    jobs: int = 1, prune: bool = True, guard_log2=None) -> SearchReport:
    """s_{q^m/q}(k, rho, t) (or the homogeneous variant) by exhaustive search.

    Lengths ascend from the larger of the two lower bounds.  With prune=False
    every ordered profile and every tuple of subspaces is tried from length t.
    """
    if rho < 1 or k < 1 or t < 1:
        raise BadArgs("need k, rho, t >= 1")
    ctx = context_for(q, m)
    check_guard(k * math.log2(ctx.Q), guard_log2, "q^{mk} point bitmap")
    rep = SearchReport(q, m, k, rho, t, homogeneous)
    t0 = time.monotonic()
    if rho > k:
        rep.status = "infeasible"
        rep.certificate = "every system has radius at most k"
        return rep
    cap = m * k
    L = length_lower_bound(q, m, k, rho, t, homogeneous) if prune else t
    rep.start_length = rep.exhausted_below = L
    deadline = None if budget_secs is None else t0 + budget_secs
    en = _enumerator(q, m, k)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while L <= t * cap:
            shards = []
            for prof in _profiles(L, t, cap, homogeneous, prune):
                if prune and not profile_feasible(q, m, k, rho, prof):
                    rep.pruned += 1
                    continue
                firsts = en.first_blocks(prof[0]) if prune else en.all_subspaces(prof[0])
                for first in firsts:
                    left = None if budget_candidates is None else budget_candidates - rep.candidates
                    shards.append((q, m, k, rho, prof, first, prune, deadline, left))
            found = None
            if pool is None:
                for sh in shards:
                    left = None if budget_candidates is None else budget_candidates - rep.candidates
                    cand, n, out = _run_shard(sh[:-1] + (left,))
                    rep.candidates += n
                    if cand is not None:
                        found = cand
                        break
                    if out:
                        raise _Budget()
            else:
                for cand, n, out in pool.map(_run_shard, shards):
                    rep.candidates += n
                    if cand is not None and found is None:
                        found = cand
                    if out and found is None:
                        raise _Budget()
            if found is not None:
                rep.value = L
                rep.status = "exact"
                rep.seconds = time.monotonic() - t0
                how = "canonical candidates" if prune else "all ordered profiles, no pruning"
                lo = rep.start_length if prune else t
                done = f"lengths {lo}..{L - 1} exhausted ({how})" if L > lo else "no shorter length searched"
                rep.certificate = (f"{done}; lengths below {lo} excluded by the lower bounds"
                                   if prune else done)
                _verify_witness(ctx, k, rho, found, rep)
                return rep
            L += 1
            rep.exhausted_below = L
        rep.status = "infeasible"
        rep.certificate = "no system of any length reaches this radius exactly"
        rep.seconds = time.monotonic() - t0
        return rep
    except _Budget:
        rep.status = "budget"
        rep.seconds = time.monotonic() - t0
        rep.certificate = f"budget exhausted at length {rep.exhausted_below}"
        raise BudgetExhausted(f"s > {rep.exhausted_below - 1}: budget exhausted", rep) from None
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


class _Budget(Exception):
    pass


# -- monotonicity ----------------------------------------------------------------------------

@dataclass
class AuditLine:
    item: str
    lhs: tuple
    rhs: tuple
    lhs_value: int
    rhs_value: int
    holds: bool
    applicable: bool = True          # False when the |n| > k hypothesis fails

    @property
    def violated(self) -> bool:
        return self.applicable and not self.holds

    def text(self) -> str:
        if not self.applicable:
            verdict = f"{'ok' if self.holds else 'fails'} (hypothesis |n| > k not met, not counted)"
        else:
            verdict = "ok" if self.holds else "VIOLATED"
        return (f"{self.item:<12} s{self.lhs}={self.lhs_value} vs s{self.rhs}={self.rhs_value}"
                f"  {verdict}")


def _table_values(table) -> dict:
    out = {}
    if isinstance(table, dict):
        items = table.items()
    else:
        items = (((r.k, r.rho, r.t), r) for r in table)
    for key, val in items:
        if isinstance(val, SearchReport):
            if val.status == "budget":
                raise IncompleteTable(f"entry {key} is only a lower bound")
            val = val.value if val.status == "exact" else None
        out[tuple(key)] = val
    return out


def monotonicity_audit(table, corrected: bool = False) -> list[AuditLine]:
    """Check the monotonicity inequalities over a table {(k, rho, t): s or None}.

    None marks an infeasible entry; pairs touching one are skipped.  Pairs where
    the entry carrying the statement's own k has value <= k are reported with
    applicable=False.
    With corrected=True item 1 is checked in the direction s(k,rho+1,t) <= s(k,rho,t).
    """
    s = _table_values(table)
    out = []

    def add(item, a, b, offset, hyp):
        if a not in s or b not in s or s[a] is None or s[b] is None:
            return
        ok = hyp is None or (s[hyp] is not None and s[hyp] > hyp[0])
        out.append(AuditLine(item, a, b, s[a], s[b], s[a] <= s[b] + offset, ok))

    for (k, rho, t) in sorted(s):
        add("t", (k, rho, t), (k, rho, t + 1), 0, None)
        if corrected:
            add("rho-1(rev)", (k, rho + 1, t), (k, rho, t), 0, (k, rho, t))
        else:
            add("rho-1", (k, rho, t), (k, rho + 1, t), 0, (k, rho, t))
        add("rho-2", (k, rho, t), (k + 1, rho, t), -1, (k, rho, t))
        add("rho-3", (k + 1, rho + 1, t), (k, rho + 1, t), 1, (k, rho + 1, t))
    return out


def s_table(q, m, kmax, rhomax, tmax, **kw) -> dict:
    table = {}
    for k in range(1, kmax + 1):
        for rho in range(1, rhomax + 1):
            for t in range(1, tmax + 1):
                table[k, rho, t] = shortest_length(q, m, k, rho, t, **kw)
    return table
