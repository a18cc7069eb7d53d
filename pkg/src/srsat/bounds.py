"""Sphere-covering and quadratic lower bounds, f(q), and related helpers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .errors import BadArgs, BadProfiles

SATISFIED, VIOLATED, NA = "satisfied", "violated", "not-applicable"


@lru_cache(maxsize=None)
def gaussian_binomial(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of F_q^a (0 when b > a)."""
    if a < 0 or b < 0 or q < 2:
        raise BadArgs(f"gaussian_binomial needs a, b >= 0 and q >= 2, got ({a}, {b}, {q})")
    if b > a:
        return 0
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass
class BoundEntry:
    name: str
    lhs: object
    rhs: object
    verdict: str
    note: str = ""


@dataclass
class BoundReport:
    q: int
    m: int
    k: int
    rho: int
    t: int
    n: tuple | None
    entries: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return any(e.verdict == VIOLATED for e in self.entries)

    def text(self) -> str:
        prof = ",".join(map(str, self.n)) if self.n else "-"
        lines = [f"q={self.q} m={self.m} k={self.k} rho={self.rho} t={self.t} n={prof}"]
        for e in self.entries:
            lines.append(f"  {e.name:<22} lhs={_fmt(e.lhs):<14} rhs={_fmt(e.rhs):<14} {e.verdict}"
                         + (f"  ({e.note})" if e.note else ""))
        for key, val in self.info.items():
            lines.append(f"  {key:<22} {val}")
        return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def sphere_sum(q: int, n, rho: int) -> int:
    """sum over s with 0 <= s_i <= n_i, |s| = rho of prod_i [n_i, s_i]_q."""
    n = tuple(n)
    # polynomial product in the formal variable tracking |s|
    poly = [1]
    for ni in n:
        row = [gaussian_binomial(ni, s, q) for s in range(ni + 1)]
        new = [0] * (len(poly) + ni)
        for a, x in enumerate(poly):
            if x:
                for b, y in enumerate(row):
                    new[a + b] += x * y
        poly = new
    return poly[rho] if 0 <= rho < len(poly) else 0


def sphere_feasibility(q, m, k, rho, n) -> BoundEntry:
    lhs = q ** (m * rho) * sphere_sum(q, n, rho)
    rhs = q ** (m * k)
    return BoundEntry("sphere", lhs, rhs, SATISFIED if lhs >= rhs else VIOLATED)


def quadratic_term(n) -> Fraction:
    n = tuple(n)
    t = len(n)
    sq = sum((n[j] - n[i]) ** 2 for i in range(t) for j in range(i + 1, t))
    return Fraction(sq, 4 * t)


def quadratic_constant(q: int, t: int) -> int:
    return 2 * t if q == 2 else t


def quadratic_lower_bound(q, m, k, rho, t, n) -> list[BoundEntry]:
    """The quadratic bound (with +2t for q = 2 and +t otherwise), plus its
    homogeneous specialisation when all n_i agree."""
    n = tuple(n)
    if len(n) != t:
        raise BadArgs(f"profile {n} does not have t={t} blocks")
    c = quadratic_constant(q, t)
    N = sum(n)
    lhs = quadratic_term(n) + Fraction(rho * (N - rho), t) + c
    rhs = Fraction(m * (k - rho))
    out = [BoundEntry("quadratic", lhs, rhs, SATISFIED if lhs >= rhs else VIOLATED,
                      f"constant +{c} for q{'=' if q == 2 else '>'}2")]
    if len(set(n)) == 1:
        if rho >= 1:
            c2 = 2 * t * t if q == 2 else t * t
            hr = Fraction(t * m * (k - rho), rho) + rho - Fraction(c2, rho)
            out.append(BoundEntry("quadratic-homogeneous", Fraction(N), hr,
                                  SATISFIED if N >= hr else VIOLATED))
        else:
            out.append(BoundEntry("quadratic-homogeneous", Fraction(N), None, NA, "rho = 0"))
    return out


def f_of_q(q: int, tol: float = 1e-30, prec: int = 50) -> Decimal:
    """prod_{i>=1} (1 - q^-i)^-1, truncated once the tail factor is within tol."""
    if q < 2:
        raise BadArgs("f(q) needs q >= 2")
    if tol <= 0:
        raise BadArgs("tolerance must be positive")
    with localcontext() as ctx:
        ctx.prec = prec
        qd = Decimal(q)
        val = Decimal(1)
        i = 0
        while True:
            i += 1
            val /= 1 - qd ** -i
            # log of the remaining factors is at most 2 q^-i / (q - 1)
            tail = 2 * qd ** -i / (qd - 1)
            if val * (tail.exp() - 1) < Decimal(tol):
                return +val


def fq_factor(q: int, t: int, tol: float = 1e-30) -> Decimal:
    """q f(q)^t / (q - 1), the constant the quadratic bound absorbs."""
    with localcontext() as ctx:
        ctx.prec = 50
        return Decimal(q) * f_of_q(q, tol) ** t / (q - 1)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


@dataclass
class LexVerdict:
    squares: int
    lex: int

    @property
    def agree(self) -> bool:
        # sum of squares of n <= that of n'  iff  n <= n' lexicographically
        return (self.squares <= 0) == (self.lex <= 0)


def _pair_squares(n) -> int:
    return sum((n[j] - n[i]) ** 2 for i in range(len(n)) for j in range(i + 1, len(n)))


def lex_sum_squares_compare(n, n2) -> LexVerdict:
    n, n2 = tuple(n), tuple(n2)
    if len(n) != len(n2) or sum(n) != sum(n2):
        raise BadProfiles("profiles need the same number of blocks and the same sum")
    for p in (n, n2):
        if any(a < b for a, b in zip(p, p[1:])) or any(x < 1 for x in p):
            raise BadProfiles(f"profile {p} is not nonincreasing and positive")
    return LexVerdict(_cmp(_pair_squares(n), _pair_squares(n2)), _cmp(n, n2))


def partitions(N: int, t: int, cap: int | None = None):
    """Nonincreasing t-tuples of positive integers summing to N (entries <= cap)."""
    def rec(left, parts, hi):
        if parts == 0:
            if left == 0:
                yield ()
            return
        for x in range(min(hi, left - (parts - 1)), 0, -1):
            if x * parts < left:
                break
            for rest in rec(left - x, parts - 1, x):
                yield (x,) + rest
    top = N if cap is None else cap
    yield from rec(N, t, top)


def lex_lemma_disagreements(tmax: int = 4, Nmax: int = 10):
    bad = []
    for t in range(1, tmax + 1):
        for N in range(t, Nmax + 1):
            profs = list(partitions(N, t))
            for a, b in itertools.product(profs, repeat=2):
                v = lex_sum_squares_compare(a, b)
                if not v.agree:
                    bad.append((a, b, v))
    return bad


def homogeneous_sandwich(h: int, r: int, t: int, m: int) -> tuple[Fraction, int]:
    if not (h >= r >= 1 and t >= 1 and m >= 1):
        raise BadArgs("need h >= r >= 1, t >= 1, m >= 1")
    lower = t * (Fraction(m * (h - r), r) + r)
    upper = t * (m * (h - r) + r)
    return lower, upper


def bound_report(q, m, k, rho, t, n=None) -> BoundReport:
    rep = BoundReport(q, m, k, rho, t, tuple(n) if n is not None else None)
    if n is not None:
        rep.entries.append(sphere_feasibility(q, m, k, rho, n))
        rep.entries.extend(quadratic_lower_bound(q, m, k, rho, t, n))
    rep.info["q f(q)^t/(q-1)"] = f"{fq_factor(q, t):.9f}"
    target = q ** (2 * t) if q == 2 else q ** t
    rep.info["absorbed into constant"] = "yes" if fq_factor(q, t) <= target else "no"
    return rep


def profile_feasible(q, m, k, rho, n, quadratic: bool = True) -> bool:
    if sphere_feasibility(q, m, k, rho, n).verdict == VIOLATED:
        return False
    if quadratic and quadratic_lower_bound(q, m, k, rho, len(n), n)[0].verdict == VIOLATED:
        return False
    return True


def length_lower_bound(q, m, k, rho, t, homogeneous=False, quadratic=True) -> int:
    """Least total length L admitting some profile (t blocks, each of size at most mk)
    that passes the lower bounds."""
    cap = m * k
    L = t
    while L <= t * cap:
        if homogeneous:
            profs = [(L // t,) * t] if L % t == 0 else []
        else:
            profs = partitions(L, t, cap)
        if any(profile_feasible(q, m, k, rho, n, quadratic) for n in profs):
            return L
        L += 1
    raise BadArgs("no feasible length")
