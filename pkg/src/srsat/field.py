"""Exact arithmetic in F_q = F_{p^e} and F_{q^m}.

Elements are integer codes. An element of an extension F_B[x]/(f) of degree d
with coefficients c_0..c_{d-1} (low degree first) has code sum c_j * B**j, and
every coefficient is itself a code of the base field. Unrolled all the way down
the code is the base-p digit string of the element, so addition is digitwise
mod p at every level (plain XOR in characteristic 2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .errors import BadArgs, DivisionByZero, InternalIrreducibilityFailure, NotPrime, TooLarge

_TABLE_LIMIT = 256  # full add/mul tables up to this field order


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def int_digits(x: int, base: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        x, r = divmod(x, base)
        out.append(r)
    return out


def from_digits(ds, base: int) -> int:
    v = 0
    for d in reversed(list(ds)):
        v = v * base + int(d)
    return v


class GF:
    """A finite field, either prime or a simple extension of another GF."""

    def __init__(self, p: int, base: GF | None = None, modulus: tuple[int, ...] | None = None):
        self.p = p
        self.base = base
        if base is None:
            self.degree = 1
            self.order = p
            self.modulus = None
            self.ndigits = 1
        else:
            self.modulus = tuple(int(c) for c in modulus)
            self.degree = len(self.modulus) - 1
            self.order = base.order ** self.degree
            self.ndigits = base.ndigits * self.degree
        self._build()

    # -- construction -------------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> GF:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return cls(p)

    @classmethod
    def extension(cls, base: GF, degree: int, modulus=None) -> GF:
        if degree < 1:
            raise BadArgs("extension degree must be positive")
        if modulus is None:
            modulus = lex_least_irreducible(base, degree)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != degree + 1 or modulus[-1] != 1:
                raise BadArgs(f"modulus must be monic of degree {degree}")
            if any(not 0 <= c < base.order for c in modulus):
                raise BadArgs("modulus coefficient out of range")
            if not is_irreducible(base, modulus):
                raise BadArgs(f"modulus {modulus} is reducible over F_{base.order}")
        return cls(base.p, base, modulus)

    def _build(self):
        Q = self.order
        if self.base is None:
            self._mul_raw = lambda a, b: (a * b) % self.p
        else:
            self._mul_raw = self._polymul
        self.gen = self._find_generator()
        exp = [1] * (2 * (Q - 1))
        x = 1
        for i in range(1, Q - 1):
            x = self._mul_raw(x, self.gen)
            exp[i] = x
        if Q > 1 and self._mul_raw(x, self.gen) != 1:
            raise InternalIrreducibilityFailure("generator power cycle does not close")
        for i in range(Q - 1, 2 * (Q - 1)):
            exp[i] = exp[i - (Q - 1)]
        log = [0] * Q
        for i in range(Q - 1):
            log[exp[i]] = i
        if len(set(exp[: Q - 1])) != Q - 1:
            raise InternalIrreducibilityFailure("chosen generator is not primitive")
        self._exp_l = exp
        self._log_l = log
        self._exp = np.array(exp, dtype=np.int64)
        self._log = np.array(log, dtype=np.int64)
        self._add_t = self._mul_t = None
        if Q <= _TABLE_LIMIT:
            a = np.arange(Q, dtype=np.int64)
            self._add_t = self._digit_add(a[:, None], a[None, :])
            self._mul_t = self._mul_vec(a[:, None], a[None, :])

    def _polymul(self, a: int, b: int) -> int:
        B = self.base
        d = self.degree
        ca = int_digits(a, B.order, d)
        cb = int_digits(b, B.order, d)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                if y:
                    prod[i + j] = B.add1(prod[i + j], B.mul1(x, y))
        mod = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d):
                    if mod[j]:
                        prod[i - d + j] = B.sub1(prod[i - d + j], B.mul1(c, mod[j]))
                prod[i] = 0
        return from_digits(prod[:d], B.order)

    def _pow_raw(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            n >>= 1
        return r

    def _find_generator(self) -> int:
        Q = self.order
        if Q == 2:
            return 1
        exps = [(Q - 1) // r for r in prime_factors(Q - 1)]
        for g in range(2, Q):
            if all(self._pow_raw(g, e) != 1 for e in exps):
                return g
        raise InternalIrreducibilityFailure(f"no primitive element in field of order {Q}")

    # -- scalar arithmetic --------------------------------------------------

    def add1(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.base is None:
            return (a + b) % self.p
        if self._add_t is not None:
            return int(self._add_t[a, b])
        p = self.p
        r, pw = 0, 1
        for _ in range(self.ndigits):
            r += ((a % p + b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return r

    def neg1(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        r, pw = 0, 1
        for _ in range(self.ndigits):
            r += ((p - a % p) % p) * pw
            a //= p
            pw *= p
        return r

    def sub1(self, a: int, b: int) -> int:
        return self.add1(a, self.neg1(b))

    def mul1(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_l[self._log_l[a] + self._log_l[b]]

    def inv1(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp_l[(self.order - 1 - self._log_l[a]) % (self.order - 1)]

    def pow1(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp_l[(self._log_l[a] * n) % (self.order - 1)]

    def log1(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("log of zero")
        return self._log_l[a]

    def exp1(self, i: int) -> int:
        return self._exp_l[i % (self.order - 1)]

    # -- vectorised arithmetic ---------------------------------------------

    def _digit_add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        p = self.p
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.ndigits):
            r += ((a // pw) % p + (b // pw) % p) % p * pw
            pw *= p
        return r

    def _mul_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add_t is not None:
            return self._add_t[a, b]
        return self._digit_add(a, b)

    def mul(self, a, b):
        if self._mul_t is not None:
            return self._mul_t[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)]
        return self._mul_vec(a, b)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        p = self.p
        r = np.zeros_like(a)
        pw = 1
        for _ in range(self.ndigits):
            r += ((p - (a // pw) % p) % p) * pw
            pw *= p
        return r

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def __repr__(self):
        return f"GF({self.order})"


# -- polynomials over a GF (coefficient lists, low degree first) -------------

def poly_eval(F: GF, coeffs, x: int) -> int:
    r = 0
    for c in reversed(coeffs):
        r = F.add1(F.mul1(r, x), c)
    return r


def poly_rem(F: GF, f, g) -> list[int]:
    """Remainder of f modulo the monic polynomial g."""
    r = list(f)
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            for j in range(dg + 1):
                if g[j]:
                    r[i - dg + j] = F.sub1(r[i - dg + j], F.mul1(c, g[j]))
    return r[:dg]


def is_irreducible(F: GF, f) -> bool:
    """Trial-division irreducibility test for a monic polynomial over F."""
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    if any(poly_eval(F, f, a) == 0 for a in range(F.order)):
        return False
    for j in range(2, d // 2 + 1):
        for low in itertools.product(range(F.order), repeat=j):
            if not any(poly_rem(F, f, list(low) + [1])):
                return False
    return True


def lex_least_irreducible(F: GF, degree: int) -> tuple[int, ...]:
    """Monic irreducible of the given degree with the smallest integer value
    sum c_i * |F|**i (so x^4+x+1 precedes x^4+x^3+1 over F_2)."""
    B = F.order
    for v in range(B ** degree):
        coeffs = int_digits(v, B, degree)
        if degree > 1 and coeffs[0] == 0:
            continue
        f = tuple(coeffs) + (1,)
        if is_irreducible(F, f):
            return f
    raise InternalIrreducibilityFailure(f"no irreducible polynomial of degree {degree} over F_{B}")


# -- the F_p < F_q < F_{q^m} tower -------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldContext:
    """The tower F_p <= F_q <= F_{q^m}. Immutable; safe to share."""

    p: int
    e: int
    m: int
    fq: GF
    fqm: GF

    @property
    def q(self) -> int:
        return self.fq.order

    @property
    def Q(self) -> int:
        return self.fqm.order

    @property
    def fq_poly(self) -> tuple[int, ...]:
        return self.fq.modulus

    @property
    def fqm_poly(self) -> tuple[int, ...]:
        return self.fqm.modulus

    @property
    def generator(self) -> int:
        return self.fqm.gen

    def key(self):
        return (self.p, self.e, self.m, self.fq_poly, self.fqm_poly)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FieldContext(F_{self.Q} over F_{self.q}, p={self.p})"

    def element(self, coeffs) -> int:
        """Code of sum coeffs[j] * a^j, a the adjoined root of the F_q-modulus."""
        if len(coeffs) != self.m:
            raise BadArgs(f"expected {self.m} F_q coefficients")
        return from_digits(coeffs, self.q)

    @property
    def alpha(self) -> int:
        """Code of the adjoined root (equal to the generator only by accident)."""
        return self.q if self.m > 1 else 0


def field_create(p: int, e: int = 1, m: int = 1, *, fq_poly=None, fqm_poly=None,
                 guard_log2=None) -> FieldContext:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or m < 1:
        raise BadArgs("e and m must be positive")
    limit = config.field_guard_log2(guard_log2)
    if e * m * math.log2(p) > limit:
        raise TooLarge(f"q^m = {p}^{e * m} exceeds 2^{limit:g}", limit="q^m",
                       knob=config.FIELD_ENV)
    return _field_create_cached(p, e, m,
                                None if fq_poly is None else tuple(fq_poly),
                                None if fqm_poly is None else tuple(fqm_poly))


@lru_cache(maxsize=64)
def _field_create_cached(p, e, m, fq_poly, fqm_poly):
    fp = GF.prime(p)
    fq = GF.extension(fp, e, fq_poly)
    fqm = GF.extension(fq, m, fqm_poly)
    return FieldContext(p, e, m, fq, fqm)


def arith(ctx: FieldContext, op: str, *operands):
    F = ctx.fqm
    if op == "pow":
        a, n = int(operands[0]), int(operands[1])
        if not 0 <= a < F.order:
            raise BadArgs(f"{a} is not an element code of F_{F.order}")
        return F.pow1(a, n)
    ops = [int(x) for x in operands]
    for x in ops:
        if not 0 <= x < F.order:
            raise BadArgs(f"{x} is not an element code of F_{F.order}")
    if op == "add":
        return F.add1(*ops)
    if op == "sub":
        return F.sub1(*ops)
    if op == "mul":
        return F.mul1(*ops)
    if op == "neg":
        return F.neg1(*ops)
    if op == "inv":
        return F.inv1(*ops)
    if op == "frobenius_q":
        return F.pow1(ops[0], ctx.q)
    raise BadArgs(f"unknown operation {op!r}")


def fq_coords(ctx: FieldContext, x: int) -> tuple[int, ...]:
    return tuple(int_digits(int(x), ctx.q, ctx.m))


def extend(F: GF, degree: int, modulus=None) -> GF:
    """Degree-``degree`` extension of an arbitrary GF (used for F_{q^{mk}} over F_{q^m})."""
    return GF.extension(F, degree, modulus)


def prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p^e."""
    fs = prime_factors(q) if q >= 2 else []
    if len(fs) != 1:
        raise NotPrime(f"{q} is not a prime power")
    e = round(math.log(q, fs[0]))
    return fs[0], e


def context_for(q: int, m: int, guard_log2=None) -> FieldContext:
    p, e = prime_power(q)
    return field_create(p, e, m, guard_log2=guard_log2)
