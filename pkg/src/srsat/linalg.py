"""Linear algebra over a GF, with vectors of F^n stored as integer indices.

A vector (x_0, ..., x_{n-1}) has index sum x_j * |F|**j. Because field codes
are base-p digit strings, the index of a vector in F_{q^m}^k is the same
integer as the index of its F_q-expansion in F_q^{mk}; the two views share
one representation and addition is digitwise mod p in both.
"""

from __future__ import annotations

import itertools

import numpy as np

from .field import GF


class Space:
    """F^n with vectors as integer indices."""

    def __init__(self, F: GF, n: int):
        self.F = F
        self.n = n
        self.size = F.order ** n
        self._pows = np.array([F.order ** j for j in range(n)], dtype=np.int64)
        self._ndig = F.ndigits * n

    def coords(self, v):
        v = np.asarray(v, dtype=np.int64)
        return (v[..., None] // self._pows) % self.F.order

    def index(self, coords):
        c = np.asarray(coords, dtype=np.int64)
        return c @ self._pows if c.ndim else c

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.F.p
        if p == 2:
            return np.bitwise_xor(a, b)
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self._ndig):
            r += ((a // pw) % p + (b // pw) % p) % p * pw
            pw *= p
        return r

    def neg(self, a):
        return self.scale(self.F.neg1(1), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, c, v):
        """Scalar(s) c times vector(s) v, broadcasting."""
        c = np.asarray(c, dtype=np.int64)
        co = self.coords(v)
        return self.index(self.F.mul(c[..., None], co))

    def span(self, basis) -> np.ndarray:
        """Sorted array of all F-linear combinations of the given vectors."""
        elems = np.zeros(1, dtype=np.int64)
        scalars = np.arange(self.F.order, dtype=np.int64)
        for b in basis:
            mult = self.scale(scalars, int(b))
            elems = np.unique(self.add(elems[:, None], mult[None, :]).ravel())
        return elems

    def dot(self, h, v):
        """Standard bilinear form h . v for vectors given as indices."""
        hc = self.coords(h)
        vc = self.coords(v)
        prod = self.F.mul(hc, vc)
        out = prod[..., 0]
        for j in range(1, self.n):
            out = self.F.add(out, prod[..., j])
        return out

    def normalize(self, v):
        """Projective normal form: first nonzero coordinate scaled to 1 (0 stays 0)."""
        v = np.atleast_1d(np.asarray(v, dtype=np.int64))
        co = self.coords(v)
        nz = co != 0
        first = np.argmax(nz, axis=-1)
        lead = np.take_along_axis(co, first[..., None], axis=-1)[..., 0]
        lead = np.where(lead == 0, 1, lead)
        return self.scale(self.F.inv(lead), v)


def rref(F: GF, M):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2 or A.size == 0:
        return A.reshape(0, A.shape[-1] if A.ndim == 2 else 0), []
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = F.mul(F.inv1(int(A[r, c])), A[r])
        fac = A[:, c].copy()
        fac[r] = 0
        if np.any(fac):
            A = F.sub(A, F.mul(fac[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: GF, M, ncols: int | None = None) -> np.ndarray:
    """Rows spanning {y : M y^T = 0}."""
    M = np.asarray(M, dtype=np.int64)
    if ncols is None:
        ncols = M.shape[1]
    if M.size == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(F, M)
    free = [c for c in range(ncols) if c not in piv]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for row, f in enumerate(free):
        out[row, f] = 1
        for i, pc in enumerate(piv):
            out[row, pc] = F.neg1(int(R[i, f]))
    return out


def matmul(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for j in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, j][:, None], B[j][None, :]))
    return out


def rref_key(space: Space, vectors) -> tuple[int, ...]:
    """Canonical key of the F-span of the given index vectors: RREF rows as indices."""
    vecs = [int(v) for v in vectors]
    if not vecs:
        return ()
    M = space.coords(np.array(vecs, dtype=np.int64))
    R, _ = rref(space.F, M)
    return tuple(int(x) for x in space.index(R))


def enumerate_rref(F: GF, D: int, r: int):
    """Yield every r-dimensional subspace of F^D once, as a tuple of RREF row indices.

    Order is deterministic: pivot sets in lexicographic order, then free entries
    in product order.
    """
    B = F.order
    if r == 0:
        yield ()
        return
    if r > D:
        return
    pw = [B ** j for j in range(D)]
    for piv in itertools.combinations(range(D), r):
        pset = set(piv)
        free = [[c for c in range(piv[i] + 1, D) if c not in pset] for i in range(r)]
        slots = [(i, c) for i in range(r) for c in free[i]]
        base_rows = [pw[piv[i]] for i in range(r)]
        for vals in itertools.product(range(B), repeat=len(slots)):
            rows = list(base_rows)
            for (i, c), v in zip(slots, vals):
                if v:
                    rows[i] += v * pw[c]
            yield tuple(rows)


def count_subspaces(F: GF, D: int, r: int) -> int:
    from .bounds import gaussian_binomial
    return gaussian_binomial(D, r, F.order)
