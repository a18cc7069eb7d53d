"""SRC v1 (codes) and SRS v1 (systems) text formats."""

from __future__ import annotations

import numpy as np

from .codes import SumRankCode
from .errors import FormatError, SumRankError
from .field import FieldContext, field_create
from .linalg import Space
from .systems import QSystem

SRC_MAGIC = "SRC v1"
SRS_MAGIC = "SRS v1"


def _header(magic, ctx: FieldContext, k, profile) -> list[str]:
    return [magic,
            f"{ctx.p} {ctx.e} {ctx.m} {k} {len(profile)}",
            " ".join(map(str, profile)),
            ",".join(map(str, ctx.fq_poly)) + " " + ",".join(map(str, ctx.fqm_poly))]


def dumps_code(C: SumRankCode) -> str:
    lines = _header(SRC_MAGIC, C.ctx, C.k, C.profile)
    lines += [" ".join(map(str, row)) for row in C.G.tolist()]
    return "\n".join(lines) + "\n"


def dumps_system(U: QSystem) -> str:
    lines = _header(SRS_MAGIC, U.ctx, U.k, U.profile)
    Sk = U.fqm_space
    for b in U.bases:
        M = Sk.coords(b).T                      # k x n_i, columns are the basis vectors
        lines += [" ".join(map(str, row)) for row in M.tolist()]
    return "\n".join(lines) + "\n"


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(x) for x in line.split()]
    except ValueError:
        raise FormatError(f"bad integers in {what}: {line!r}") from None


def _parse_header(lines):
    if len(lines) < 4:
        raise FormatError("truncated header")
    magic = lines[0].strip()
    if magic not in (SRC_MAGIC, SRS_MAGIC):
        raise FormatError(f"unknown magic {magic!r}")
    head = _ints(lines[1], "parameter line")
    if len(head) != 5:
        raise FormatError("parameter line needs p e m k t")
    p, e, m, k, t = head
    profile = _ints(lines[2], "profile line")
    if len(profile) != t:
        raise FormatError(f"profile has {len(profile)} entries, t = {t}")
    polys = lines[3].split()
    if len(polys) != 2:
        raise FormatError("polynomial line needs two comma-separated lists")
    try:
        fq_poly, fqm_poly = (tuple(int(c) for c in s.split(",")) for s in polys)
        ctx = field_create(p, e, m, fq_poly=fq_poly, fqm_poly=fqm_poly)
    except ValueError:
        raise FormatError("bad polynomial coefficients") from None
    except SumRankError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad field description: {exc}") from None
    return magic, ctx, k, profile


def loads(text: str):
    """Parse either format; returns a SumRankCode or a QSystem."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    magic, ctx, k, profile = _parse_header(lines)
    body = [_ints(ln, "matrix row") for ln in lines[4:]]
    if magic == SRC_MAGIC:
        if len(body) != k:
            raise FormatError(f"expected {k} generator rows, found {len(body)}")
        N = sum(profile)
        if any(len(r) != N for r in body):
            raise FormatError(f"generator rows must have {N} entries")
        G = np.array(body, dtype=np.int64).reshape(k, N)
        return SumRankCode(ctx, tuple(profile), G)
    if len(body) != k * len(profile):
        raise FormatError(f"expected {k * len(profile)} basis rows, found {len(body)}")
    Sk = Space(ctx.fqm, k)
    bases = []
    for i, ni in enumerate(profile):
        rows = body[i * k:(i + 1) * k]
        if any(len(r) != ni for r in rows):
            raise FormatError(f"block {i} rows must have {ni} entries")
        M = np.array(rows, dtype=np.int64)
        if np.any((M < 0) | (M >= ctx.Q)):
            raise FormatError("entry is not an element code")
        bases.append(Sk.index(M.T))
    return QSystem(ctx, k, bases)


def dumps(obj) -> str:
    if isinstance(obj, SumRankCode):
        return dumps_code(obj)
    if isinstance(obj, QSystem):
        return dumps_system(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def read(path):
    with open(path, encoding="ascii") as fh:
        return loads(fh.read())


def write(obj, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(obj))
