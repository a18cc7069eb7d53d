"""Command line interface: srsat VERB ..."""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import config, io
from .bounds import bound_report, fq_factor
from .codes import SumRankCode, covering_radius, is_minimal_code
from .constructions import build_Ahr, build_deLRS, build_Gt, subgeometry_partition
from .errors import BudgetExhausted, SumRankError, TooLarge
from .field import context_for
from .search import SearchReport, monotonicity_audit, shortest_length
from .systems import QSystem, code_from_system, is_cutting, saturation_routes, system_from_code

OK, FALSE, USAGE, GUARD = 0, 1, 2, 3

BOUNDS_COLUMNS = ["q", "m", "k", "rho", "t", "profile", "bound", "lhs", "rhs", "verdict"]
SEARCH_COLUMNS = ["q", "m", "k", "rho", "t", "homogeneous", "value", "status", "profile",
                  "candidates", "pruned", "seconds"]


class UsageError(Exception):
    pass


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _as_system(obj) -> QSystem:
    return obj if isinstance(obj, QSystem) else system_from_code(obj)


def _as_code(obj) -> SumRankCode:
    return obj if isinstance(obj, SumRankCode) else code_from_system(obj)


def _emit(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


# -- verbs ------------------------------------------------------------------------------

def cmd_radius(args) -> int:
    C = _as_code(io.read(args.file))
    print(f"covering radius: {covering_radius(C)}")
    return OK


def cmd_saturate(args) -> int:
    U = _as_system(io.read(args.file))
    res = saturation_routes(U)
    vals = sorted({v for k, v in res.items() if k != "fallback"})
    routes = ", ".join(f"{k}={v}" for k, v in res.items() if k != "fallback")
    if len(vals) != 1:
        print(f"routes disagree: {routes}")
        return FALSE
    rho = vals[0]
    note = f" ({res['fallback']})" if "fallback" in res else ""
    if args.rho is None:
        print(f"saturation radius: {rho} [{routes}; agree]{note}")
        return OK
    ok = rho <= args.rho
    print(f"{'yes' if ok else 'no'}: radius {rho} {'<=' if ok else '>'} {args.rho} [{routes}; agree]{note}")
    return OK if ok else FALSE


def cmd_cutting(args) -> int:
    U = _as_system(io.read(args.file))
    ok, h = is_cutting(U)
    if ok:
        print("cutting: yes")
        return OK
    coords = U.fqm_space.coords(h).tolist()
    print(f"cutting: no; hyperplane with normal {coords} is not spanned")
    return FALSE


def cmd_minimal(args) -> int:
    C = _as_code(io.read(args.file))
    ok, wit = is_minimal_code(C)
    if ok:
        print("minimal: yes")
        return OK
    c, c2 = wit
    print(f"minimal: no; supp({c2.tolist()}) is inside supp({c.tolist()})")
    return FALSE


def cmd_bounds(args) -> int:
    n = args.n
    if n is not None and len(n) != args.t:
        raise UsageError(f"-n has {len(n)} entries but -t is {args.t}")
    rep = bound_report(args.q, args.m, args.k, args.r, args.t, n)
    tol = config.fq_tolerance(args.fq_tol)
    rep.info["q f(q)^t/(q-1)"] = f"{fq_factor(args.q, args.t, tol):.9f}"
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(BOUNDS_COLUMNS)
        prof = ",".join(map(str, n)) if n else ""
        for e in rep.entries:
            w.writerow([args.q, args.m, args.k, args.r, args.t, prof, e.name,
                        _fmt(e.lhs), _fmt(e.rhs), e.verdict])
    else:
        print(rep.text())
    return FALSE if rep.violated else OK


def _fmt(x):
    from .bounds import _fmt as f
    return "" if x is None else f(x)


def cmd_construct(args) -> int:
    ctx = context_for(args.q, args.m)
    if args.kind == "ahr":
        obj = build_Ahr(ctx, args.h, args.r)
    elif args.kind == "gt":
        obj = build_Gt(ctx, args.h, args.r, args.t)
    elif args.kind == "delrs":
        obj = build_deLRS(ctx)
    else:
        part = subgeometry_partition(args.q, args.m, args.k)
        obj = part.system
        obj.tags.update(part.tags)
    _emit(io.dumps(obj), args.output)
    if args.output not in (None, "-"):
        status = obj.tags.get("status", "unverified")
        print(f"wrote {args.output} ({status})", file=sys.stderr)
    return OK


def _search_row(r: SearchReport):
    return [r.q, r.m, r.k, r.rho, r.t, int(r.homogeneous),
            "" if r.value is None else r.value, r.status,
            ",".join(map(str, r.profile)) if r.profile else "",
            r.candidates, r.pruned, f"{r.seconds:.3f}"]


def cmd_search(args) -> int:
    reports = []
    code = OK
    for k in args.k:
        for rho in args.r:
            for t in args.t:
                try:
                    rep = shortest_length(args.q, args.m, k, rho, t, homogeneous=args.homogeneous,
                                          budget_secs=args.budget_secs,
                                          budget_candidates=args.budget_candidates,
                                          jobs=args.jobs, prune=not args.no_prune)
                except BudgetExhausted as exc:
                    rep = exc.report
                    code = GUARD
                print(rep.text())
                reports.append(rep)
    if args.csv:
        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if new:
                w.writerow(SEARCH_COLUMNS)
            for rep in reports:
                w.writerow(_search_row(rep))
    if args.witness:
        wits = [r for r in reports if r.witness is not None]
        if len(wits) == 1:
            io.write(wits[0].witness, args.witness)
        else:
            base, ext = os.path.splitext(args.witness)
            for r in wits:
                io.write(r.witness, f"{base}_k{r.k}_r{r.rho}_t{r.t}{ext or '.srs'}")
    return code


def cmd_audit(args) -> int:
    table = {}
    with open(args.table, newline="", encoding="ascii") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(SEARCH_COLUMNS) - set(rows[0]):
        raise UsageError(f"{args.table} is not a search CSV (columns {','.join(SEARCH_COLUMNS)})")
    keys = {(r["q"], r["m"], r["homogeneous"]) for r in rows}
    if len(keys) != 1:
        raise UsageError("table mixes q, m or homogeneous settings")
    for r in rows:
        key = (int(r["k"]), int(r["rho"]), int(r["t"]))
        if r["status"] == "budget":
            from .errors import IncompleteTable
            raise IncompleteTable(f"entry {key} is only a lower bound")
        table[key] = int(r["value"]) if r["status"] == "exact" else None
    lines = monotonicity_audit(table, corrected=args.corrected)
    for ln in lines:
        print(ln.text())
    bad = sum(ln.violated for ln in lines)
    print(f"{len(lines)} checks, {bad} violations")
    return FALSE if bad else OK


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="srsat", description="Sum-rank codes and saturating systems.")
    ap.add_argument("--guard-log2", type=float, default=None,
                    help=f"log2 of the enumeration guard (env {config.ENUM_ENV}, default "
                         f"{config.DEFAULT_ENUM_GUARD_LOG2})")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("radius", help="covering radius of a code")
    p.add_argument("file")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("saturate", help="saturation radius of a system (both routes)")
    p.add_argument("file")
    p.add_argument("--rho", type=int, default=None)
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("cutting", help="is the system cutting")
    p.add_argument("file")
    p.set_defaults(func=cmd_cutting)

    p = sub.add_parser("minimal", help="is the code minimal")
    p.add_argument("file")
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("bounds", help="evaluate the lower bounds")
    for flag in ("-q", "-m", "-k", "-r", "-t"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("-n", type=_int_list, default=None, help="profile, e.g. 3,2,2")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--fq-tol", type=float, default=None,
                   help=f"truncation tolerance for f(q) (env {config.FQ_TOL_ENV})")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="write a constructed code or system")
    p.add_argument("kind", choices=["ahr", "gt", "partition", "delrs"])
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--h", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--k", type=int, default=None, help="dimension (partition)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive shortest-length search")
    p.add_argument("-q", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-k", type=_int_list, required=True)
    p.add_argument("-r", type=_int_list, required=True)
    p.add_argument("-t", type=_int_list, required=True)
    p.add_argument("--homogeneous", action="store_true")
    p.add_argument("--budget-secs", type=float, default=None)
    p.add_argument("--budget-candidates", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-prune", action="store_true", help="disable canonical pruning")
    p.add_argument("--csv", default=None, help="append result rows to this CSV")
    p.add_argument("--witness", default=None, help="save witness system(s) here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("audit", help="monotonicity audit of a search CSV")
    p.add_argument("table")
    p.add_argument("--corrected", action="store_true",
                   help="check rho-monotonicity as s(k,rho+1,t) <= s(k,rho,t)")
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.guard_log2 is not None:
        os.environ[config.ENUM_ENV] = str(args.guard_log2)
    if args.verb == "construct" and args.kind == "partition" and args.k is None:
        ap.error("construct partition needs --k")
    try:
        return args.func(args)
    except (TooLarge, BudgetExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return GUARD
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except (SumRankError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
