"""``knot`` command line interface.

Exit status: 0 on success, 1 on internal or resource errors, 2 on bad input.
"""

from __future__ import annotations

import argparse
import os
import sys

from .diagram import pd_emit, realize
from .errors import KnotError, ResourceLimitExceeded
from .jones import jones_reduced, jones_unreduced
from .khovanov import kh_polynomial, render_grid
from .knotcodes import dt_to_gauss, parse_dt
from .pipeline import (
    DB_HEADER,
    STATS_COLUMNS,
    compute_invariants,
    load_census,
    load_invariants,
    persist_invariants,
    scan_targets,
    stats,
    torus_targets,
    twist_targets,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2


def _threads(n):
    if n is None:
        return 1
    if n == 0:
        return os.cpu_count() or 1
    return n


def cmd_parse(args, out):
    d = parse_dt(args.dt)
    D = realize(d)
    out.write(f"dt: {d.numeric()}\n")
    if len(d) <= 26:
        out.write(f"compressed: {d.compressed()}\n")
    out.write(f"gauss: {dt_to_gauss(d)}\n")
    out.write(f"pd: {pd_emit(D)}\n")
    return EXIT_OK


def cmd_jones(args, out):
    D = realize(parse_dt(args.dt))
    workers = _threads(args.threads)
    p = jones_unreduced(D, workers=workers) if args.unreduced else jones_reduced(D, workers=workers)
    out.write((p.to_canonical() if args.format == "canonical" else p.pretty()) + "\n")
    return EXIT_OK


def cmd_kh(args, out):
    D = realize(parse_dt(args.dt))
    field = "gf2" if args.coeffs == "f2" else "rationals"
    table = kh_polynomial(D, coefficients=field, workers=_threads(args.threads))
    if args.format == "canonical":
        out.write(table.to_canonical() + "\n")
    else:
        out.write(render_grid(table))
    return EXIT_OK


def _flag(v):
    return "-" if v is None else ("yes" if v else "no")


def cmd_scan(args, out):
    records = load_census(args.census)
    inv = compute_invariants(records, "jones", workers=_threads(args.threads))
    for rec in inv:
        if rec.error:
            sys.stderr.write(f"warning: {rec.name}: {rec.error}\n")
    if args.targets == "torus":
        targets = torus_targets(args.max_cr)
    else:
        targets = twist_targets(2, max(args.max_cr - 2, 1))
    reports = scan_targets(inv, targets, kh=args.kh)
    out.write("target\tknot\tdt\tjones\tkh_equal\tsame_knot_hint\n")
    for rep in reports:
        for m in rep.matches:
            row = [rep.target.label, m.name, m.dt, rep.target.jones.pretty(),
                   _flag(m.kh_equal_up_to_mirror), _flag(m.is_same_knot_hint)]
            out.write("\t".join(row) + "\n")
    return EXIT_OK


def cmd_compute(args, out):
    records = load_census(args.census)
    cache = load_invariants(args.out) if os.path.exists(args.out) else None
    which = "jones+kh" if args.kh else "jones"
    inv = compute_invariants(records, which, workers=_threads(args.threads), cache=cache)
    persist_invariants(inv, args.out)
    failed = [r for r in inv if r.error]
    for rec in failed:
        sys.stderr.write(f"warning: {rec.name}: {rec.error}\n")
    out.write(f"{len(inv)} records written to {args.out} ({len(failed)} with errors)\n")
    return EXIT_OK


def _load_db_or_census(path, invariant, threads):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
    if first == DB_HEADER:
        return load_invariants(path)
    which = "jones+kh" if invariant == "kh" else "jones"
    return compute_invariants(load_census(path), which, workers=threads)


def cmd_stats(args, out):
    inv = _load_db_or_census(args.db, args.invariant, _threads(args.threads))
    rows = stats(inv, args.invariant, args.max_cr)
    if args.format == "csv":
        out.write(",".join(STATS_COLUMNS) + "\n")
        for r in rows:
            out.write(",".join(r.fields()) + "\n")
    else:
        table = [STATS_COLUMNS] + [r.fields() for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(STATS_COLUMNS))]
        for row in table:
            out.write("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() + "\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="knot", description="Jones and Khovanov invariants of knots given by DT codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--threads", type=int, default=1, help="worker count (0 = one per CPU)")
        sp.set_defaults(func=func)
        return sp

    sp = add("parse", cmd_parse, "validate a DT code and print its other forms")
    sp.add_argument("--dt", required=True)

    sp = add("jones", cmd_jones, "Jones polynomial")
    sp.add_argument("--dt", required=True)
    sp.add_argument("--unreduced", action="store_true")
    sp.add_argument("--format", choices=["pretty", "canonical"], default="pretty")

    sp = add("kh", cmd_kh, "Khovanov polynomial")
    sp.add_argument("--dt", required=True)
    sp.add_argument("--coeffs", choices=["q", "f2"], default="q")
    sp.add_argument("--format", choices=["grid", "canonical"], default="grid")

    sp = add("scan", cmd_scan, "match census Jones polynomials against torus or twist knots")
    sp.add_argument("--census", required=True)
    sp.add_argument("--targets", choices=["torus", "twist"], required=True)
    sp.add_argument("--max-cr", type=int, required=True)
    sp.add_argument("--kh", action="store_true", help="also compare Khovanov polynomials")

    sp = add("compute", cmd_compute, "compute invariants of a census into a database file")
    sp.add_argument("--census", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--kh", action="store_true")

    sp = add("stats", cmd_stats, "uniqueness statistics of a database or census")
    sp.add_argument("--db", required=True)
    sp.add_argument("--invariant", choices=["jones", "kh"], default="jones")
    sp.add_argument("--max-cr", type=int, required=True)
    sp.add_argument("--format", choices=["csv", "pretty"], default="pretty")
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ResourceLimitExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INTERNAL
    except (KnotError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
