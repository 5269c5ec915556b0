"""Census files, invariant databases, target scans and collision statistics."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .diagram import realize
from .errors import (
    FormatError,
    InvalidDT,
    KnotError,
    MissingInvariant,
    ParseError,
    ResourceLimitExceeded,
)
from .families import torus_dt, twist_dt
from .jones import enumerate_torus_candidates, jones_reduced, jones_torus, jones_twist
from .khovanov import equal_up_to_mirror, kh_polynomial, max_crossings
from .knotcodes import DTCode, dt_canonical, parse_dt
from .polynomial import BigradedPoly, LaurentPoly, poly_from_canonical_string

__all__ = [
    "CensusRecord",
    "InvariantRecord",
    "Target",
    "MatchEntry",
    "MatchReport",
    "StatsRow",
    "bundled_census_path",
    "load_census",
    "parse_census",
    "compute_invariants",
    "torus_targets",
    "twist_targets",
    "explicit_target",
    "scan_targets",
    "mirror_canonical",
    "stats",
    "persist_invariants",
    "load_invariants",
    "DB_HEADER",
    "STATS_COLUMNS",
]

DB_HEADER = "#khdetect-v1"


@dataclass(frozen=True)
class CensusRecord:
    name: str
    dt: DTCode

    @property
    def crossings(self):
        return len(self.dt)


def _dt_text(d):
    """Compressed form when the letters suffice, bracketed numeric otherwise."""
    if len(d) <= 26:
        return d.compressed()
    return "[" + d.numeric() + "]"


@dataclass(frozen=True)
class InvariantRecord:
    name: str
    dt: str
    jones: str | None
    kh: str | None = None
    error: str | None = field(default=None, compare=False)

    @property
    def crossings(self):
        return len(parse_dt(self.dt))

    @property
    def jones_poly(self):
        return None if self.jones is None else poly_from_canonical_string(self.jones)

    @property
    def kh_poly(self):
        return None if self.kh is None else poly_from_canonical_string(self.kh, bigraded=True)


def bundled_census_path():
    return str(resources.files("khdetect") / "data" / "mini_census.txt")


def parse_census(lines):
    records = []
    seen = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise FormatError("expected '<name> <DT code>'", lineno)
        name, code = parts[0], parts[1].strip()
        if name in seen:
            raise FormatError(f"duplicate name {name!r} (first on line {seen[name]})", lineno)
        if code.startswith("["):
            if not code.endswith("]"):
                raise FormatError("numeric DT codes must be enclosed in brackets", lineno)
        elif not code.isalpha():
            raise FormatError(f"malformed DT code {code!r}", lineno)
        try:
            dt = parse_dt(code)
        except InvalidDT as exc:
            err = InvalidDT(f"line {lineno}: {exc}")
            err.line = lineno
            raise err from None
        except ParseError as exc:
            raise FormatError(str(exc), lineno) from None
        except KnotError as exc:
            raise FormatError(str(exc), lineno) from None
        seen[name] = lineno
        records.append(CensusRecord(name, dt))
    return records


def load_census(path):
    with open(path, encoding="utf-8") as fh:
        return parse_census(fh)


def _compute_one(args):
    record, which, cached, limit = args
    jones = cached.jones if cached is not None else None
    kh = cached.kh if cached is not None else None
    want_kh = which == "jones+kh"
    if jones is not None and (kh is not None or not want_kh):
        return InvariantRecord(record.name, _dt_text(record.dt), jones, kh)
    try:
        D = realize(record.dt)
        if jones is None:
            jones = jones_reduced(D).to_canonical()
        if want_kh and kh is None:
            kh = kh_polynomial(D, limit=limit).to_canonical()
    except KnotError as exc:
        return InvariantRecord(record.name, _dt_text(record.dt), jones, kh, error=f"{type(exc).__name__}: {exc}")
    return InvariantRecord(record.name, _dt_text(record.dt), jones, kh)


def compute_invariants(records, which="jones", workers=1, cache=None, kh_limit=None):
    """Invariants for each record, in input order.

    ``cache`` is an iterable of previously computed :class:`InvariantRecord`
    (matched by name and DT code); polynomials already present there are not
    recomputed.  A record whose computation fails keeps its ``error`` message
    and the batch carries on.
    """
    if which not in ("jones", "jones+kh"):
        raise ValueError(f"which must be 'jones' or 'jones+kh', got {which!r}")
    limit = max_crossings() if kh_limit is None else kh_limit
    known = {}
    for c in cache or ():
        known[(c.name, c.dt)] = c
    tasks = [(r, which, known.get((r.name, _dt_text(r.dt))), limit) for r in records]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_compute_one, tasks))
    return [_compute_one(t) for t in tasks]


# Targets -----------------------------------------------------------------


@dataclass(frozen=True)
class Target:
    kind: str  # "torus", "twist" or "explicit"
    params: tuple
    jones: LaurentPoly
    dt: DTCode | None = None

    @property
    def label(self):
        if self.kind == "torus":
            return "T(%d,%d)" % self.params
        if self.kind == "twist":
            return "m%d" % self.params
        return self.params[0]


def torus_targets(max_cr):
    out = []
    for m, n in enumerate_torus_candidates(max_cr):
        out.append(Target("torus", (m, n), jones_torus(m, n), torus_dt(m, n)))
    return out


def twist_targets(lo, hi):
    return [Target("twist", (n,), jones_twist(n), twist_dt(n)) for n in range(lo, hi + 1)]


def explicit_target(name, code):
    d = parse_dt(code) if isinstance(code, str) else code
    return Target("explicit", (name,), jones_reduced(realize(d)), d)


@dataclass(frozen=True)
class MatchEntry:
    name: str
    dt: str
    jones_equal_up_to_mirror: bool
    kh_equal_up_to_mirror: bool | None
    is_same_knot_hint: bool


@dataclass(frozen=True)
class MatchReport:
    target: Target
    matches: tuple


def _kh_of_record(rec, limit):
    if rec.kh is not None:
        return rec.kh_poly
    d = parse_dt(rec.dt)
    if len(d) > limit:
        return None
    try:
        return kh_polynomial(realize(d), limit=limit)
    except ResourceLimitExceeded:
        return None


def scan_targets(invariants, targets, kh=True, kh_limit=None):
    """Census records whose reduced Jones polynomial equals a target's up to mirror.

    Only targets with at least one match are reported.  With ``kh`` the
    Khovanov polynomials of both sides are compared when both fit in the
    crossing budget; otherwise the flag is ``None``.
    """
    limit = max_crossings() if kh_limit is None else kh_limit
    by_key = {}
    for rec in invariants:
        if rec.jones is None:
            continue
        by_key.setdefault(mirror_canonical(rec.jones_poly), []).append(rec)
    reports = []
    kh_cache = {}
    for target in targets:
        hits = by_key.get(mirror_canonical(target.jones), [])
        if not hits:
            continue
        target_canon = dt_canonical(target.dt) if target.dt is not None else None
        target_kh = None
        if kh and target.dt is not None and len(target.dt) <= limit:
            target_kh = kh_polynomial(realize(target.dt), limit=limit)
        entries = []
        for rec in sorted(hits, key=lambda r: (r.crossings, r.name)):
            kh_flag = None
            if kh and target_kh is not None:
                if rec.name not in kh_cache:
                    kh_cache[rec.name] = _kh_of_record(rec, limit)
                other = kh_cache[rec.name]
                if other is not None:
                    kh_flag = equal_up_to_mirror(other, target_kh)
            same = target_canon is not None and dt_canonical(parse_dt(rec.dt)) == target_canon
            entries.append(MatchEntry(rec.name, rec.dt, True, kh_flag, same))
        reports.append(MatchReport(target, tuple(entries)))
    return reports


# Statistics --------------------------------------------------------------


def mirror_canonical(p):
    """Canonical string of ``p`` or of its mirror, whichever sorts first."""
    a = p.to_canonical()
    b = p.mirror().to_canonical()
    return min(a, b)


def _six(fr):
    scaled = round(fr * 1_000_000)
    whole, frac = divmod(scaled, 1_000_000)
    return f"{whole}.{frac:06d}"


@dataclass(frozen=True)
class StatsRow:
    cr: int
    unique: int
    almost: int
    total: int
    knots: int

    @property
    def frac_u(self):
        return Fraction(self.unique, self.total)

    @property
    def frac_t(self):
        return Fraction(self.total, self.knots)

    @property
    def frac_k(self):
        return Fraction(self.unique, self.knots)

    def fields(self):
        return [
            "%02d" % self.cr,
            str(self.unique),
            str(self.almost),
            str(self.total),
            str(self.knots),
            _six(self.frac_u),
            _six(self.frac_t),
            _six(self.frac_k),
        ]


STATS_COLUMNS = ["Cr", "Unique", "Almost", "Total", "Knots", "FracU", "FracT", "FracK"]


def stats(invariants, invariant="jones", max_cr=None):
    if invariant not in ("jones", "kh"):
        raise ValueError(f"invariant must be 'jones' or 'kh', got {invariant!r}")
    rows_in = []
    for rec in invariants:
        cr = rec.crossings
        if max_cr is not None and cr > max_cr:
            continue
        value = rec.jones if invariant == "jones" else rec.kh
        if value is None:
            raise MissingInvariant(rec.name, invariant)
        poly = poly_from_canonical_string(value, bigraded=invariant == "kh")
        rows_in.append((cr, mirror_canonical(poly)))
    if not rows_in:
        return []
    lo = min(cr for cr, _ in rows_in)
    hi = max_cr if max_cr is not None else max(cr for cr, _ in rows_in)
    out = []
    for c in range(lo, hi + 1):
        groups = {}
        for cr, key in rows_in:
            if cr <= c:
                groups[key] = groups.get(key, 0) + 1
        sizes = list(groups.values())
        out.append(StatsRow(c, sizes.count(1), sizes.count(2), len(sizes), sum(sizes)))
    return out


# Persistence -------------------------------------------------------------


def persist_invariants(records, path):
    lines = [DB_HEADER]
    for r in records:
        for part in (r.name, r.dt):
            if "\t" in part or "\n" in part:
                raise FormatError(f"field {part!r} contains a tab or newline")
        lines.append("\t".join([r.name, r.dt, r.jones or "-", r.kh or "-"]))
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def load_invariants(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != DB_HEADER:
        raise FormatError(f"missing header {DB_HEADER!r}", 1)
    out = []
    names = set()
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 4:
            raise FormatError(f"expected 4 tab-separated fields, got {len(fields)}", lineno)
        name, dt, jones, kh = fields
        if name in names:
            raise FormatError(f"duplicate name {name!r}", lineno)
        names.add(name)
        try:
            parse_dt(dt)
            if jones != "-":
                poly_from_canonical_string(jones)
            if kh != "-":
                BigradedPoly.from_canonical(kh)
        except KnotError as exc:
            raise FormatError(str(exc), lineno) from None
        out.append(InvariantRecord(name, dt, None if jones == "-" else jones, None if kh == "-" else kh))
    return out
