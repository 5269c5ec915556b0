"""Exact ranks of sparse matrices given as lists of ``{column: value}`` rows.

Over the rationals the elimination stays in the integers: unit pivots are
preferred, and when none is available rows are combined fraction-free
(``a*z - b*x``) and divided by their content.  Pivots are picked
Markowitz-style (shortest row, then shortest column) to limit fill-in.
"""

from __future__ import annotations

import heapq
from math import gcd

__all__ = ["rank_rational", "rank_gf2", "rank"]


def _content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def rank_rational(rows):
    rows = [dict(r) for r in rows]
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    cols = {}
    for i, r in enumerate(rows):
        for k in r:
            cols.setdefault(k, set()).add(i)
    alive = [bool(r) for r in rows]
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    rank = 0
    while heap:
        length, x = heapq.heappop(heap)
        if not alive[x] or length != len(rows[x]):
            continue
        rx = rows[x]
        best = None
        for k, v in rx.items():
            key = (abs(v) != 1, len(cols[k]))
            if best is None or key < best[0]:
                best = (key, k)
        y = best[1]
        a = rx[y]
        alive[x] = False
        rank += 1
        for k in rx:
            cols[k].discard(x)
        for z in list(cols[y]):
            rz = rows[z]
            b = rz[y]
            if a in (1, -1):
                f = b * a
                for k, v in rx.items():
                    nv = rz.get(k, 0) - f * v
                    if nv:
                        if k not in rz:
                            cols[k].add(z)
                        rz[k] = nv
                    elif k in rz:
                        del rz[k]
                        cols[k].discard(z)
            else:
                for k in list(rz):
                    rz[k] *= a
                for k, v in rx.items():
                    nv = rz.get(k, 0) - b * v
                    if nv:
                        if k not in rz:
                            cols[k].add(z)
                        rz[k] = nv
                    elif k in rz:
                        del rz[k]
                        cols[k].discard(z)
                g = _content(rz) if rz else 1
                if g > 1:
                    for k in rz:
                        rz[k] //= g
            if rz:
                heapq.heappush(heap, (len(rz), z))
            else:
                alive[z] = False
        del cols[y]
        rows[x] = {}
    return rank


def rank_gf2(rows):
    """Rank over the two-element field; values are reduced mod 2 first."""
    rows = [{k for k, v in r.items() if v % 2} for r in rows]
    cols = {}
    for i, r in enumerate(rows):
        for k in r:
            cols.setdefault(k, set()).add(i)
    alive = [bool(r) for r in rows]
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    rank = 0
    while heap:
        length, x = heapq.heappop(heap)
        if not alive[x] or length != len(rows[x]):
            continue
        rx = rows[x]
        y = min(rx, key=lambda k: len(cols[k]))
        alive[x] = False
        rank += 1
        for k in rx:
            cols[k].discard(x)
        for z in list(cols[y]):
            rz = rows[z]
            for k in rx:
                if k in rz:
                    rz.discard(k)
                    cols[k].discard(z)
                else:
                    rz.add(k)
                    cols[k].add(z)
            if rz:
                heapq.heappush(heap, (len(rz), z))
            else:
                alive[z] = False
        del cols[y]
        rows[x] = set()
    return rank


def rank(rows, field="rationals"):
    if field in ("rationals", "q", "Q"):
        return rank_rational(rows)
    if field in ("gf2", "f2", "F2"):
        return rank_gf2(rows)
    raise ValueError(f"unknown coefficient field {field!r}")
