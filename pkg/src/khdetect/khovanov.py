"""Khovanov homology over a field from the cube of resolutions.

Generators are pairs ``(state, mask)`` where bit ``k`` of ``mask`` says that
circle ``k`` of the smoothing (circles numbered by their smallest arc) carries
the label ``x`` (degree -1); clear bits carry ``1`` (degree +1).

Gradings: ``r = |v| - n_minus`` and
``q = #1 - #x + |v| + n_plus - 2 n_minus``.

The differential at each height is assembled one height at a time and split
into independent q-blocks, so only per-state circle data is kept for the
whole cube.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from .diagram import SmoothingState, UnionFind
from .errors import ResourceLimitExceeded
from .linalg import rank_gf2, rank_rational
from .polynomial import BigradedPoly

__all__ = [
    "CubeVertex",
    "CubeEdge",
    "Cube",
    "ChainBlock",
    "build_cube",
    "chain_blocks",
    "differential",
    "kh_polynomial",
    "equal_up_to_mirror",
    "max_crossings",
    "render_grid",
    "DEFAULT_MAX_CROSSINGS",
]

DEFAULT_MAX_CROSSINGS = 14


def max_crossings():
    """Crossing cap for Khovanov computations (``KNOT_MAX_CROSSINGS`` overrides)."""
    raw = os.environ.get("KNOT_MAX_CROSSINGS")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_CROSSINGS
    try:
        value = int(raw)
    except ValueError:
        raise ResourceLimitExceeded(f"KNOT_MAX_CROSSINGS must be an integer, got {raw!r}") from None
    return value


@dataclass(frozen=True)
class CubeVertex:
    state: SmoothingState
    circles: tuple  # frozensets of arc labels, ordered by smallest arc


@dataclass(frozen=True)
class CubeEdge:
    source: int
    target: int
    crossing: int
    kind: str  # "merge" or "split"
    circles: tuple  # merge: (a, b) -> (m,); split: (a,) -> (b, c); indices into each end's circles
    result: tuple
    sign: int


@dataclass(frozen=True)
class Cube:
    n: int
    vertices: tuple
    edges: tuple


@dataclass(frozen=True)
class ChainBlock:
    r: int
    q: int
    basis: tuple  # (state bits, x-mask) generators


def _edge_sign(v, i):
    return -1 if bin(v & ((1 << i) - 1)).count("1") % 2 else 1


class _CircleData:
    """Per-state circle numbering: arc index (0-based) -> circle index."""

    def __init__(self, D):
        self.D = D
        self.n = D.n
        self._cache = {}

    def __call__(self, v):
        got = self._cache.get(v)
        if got is not None:
            return got
        D = self.D
        if self.n == 0:
            got = ((), 1)
        else:
            uf = UnionFind(D.n_arcs)
            for i, c in enumerate(D.crossings):
                for a, b in c.smoothing_pairs((v >> i) & 1):
                    uf.union(a - 1, b - 1)
            ids = {}
            circ = []
            for x in range(D.n_arcs):
                r = uf.find(x)
                if r not in ids:
                    ids[r] = len(ids)
                circ.append(ids[r])
            got = (tuple(circ), len(ids))
        self._cache[v] = got
        return got

    def forget(self, keep):
        self._cache = {v: d for v, d in self._cache.items() if keep(v)}


def _edge_map(D, circ_data, v, i):
    """Describe the edge flipping bit ``i`` of ``v`` (which must be 0)."""
    w = v | (1 << i)
    cv, _ = circ_data(v)
    cw, nw = circ_data(w)
    p = D.crossings[i].ports
    a, b = cv[p[0] - 1], cv[p[2] - 1]
    carry = {}
    for arc, k in enumerate(cv):
        carry.setdefault(k, cw[arc])
    if a != b:
        return w, "merge", (a, b), (cw[p[0] - 1],), carry, nw
    return w, "split", (a,), (cw[p[0] - 1], cw[p[1] - 1]), carry, nw


def _images(kind, src, dst, carry, mask):
    """Target masks (all with coefficient +1) of generator ``mask``."""
    base = 0
    for k, t in carry.items():
        if k not in src and (mask >> k) & 1:
            base |= 1 << t
    if kind == "merge":
        la, lb = (mask >> src[0]) & 1, (mask >> src[1]) & 1
        if la and lb:
            return ()
        return (base | ((la | lb) << dst[0]),)
    if (mask >> src[0]) & 1:
        return (base | (1 << dst[0]) | (1 << dst[1]),)
    return (base | (1 << dst[1]), base | (1 << dst[0]))


def build_cube(D):
    """All vertices and edges of the cube, with merge/split data and signs."""
    n = D.n
    circ_data = _CircleData(D)
    vertices = []
    for v in range(1 << n):
        circ, nc = circ_data(v)
        groups = [set() for _ in range(nc)]
        for arc, k in enumerate(circ):
            groups[k].add(arc + 1)
        circles = tuple(frozenset(g) for g in groups) if n else (frozenset(),)
        vertices.append(CubeVertex(SmoothingState(v, n), circles))
    edges = []
    for v in range(1 << n):
        for i in range(n):
            if (v >> i) & 1:
                continue
            w, kind, src, dst, _, _ = _edge_map(D, circ_data, v, i)
            edges.append(CubeEdge(v, w, i, kind, src, dst, _edge_sign(v, i)))
    return Cube(n, tuple(vertices), tuple(edges))


def _popcount_order(c):
    """For ``c`` circles, each mask's position among masks of equal popcount."""
    pos = [0] * (1 << c)
    seen = [0] * (c + 1)
    for m in range(1 << c):
        k = bin(m).count("1")
        pos[m] = seen[k]
        seen[k] += 1
    return pos


class _Grading:
    def __init__(self, D):
        self.D = D
        self.n = D.n
        _, self.n_plus, self.n_minus = D.writhe()
        self.circ = _CircleData(D)
        self._orders = {}
        self._layout = {}

    def order(self, c):
        got = self._orders.get(c)
        if got is None:
            got = self._orders[c] = _popcount_order(c)
        return got

    def qdeg(self, h, c, k):
        return c - 2 * k + h + self.n_plus - 2 * self.n_minus

    def layout(self, h):
        """Offsets of each (state, popcount) run inside its q-block, and block sizes."""
        got = self._layout.get(h)
        if got is not None:
            return got
        offsets = {}
        sizes = {}
        for v in _states_of_height(self.n, h):
            _, c = self.circ(v)
            for k in range(c + 1):
                q = self.qdeg(h, c, k)
                start = sizes.get(q, 0)
                offsets[(v, k)] = (q, start)
                sizes[q] = start + comb(c, k)
        got = self._layout[h] = (offsets, sizes)
        return got

    def drop(self, below):
        self._layout = {h: x for h, x in self._layout.items() if h >= below}


def _states_of_height(n, h):
    if h < 0 or h > n:
        return
    if h == 0:
        yield 0
        return
    v = (1 << h) - 1
    limit = 1 << n
    while v < limit:
        yield v
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r


def _differential_rows(G, h):
    """Rows of ``d: C^h -> C^(h+1)`` grouped by q: ``{q: [ {col: coeff}, ... ]}``."""
    D = G.D
    src_off, src_sizes = G.layout(h)
    dst_off, _ = G.layout(h + 1)
    blocks = {q: [dict() for _ in range(size)] for q, size in src_sizes.items()}
    for v in _states_of_height(G.n, h):
        _, c = G.circ(v)
        order_v = G.order(c)
        for i in range(G.n):
            if (v >> i) & 1:
                continue
            w, kind, src, dst, carry, nw = _edge_map(D, G.circ, v, i)
            sign = _edge_sign(v, i)
            order_w = G.order(nw)
            for mask in range(1 << c):
                k = bin(mask).count("1")
                q, start = src_off[(v, k)]
                row = blocks[q][start + order_v[mask]]
                for t in _images(kind, src, dst, carry, mask):
                    tq, tstart = dst_off[(w, bin(t).count("1"))]
                    col = tstart + order_w[t]
                    row[col] = row.get(col, 0) + sign
    return blocks


def chain_blocks(D):
    """Every nonzero (r, q) chain group with its explicit basis."""
    G = _Grading(D)
    out = []
    for h in range(D.n + 1):
        offsets, sizes = G.layout(h)
        bases = {q: [None] * size for q, size in sizes.items()}
        for (v, k), (q, start) in offsets.items():
            _, c = G.circ(v)
            order = G.order(c)
            for mask in range(1 << c):
                if bin(mask).count("1") == k:
                    bases[q][start + order[mask]] = (v, mask)
        for q in sorted(bases):
            out.append(ChainBlock(h - G.n_minus, q, tuple(bases[q])))
    return out


def differential(D, r):
    """Sparse blocks of ``d^r`` keyed by q, rows indexed like :func:`chain_blocks`."""
    G = _Grading(D)
    h = r + G.n_minus
    if h < 0 or h >= D.n:
        return {}
    return _differential_rows(G, h)


def _rank_task(args):
    rows, field = args
    return rank_gf2(rows) if field == "gf2" else rank_rational(rows)


def _normalize_field(coefficients):
    key = str(coefficients).lower()
    if key in ("rationals", "q", "rational", "qq"):
        return "rationals"
    if key in ("gf2", "f2", "z2", "gf(2)"):
        return "gf2"
    raise ValueError(f"unknown coefficient field {coefficients!r}")


def kh_polynomial(D, coefficients="rationals", workers=1, limit=None):
    """Bigraded Poincaré polynomial of Khovanov homology of ``D``.

    The coefficient at ``(q, t)`` is ``dim KH^t_q``.  ``limit`` defaults to
    :func:`max_crossings`.
    """
    field = _normalize_field(coefficients)
    cap = max_crossings() if limit is None else limit
    n = D.n
    if n > cap:
        raise ResourceLimitExceeded(
            f"{n} crossings exceed the Khovanov limit of {cap} (set KNOT_MAX_CROSSINGS to raise it)",
            {"crossings": n, "limit": cap, "heights_done": 0, "heights_total": n + 1},
        )
    G = _Grading(D)
    ranks = {}
    sizes_by_h = {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers and workers > 1 else None
    try:
        for h in range(n):
            sizes_by_h[h] = dict(G.layout(h)[1])
            blocks = _differential_rows(G, h)
            keys = sorted(blocks)
            tasks = [(blocks[q], field) for q in keys]
            if pool is not None:
                results = list(pool.map(_rank_task, tasks))
            else:
                results = [_rank_task(t) for t in tasks]
            for q, rk in zip(keys, results):
                ranks[(h, q)] = rk
            del blocks, tasks
            G.drop(h)
            G.circ.forget(lambda v, h=h: bin(v).count("1") >= h)
    finally:
        if pool is not None:
            pool.shutdown()
    sizes_by_h[n] = dict(G.layout(n)[1])
    terms = {}
    for h, sizes in sizes_by_h.items():
        for q, size in sizes.items():
            dim = size - ranks.get((h, q), 0) - ranks.get((h - 1, q), 0)
            if dim:
                terms[(q, h - G.n_minus)] = dim
    return BigradedPoly(terms)


def equal_up_to_mirror(a, b):
    return a == b or a == b.mirror()


def render_grid(table):
    """Rows ``q`` ascending, columns ``t`` ascending, last column the Euler characteristic."""
    if not table:
        return "q\\t\tchi\n"
    q_lo, q_hi = table.q_range()
    t_lo, t_hi = table.t_range()
    ts = list(range(t_lo, t_hi + 1))
    lines = ["\t".join(["q\\t"] + [str(t) for t in ts] + ["chi"])]
    for q in range(q_lo, q_hi + 1, 2):
        cells = []
        chi = 0
        for t in ts:
            c = table.coeff(q, t)
            chi += -c if t % 2 else c
            cells.append(str(c) if c else ".")
        lines.append("\t".join([str(q)] + cells + [str(chi)]))
    return "\n".join(lines) + "\n"
