"""Planar knot diagrams realized from DT codes.

Traversal visits are labelled 1..2N.  Arc ``k`` runs from visit ``k-1`` into
visit ``k`` (arc 1 comes from visit 2N), so visit ``k`` has incoming arc
``k`` and outgoing arc ``k+1``.  Every crossing stores its four arcs in
counterclockwise order starting from the incoming under-strand, as in PD
notation, together with the position (1 or 3) of the incoming over-strand.

Smoothing conventions: bit 0 of a state is the 0-smoothing, joining ports
``(0,1)`` and ``(2,3)``; bit 1 joins ``(0,3)`` and ``(1,2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import NonRealizable
from .knotcodes import DTCode

__all__ = [
    "Crossing",
    "Diagram",
    "SmoothingState",
    "UnionFind",
    "realize",
    "mirror",
    "writhe",
    "count_cycles",
    "cycle_partition",
    "pd_emit",
]


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class SmoothingState:
    bits: int
    n: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"state {self.bits} does not fit in {self.n} bits")

    @property
    def weight(self):
        return bin(self.bits).count("1")

    def bit(self, i):
        return (self.bits >> i) & 1

    def flip(self, i):
        return SmoothingState(self.bits ^ (1 << i), self.n)


@dataclass(frozen=True)
class Crossing:
    ports: tuple  # four arc labels, counterclockwise, starting at the incoming under-strand
    over_in: int  # 1 or 3: port index of the incoming over-strand

    @property
    def sign(self):
        return 1 if self.over_in == 3 else -1

    def smoothing_pairs(self, bit):
        p = self.ports
        if bit:
            return (p[0], p[3]), (p[1], p[2])
        return (p[0], p[1]), (p[2], p[3])

    def switched(self):
        """The same crossing with over and under exchanged."""
        k = self.over_in
        p = self.ports
        return Crossing(p[k:] + p[:k], 4 - k)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple
    dt: DTCode | None = None

    @property
    def n(self):
        return len(self.crossings)

    @property
    def n_arcs(self):
        return 2 * len(self.crossings)

    @property
    def signs(self):
        return tuple(c.sign for c in self.crossings)

    def writhe(self):
        n_plus = sum(1 for c in self.crossings if c.sign > 0)
        n_minus = self.n - n_plus
        return n_plus - n_minus, n_plus, n_minus

    def mirror(self):
        dt = DTCode(tuple(-e for e in self.dt.entries)) if self.dt is not None else None
        return Diagram(tuple(c.switched() for c in self.crossings), dt)

    def permuted(self, order):
        """Same diagram with crossings listed in ``order`` (a permutation of indices)."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of the crossing indices")
        return Diagram(tuple(self.crossings[i] for i in order), self.dt)

    def pd_tuples(self):
        return [c.ports for c in self.crossings]

    def traversal_dt(self):
        """Recompute the DT code by walking the diagram."""
        n = self.n
        if n == 0:
            return DTCode(())
        over_at = {}
        for idx, c in enumerate(self.crossings):
            over_at[c.ports[0]] = (idx, False)
            over_at[c.ports[c.over_in]] = (idx, True)
        if sorted(over_at) != list(range(1, 2 * n + 1)):
            raise ValueError("diagram does not traverse a single closed curve")
        visits = {}
        for label, (idx, over) in over_at.items():
            visits.setdefault(idx, []).append((label, over))
        pairs = []
        for (a, oa), (b, ob) in visits.values():
            if (a + b) % 2 == 0:
                raise ValueError("crossing visited twice at labels of equal parity")
            (odd, _), (even, even_over) = sorted([(a, oa), (b, ob)], key=lambda v: v[0] % 2 == 0)
            pairs.append((odd, -even if even_over else even))
        pairs.sort()
        return DTCode(tuple(e for _, e in pairs))

    def face_count(self):
        """Number of faces of the rotation system (N + 2 exactly when planar)."""
        if self.n == 0:
            return 2
        where = {}
        for ci, c in enumerate(self.crossings):
            for pi, a in enumerate(c.ports):
                where.setdefault(a, []).append((ci, pi))
        seen = set()
        faces = 0
        for start in ((ci, pi) for ci in range(self.n) for pi in range(4)):
            if start in seen:
                continue
            faces += 1
            dart = start
            while dart not in seen:
                seen.add(dart)
                ci, pi = dart
                a = self.crossings[ci].ports[pi]
                e1, e2 = where[a]
                other = e2 if e1 == dart else e1
                dart = (other[0], (other[1] + 1) % 4)
        return faces

    # Smoothing support ---------------------------------------------------

    def _end_table(self):
        """Per crossing, the arc-end index at each port (tail 2a, head 2a+1, 0-based arc a)."""
        ends = []
        for c in self.crossings:
            row = []
            for pi, a in enumerate(c.ports):
                incoming = pi == 0 or pi == c.over_in
                row.append(2 * (a - 1) + (1 if incoming else 0))
            ends.append(row)
        return ends

    def state_cycle_counts(self, states):
        """Cycle counts for an array of integer states (vectorized)."""
        states = np.asarray(states, dtype=np.int64)
        if self.n == 0:
            return np.ones(states.shape, dtype=np.int64)
        m = 2 * self.n_arcs
        partner = np.empty((states.size, m), dtype=np.int32)
        for i, (e0, e1, e2, e3) in enumerate(self._end_table()):
            bit = ((states >> i) & 1).astype(bool)
            partner[:, e0] = np.where(bit, e3, e1)
            partner[:, e1] = np.where(bit, e2, e0)
            partner[:, e2] = np.where(bit, e1, e3)
            partner[:, e3] = np.where(bit, e0, e2)
        step = partner ^ 1
        label = np.broadcast_to(np.arange(m, dtype=np.int32), step.shape).copy()
        span = 1
        while span < m:
            label = np.minimum(label, np.take_along_axis(label, step, axis=1))
            step = np.take_along_axis(step, step, axis=1)
            span *= 2
        roots = (label == np.arange(m, dtype=np.int32)).sum(axis=1)
        return roots // 2


def _bits(state, n):
    if isinstance(state, SmoothingState):
        if state.n != n:
            raise ValueError(f"state has {state.n} bits, diagram has {n} crossings")
        return state.bits
    if not 0 <= state < (1 << n):
        raise ValueError(f"state {state} does not fit in {n} bits")
    return state


def _union_smoothing(D, bits):
    uf = UnionFind(D.n_arcs)
    for i, c in enumerate(D.crossings):
        for a, b in c.smoothing_pairs((bits >> i) & 1):
            uf.union(a - 1, b - 1)
    return uf


def count_cycles(D, state):
    bits = _bits(state, D.n)
    if D.n == 0:
        return 1
    uf = _union_smoothing(D, bits)
    return sum(1 for x in range(D.n_arcs) if uf.find(x) == x)


def cycle_partition(D, state):
    """Circles of the smoothing as frozensets of arc labels, ordered by smallest arc."""
    bits = _bits(state, D.n)
    if D.n == 0:
        return [frozenset()]
    uf = _union_smoothing(D, bits)
    groups = {}
    for x in range(D.n_arcs):
        groups.setdefault(uf.find(x), set()).add(x + 1)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def writhe(D):
    return D.writhe()


def mirror(D):
    return D.mirror()


def pd_emit(D):
    return " ".join("X(%d,%d,%d,%d)" % c.ports for c in D.crossings)


def _orientations(d):
    """Orientation of each crossing from a planar embedding, or raise NonRealizable.

    Each crossing becomes a wheel whose rim carries, in order, the odd-visit
    in-port, even-visit in-port, odd-visit out-port and even-visit out-port.
    A wheel embeds rigidly up to reflection, so the graph is planar exactly
    when some choice of per-crossing orientation is.
    """
    n = len(d)
    partner = d.partner()
    crossing_of = [0] * (2 * n + 1)
    for i in range(n):
        crossing_of[2 * i + 1] = i
        crossing_of[partner[2 * i + 1]] = i

    def rim(visit, incoming):
        c = crossing_of[visit]
        odd = visit % 2 == 1
        j = (0 if odd else 1) if incoming else (2 if odd else 3)
        return ("r", c, j)

    G = nx.Graph()
    for c in range(n):
        hub = ("h", c)
        for j in range(4):
            G.add_edge(hub, ("r", c, j))
            G.add_edge(("r", c, j), ("r", c, (j + 1) % 4))
    for k in range(1, 2 * n + 1):
        prev = 2 * n if k == 1 else k - 1
        G.add_edge(rim(prev, False), ("a", k))
        G.add_edge(("a", k), rim(k, True))
    planar, emb = nx.check_planarity(G)
    if not planar:
        raise NonRealizable(f"DT code {d.numeric()} has no planar realization")
    eps = []
    for c in range(n):
        order = [v[2] for v in emb.neighbors_cw_order(("h", c))]
        k = order.index(0)
        order = order[k:] + order[:k]
        # clockwise 0,3,2,1 means counterclockwise 0,1,2,3
        eps.append(1 if order == [0, 3, 2, 1] else -1)
    return eps


def realize(d):
    """Planar diagram for a DT code.

    Of the two mirror-image embeddings, the one where the even visit at
    crossing 1 crosses the odd visit from right to left is returned.
    """
    if not isinstance(d, DTCode):
        d = DTCode(tuple(d))
    n = len(d)
    if n == 0:
        return Diagram((), d)
    eps = _orientations(d)
    if eps[0] < 0:
        eps = [-e for e in eps]
    crossings = []
    for i, e in enumerate(d.entries):
        odd = 2 * i + 1
        even = abs(e)
        odd_in, odd_out = odd, odd % (2 * n) + 1
        even_in, even_out = even, even % (2 * n) + 1
        # ccw port order by role; arc labels may repeat on a kink
        if eps[i] > 0:
            roles = ["odd_in", "even_in", "odd_out", "even_out"]
        else:
            roles = ["odd_in", "even_out", "odd_out", "even_in"]
        arc = {"odd_in": odd_in, "odd_out": odd_out, "even_in": even_in, "even_out": even_out}
        under_in, over_in = ("even_in", "odd_in") if e > 0 else ("odd_in", "even_in")
        k = roles.index(under_in)
        roles = roles[k:] + roles[:k]
        crossings.append(Crossing(tuple(arc[r] for r in roles), roles.index(over_in)))
    D = Diagram(tuple(crossings), d)
    if D.face_count() != n + 2:
        raise NonRealizable(f"DT code {d.numeric()} has no planar realization")
    return D
