"""Dhar's burning algorithm run directly on the metric chain.

Chips live at canonical points of the chain.  The working model starts from
the essential vertices and the support of the divisor; firing the unburnt set
moves each boundary chip along its burning edge by the largest distance that
keeps the move a single linear-equivalence step (the shortest burning edge),
inserting a vertex where the chip stops.  For rational data this computes the
same reduced divisor as the unit subdivision, without materializing it.
"""
from __future__ import annotations

from fractions import Fraction

from ..core import ChainOfLoops, MetricDivisor, Point
from ..errors import InvalidInput


class _Model:
    def __init__(self, chain: ChainOfLoops):
        self.chain = chain
        self.points: list[Point] = []
        self.index: dict[Point, int] = {}
        self.incident: list[set[int]] = []
        # eid -> [u, v, length, kind, i, offset_u, offset_v]
        self.edges: dict[int, list] = {}
        self.protected: set[int] = set()
        self._next_edge = 0
        for p in chain.essential_vertices():
            self.protected.add(self._vertex(p))
        for kind, i, length in chain.base_edges():
            a, b = chain.endpoints(kind, i)
            self._add_edge(self.index[a], self.index[b], length, kind, i, Fraction(0), length)

    def _vertex(self, p: Point) -> int:
        if p not in self.index:
            self.index[p] = len(self.points)
            self.points.append(p)
            self.incident.append(set())
        return self.index[p]

    def _add_edge(self, u, v, length, kind, i, off_u, off_v) -> int:
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = [u, v, length, kind, i, off_u, off_v]
        self.incident[u].add(eid)
        self.incident[v].add(eid)
        return eid

    def _drop_edge(self, eid: int) -> None:
        u, v = self.edges.pop(eid)[:2]
        self.incident[u].discard(eid)
        self.incident[v].discard(eid)

    def _split(self, eid: int, offset: Fraction) -> int:
        u, v, _, kind, i, ou, ov = self.edges[eid]
        z = self._vertex(self.chain.canonical_point(kind, i, offset))
        self._drop_edge(eid)
        self._add_edge(u, z, abs(offset - ou), kind, i, ou, offset)
        self._add_edge(z, v, abs(ov - offset), kind, i, offset, ov)
        return z

    def insert(self, p: Point) -> int:
        """Vertex for point ``p``, splitting the edge that contains it if needed."""
        if p in self.index:
            return self.index[p]
        kind, i, s = p
        for eid, (_, _, _, k2, i2, ou, ov) in self.edges.items():
            if k2 == kind and i2 == i and min(ou, ov) < s < max(ou, ov):
                return self._split(eid, s)
        raise InvalidInput(f"point {p} is not on the chain")

    def merge_if_idle(self, z: int, chips: dict[int, int]) -> None:
        """Splice out a chipless, unprotected vertex of valence two."""
        if z in self.protected or chips.get(z, 0) != 0 or len(self.incident[z]) != 2:
            return
        e1, e2 = sorted(self.incident[z])
        a1 = self.edges[e1]
        a2 = self.edges[e2]
        ends = []
        for u, v, _, _, _, ou, ov in (a1, a2):
            ends.append((v, ov) if u == z else (u, ou))
        (a, oa), (b, ob) = ends
        if a == b:
            return
        kind, i = a1[3], a1[4]
        self._drop_edge(e1)
        self._drop_edge(e2)
        self._add_edge(a, b, abs(ob - oa), kind, i, oa, ob)


def _burn(model: _Model, chips: dict[int, int], q: int) -> set[int]:
    burnt = {q}
    hits: dict[int, int] = {}
    stack = [q]
    edges = model.edges
    while stack:
        u = stack.pop()
        for eid in model.incident[u]:
            a, b = edges[eid][:2]
            v = b if a == u else a
            if v in burnt:
                continue
            hits[v] = hits.get(v, 0) + 1
            if hits[v] > chips.get(v, 0):
                burnt.add(v)
                stack.append(v)
    return burnt


def metric_reduce(chain: ChainOfLoops, D: MetricDivisor, base: Point) -> MetricDivisor:
    """The ``base``-reduced divisor equivalent to ``D``; ``D`` must be effective off ``base``."""
    chain.require_rational()
    if any(c < 0 and p != base for p, c in D.chips):
        raise InvalidInput("metric reduction needs a divisor effective away from the base point")
    model = _Model(chain)
    q = model.insert(base)
    model.protected.add(q)
    chips: dict[int, int] = {}
    for p, c in D.chips:
        v = model.insert(p)
        model.protected.add(v)
        chips[v] = chips.get(v, 0) + c
    while True:
        burnt = _burn(model, chips, q)
        boundary = []
        for eid, (u, v, length, _, _, ou, ov) in model.edges.items():
            ub, vb = u in burnt, v in burnt
            if ub != vb:
                x, off_x, off_y = (v, ov, ou) if ub else (u, ou, ov)
                boundary.append((eid, x, length, off_x, off_y))
        if not boundary:
            break
        eps = min(length for _, _, length, _, _ in boundary)
        touched = set()
        for eid, x, length, off_x, off_y in boundary:
            chips[x] -= 1
            touched.add(x)
            if length == eps:
                y = model.edges[eid][1] if model.edges[eid][0] == x else model.edges[eid][0]
                chips[y] = chips.get(y, 0) + 1
            else:
                step = eps if off_y > off_x else -eps
                z = model._split(eid, off_x + step)
                chips[z] = chips.get(z, 0) + 1
        for x in touched:
            if chips.get(x) == 0:
                chips.pop(x)
                model.merge_if_idle(x, chips)
    return MetricDivisor.from_dict({model.points[v]: c for v, c in chips.items()})


def effective_representative(chain: ChainOfLoops, D: MetricDivisor) -> MetricDivisor | None:
    """An effective divisor equivalent to ``D``, or ``None`` if there is none."""
    positive = {p: c for p, c in D.chips if c > 0}
    current = MetricDivisor.from_dict(positive)
    for p, c in D.chips:
        if c >= 0:
            continue
        current = metric_reduce(chain, current, p)
        have = current.as_dict().get(p, 0)
        if have < -c:
            return None
        current = current + MetricDivisor(((p, c),))
    return current
