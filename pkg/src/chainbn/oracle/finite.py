"""Chip firing on finite multigraphs: Dhar burning, q-reduction and Baker-Norine rank."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Sequence

from ..core import ChainOfLoops, Point
from ..errors import InvalidInput


@dataclass(frozen=True)
class FiniteGraph:
    """Connected loopless multigraph on vertices ``0..n-1`` with a marked vertex ``q``.

    ``edges`` lists ``(u, v, multiplicity)`` with ``u < v``.  ``provenance``
    optionally maps each vertex to the metric point it realizes.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    q: int = 0
    provenance: tuple[Point, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for u, v, m in self.edges:
            if u == v:
                raise InvalidInput(f"self-loop at vertex {u}")
            if m < 1:
                raise InvalidInput("edge multiplicities must be positive")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"edge ({u},{v}) out of range")
        if not 0 <= self.q < self.n:
            raise InvalidInput("marked vertex out of range")
        if self.provenance and len(self.provenance) != self.n:
            raise InvalidInput("provenance must name every vertex")
        if len(_bfs_order(self.adjacency, self.q)[0]) != self.n:
            raise InvalidInput("graph is not connected")

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, m in self.edges:
            adj[u].append((v, m))
            adj[v].append((u, m))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def valence(self) -> tuple[int, ...]:
        return tuple(sum(m for _, m in a) for a in self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(m for _, _, m in self.edges)

    @property
    def genus(self) -> int:
        return self.edge_count - self.n + 1

    @cached_property
    def index_of(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.provenance)}

    def canonical_divisor(self) -> tuple[int, ...]:
        return tuple(val - 2 for val in self.valence)


def _bfs_order(adj, root: int) -> tuple[list[int], list[int]]:
    dist = [-1] * len(adj)
    dist[root] = 0
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                order.append(v)
                queue.append(v)
    return order, dist


def subdivide_chain(chain: ChainOfLoops, extra_denominator: int = 1) -> FiniteGraph:
    """Unit-length model of ``chain`` after scaling every length by ``extra_denominator``.

    Each edge of scaled length ``L`` becomes a path of ``L`` unit edges; the
    marked vertex realizes ``w_g``.
    """
    chain.require_rational()
    scale = int(extra_denominator)
    if scale < 1:
        raise InvalidInput("extra_denominator must be a positive integer")
    index: dict[Point, int] = {}

    def vid(p: Point) -> int:
        if p not in index:
            index[p] = len(index)
        return index[p]

    for p in chain.essential_vertices():
        vid(p)
    multiplicity: dict[tuple[int, int], int] = {}
    for kind, i, length in chain.base_edges():
        scaled = length * scale
        if scaled.denominator != 1:
            raise InvalidInput(f"edge {kind}_{i} of length {length} is not a multiple of 1/{scale}")
        steps = int(scaled)
        path = [chain.canonical_point(kind, i, Fraction(k, scale)) for k in range(steps + 1)]
        for a, b in zip(path, path[1:]):
            u, v = sorted((vid(a), vid(b)))
            multiplicity[(u, v)] = multiplicity.get((u, v), 0) + 1
    provenance = tuple(sorted(index, key=index.get))
    edges = tuple((u, v, m) for (u, v), m in sorted(multiplicity.items()))
    return FiniteGraph(len(index), edges, index[chain.marked_point], provenance)


def required_denominator(chain: ChainOfLoops, points: Sequence[Point] = ()) -> int:
    """Smallest scale at which every edge length and point offset is an integer."""
    chain.require_rational()
    den = 1
    for _, _, length in chain.base_edges():
        den = math.lcm(den, length.denominator)
    for p in points:
        den = math.lcm(den, Fraction(p[2]).denominator)
    return den


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def _burn(adj, chips: Sequence[int], q: int) -> list[bool]:
    burnt = [False] * len(adj)
    burnt[q] = True
    hits = [0] * len(adj)
    stack = [q]
    while stack:
        u = stack.pop()
        for v, m in adj[u]:
            if not burnt[v]:
                hits[v] += m
                if hits[v] > chips[v]:
                    burnt[v] = True
                    stack.append(v)
    return burnt


def _make_effective_off(G: FiniteGraph, chips: list[int], q: int) -> None:
    """Fire balls around ``q``, outermost first, until only ``q`` may be negative."""
    adj = G.adjacency
    _, dist = _bfs_order(adj, q)
    depth = max(dist)
    for t in range(depth - 1, -1, -1):
        need = 0
        for v in range(G.n):
            if dist[v] == t + 1 and chips[v] < 0:
                inward = sum(m for u, m in adj[v] if dist[u] == t)
                need = max(need, -(chips[v] // inward))
        if need == 0:
            continue
        for v in range(G.n):
            if dist[v] == t + 1:
                for u, m in adj[v]:
                    if dist[u] == t:
                        chips[v] += need * m
                        chips[u] -= need * m


def q_reduce(G: FiniteGraph, D: Sequence[int], q: int | None = None) -> tuple[int, ...]:
    """The unique ``q``-reduced divisor linearly equivalent to ``D``."""
    if q is None:
        q = G.q
    if len(D) != G.n:
        raise InvalidInput(f"divisor has {len(D)} entries for {G.n} vertices")
    chips = list(D)
    _make_effective_off(G, chips, q)
    adj = G.adjacency
    while True:
        burnt = _burn(adj, chips, q)
        if all(burnt):
            return tuple(chips)
        # every unburnt vertex holds at least as many chips as burning edges
        # around it, so the unburnt set may fire; fire it as often as allowed
        times = None
        outflow = []
        for v in range(G.n):
            if burnt[v]:
                continue
            out = [(u, m) for u, m in adj[v] if burnt[u]]
            if out:
                total = sum(m for _, m in out)
                outflow.append((v, total, out))
                k = chips[v] // total
                times = k if times is None else min(times, k)
        for v, total, out in outflow:
            chips[v] -= times * total
            for u, m in out:
                chips[u] += times * m


def is_reduced(G: FiniteGraph, D: Sequence[int], q: int | None = None) -> bool:
    q = G.q if q is None else q
    return all(D[v] >= 0 for v in range(G.n) if v != q) and all(_burn(G.adjacency, D, q))


# ---------------------------------------------------------------------------
# Rank
# ---------------------------------------------------------------------------


def removals_ok(
    divisor: Hashable,
    k: int,
    points: Sequence,
    reduce_at: Callable,
    chips_at: Callable,
    remove: Callable,
) -> bool:
    """Whether ``divisor - E`` is equivalent to an effective divisor for every
    effective ``E`` of degree ``k`` supported on ``points``.

    ``divisor`` must be effective.  Uses that the ``p``-reduced form of an
    effective class maximizes the number of chips on ``p``.
    """
    cache: dict = {}

    def reduced(D, p):
        key = (D, p)
        if key not in cache:
            cache[key] = reduce_at(D, p)
        return cache[key]

    def search(D, left: int, start: int) -> bool:
        if left == 0:
            return True
        for idx in range(start, len(points)):
            p = points[idx]
            R = reduced(D, p)
            if chips_at(R, p) < 1:
                return False
            if not search(remove(R, p), left - 1, idx):
                return False
        return True

    return search(divisor, k, 0)


def _finite_callbacks(G: FiniteGraph):
    def reduce_at(D, p):
        return q_reduce(G, D, p)

    def chips_at(D, p):
        return D[p]

    def remove(D, p):
        out = list(D)
        out[p] -= 1
        return tuple(out)

    return reduce_at, chips_at, remove


def rank_finite(
    G: FiniteGraph, D: Sequence[int], points: Sequence[int] | None = None, cap: int | None = None
) -> int:
    """Baker-Norine rank of ``D`` on ``G``.

    ``E`` ranges over effective divisors supported on ``points`` (default:
    every vertex).  With ``cap`` the search stops once rank ``cap`` is
    certified, so the result is ``min(rank, cap)``.
    """
    degree = sum(D)
    if degree < 0:
        return -1
    base = q_reduce(G, D, G.q)
    if base[G.q] < 0:
        return -1
    pts = list(range(G.n)) if points is None else list(points)
    callbacks = _finite_callbacks(G)
    limit = degree if cap is None else min(degree, cap)
    k = 0
    while k < limit and removals_ok(base, k + 1, pts, *callbacks):
        k += 1
    return k
