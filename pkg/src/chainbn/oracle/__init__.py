"""Independent ground truth: Baker-Norine rank and linear equivalence on a chain.

Two engines compute the same quantities:

``"finite"``
    Subdivide the chain into unit edges at a common denominator and run
    Dhar's algorithm on the resulting multigraph.  By default the removed
    divisor ``E`` ranges over every vertex of the subdivision.
``"metric"``
    Run Dhar's algorithm on the metric graph itself, letting ``E`` range over
    the vertices ``v_i, w_i`` of the coarse loopless model, which form a
    rank-determining set.  Exact, and fast for large denominators.
"""
from __future__ import annotations

from typing import Sequence

from ..core import ChainOfLoops, ClassCoords, MetricDivisor, Point, coords_to_divisor
from ..errors import InvalidInput
from .finite import (
    FiniteGraph,
    is_reduced,
    q_reduce,
    rank_finite,
    removals_ok,
    required_denominator,
    subdivide_chain,
)
from .metric import effective_representative, metric_reduce

ENGINES = ("metric", "finite")

__all__ = [
    "ENGINES",
    "FiniteGraph",
    "divisor_to_vector",
    "is_reduced",
    "linearly_equivalent",
    "metric_reduce",
    "q_reduce",
    "rank_at_least",
    "rank_class",
    "rank_divisor",
    "rank_finite",
    "reduced_class_form",
    "reduced_form",
    "subdivide_chain",
    "vector_to_divisor",
]


def divisor_to_vector(G: FiniteGraph, D: MetricDivisor) -> tuple[int, ...]:
    chips = [0] * G.n
    for p, c in D.chips:
        if p not in G.index_of:
            raise InvalidInput(f"point {p} is not a vertex of the subdivision")
        chips[G.index_of[p]] += c
    return tuple(chips)


def vector_to_divisor(G: FiniteGraph, chips: Sequence[int]) -> MetricDivisor:
    return MetricDivisor.from_dict({G.provenance[v]: c for v, c in enumerate(chips) if c})


def _finite_setup(chain: ChainOfLoops, D: MetricDivisor, extra: int = 1):
    den = required_denominator(chain, D.support()) * extra
    G = subdivide_chain(chain, den)
    return G, divisor_to_vector(G, D)


def _points(chain: ChainOfLoops, G: FiniteGraph | None, points: str | Sequence[Point]):
    if points == "all":
        if G is None:
            raise InvalidInput("points='all' needs the finite engine")
        return list(range(G.n))
    pts = chain.essential_vertices() if points == "essential" else list(points)
    return pts if G is None else [G.index_of[p] for p in pts]


def rank_at_least(
    chain: ChainOfLoops,
    D: MetricDivisor,
    k: int,
    engine: str = "metric",
    points: str | Sequence[Point] | None = None,
    extra_denominator: int = 1,
) -> bool:
    """Whether ``r(D) >= k``."""
    if k < 0:
        return True
    return _rank(chain, D, engine, points, extra_denominator, cap=k) >= k


def rank_divisor(
    chain: ChainOfLoops,
    D: MetricDivisor,
    engine: str = "metric",
    points: str | Sequence[Point] | None = None,
    extra_denominator: int = 1,
) -> int:
    """Baker-Norine rank of a divisor with rational support on ``chain``.

    ``points`` selects the support of the removed divisors: ``"all"``
    (finite engine only, the default there), ``"essential"`` (default for the
    metric engine) or an explicit list of points.
    """
    return _rank(chain, D, engine, points, extra_denominator, cap=None)


def _rank(chain, D, engine, points, extra, cap) -> int:
    chain.require_rational()
    if D.degree < 0:
        return -1
    if engine == "finite":
        G, vec = _finite_setup(chain, D, extra)
        pts = _points(chain, G, points or "all")
        return rank_finite(G, vec, pts, cap=cap)
    if engine != "metric":
        raise InvalidInput(f"unknown engine {engine!r}; choose from {ENGINES}")
    base = effective_representative(chain, D)
    if base is None:
        return -1
    pts = _points(chain, None, points or "essential")

    def reduce_at(E, p):
        return metric_reduce(chain, E, p)

    def chips_at(E, p):
        return E.as_dict().get(p, 0)

    def remove(E, p):
        return E - MetricDivisor(((p, 1),))

    limit = D.degree if cap is None else min(D.degree, cap)
    k = 0
    while k < limit and removals_ok(base, k + 1, pts, reduce_at, chips_at, remove):
        k += 1
    return k


def rank_class(
    xi: ClassCoords,
    degree: int,
    chain: ChainOfLoops,
    engine: str = "metric",
    points: str | Sequence[Point] | None = None,
    extra_denominator: int = 1,
) -> int:
    """Rank of ``sum <xi_i>_i + (degree - g) w_g``; ``-1`` for negative degree."""
    if degree < 0:
        return -1
    return rank_divisor(chain, coords_to_divisor(xi, degree, chain), engine, points, extra_denominator)


def reduced_form(chain: ChainOfLoops, D: MetricDivisor, engine: str = "metric", base: Point | None = None) -> MetricDivisor:
    """The ``base``-reduced divisor (default base ``w_g``) equivalent to ``D``."""
    base = chain.marked_point if base is None else base
    if engine == "metric":
        return metric_reduce(chain, D, base)
    if engine != "finite":
        raise InvalidInput(f"unknown engine {engine!r}")
    den = required_denominator(chain, D.support() + [base])
    G = subdivide_chain(chain, den)
    return vector_to_divisor(G, q_reduce(G, divisor_to_vector(G, D), G.index_of[base]))


def reduced_class_form(xi: ClassCoords, chain: ChainOfLoops, engine: str = "metric") -> MetricDivisor:
    """``w_g``-reduced representative of ``sum <xi_i>_i - g w_g``."""
    return reduced_form(chain, coords_to_divisor(xi, 0, chain), engine)


def linearly_equivalent(chain: ChainOfLoops, D1: MetricDivisor, D2: MetricDivisor, engine: str = "finite") -> bool:
    """Whether ``D1 - D2`` is principal, decided by comparing reduced forms.

    The metric engine needs both divisors effective away from ``w_g``.
    """
    if D1.degree != D2.degree:
        return False
    if engine == "metric":
        return reduced_form(chain, D1, engine) == reduced_form(chain, D2, engine)
    return reduced_form(chain, D1 - D2, engine) == MetricDivisor(())
