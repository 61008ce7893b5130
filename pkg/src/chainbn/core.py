"""Exact models for chains of loops, partitions, Schubert indices and class coordinates.

Conventions
-----------
Loops are numbered ``1..g``.  Loop ``i`` has two edges joining ``v_i`` and
``w_i``: the *top* edge of length ``l_i`` and the *bottom* edge of length
``n_i``.  Bridge ``i`` (``1 <= i < g``) joins ``w_i`` to ``v_{i+1}``; a bridge
of length zero identifies the two vertices.  The marked point is ``w_g``.

Points of the metric graph are plain tuples ``(kind, index, offset)``:

* ``("v", i, 0)`` and ``("w", i, 0)`` for the vertices,
* ``("top", i, s)``, ``("bottom", i, s)`` and ``("bridge", i, s)`` for a point
  in the interior of an edge, ``s`` being the distance from ``w_i``.

:func:`canonical_point` maps any ``(edge, offset)`` pair to this form, so two
descriptions of the same point always compare equal.

The point ``<z>_i`` sits at arc distance ``z * l_i`` from ``w_i``, measured in
the direction that leaves ``w_i`` along the bottom edge.  In particular
``<-1>_i = v_i``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import InvalidInput, UnsupportedInput

RationalLike = Union[int, Fraction, str]
Point = tuple  # (kind, index, offset)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``[sign]digits[/digits]`` into a :class:`~fractions.Fraction`.

    Integers and Fractions pass through unchanged.
    """
    if isinstance(text, bool):
        raise InvalidInput(f"not a rational literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise InvalidInput(f"not a rational literal: {text!r}")
    num, _, den = text.strip().partition("/")
    if den and int(den) == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Chains of loops
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LoopSpec:
    """Edge lengths of one loop; ``None`` lengths mark a torsion-free loop."""

    top: Fraction | None
    bottom: Fraction | None
    explicit_torsion: int | None = None

    def __post_init__(self):
        if (self.top is None) != (self.bottom is None):
            raise InvalidInput("a loop is either fully rational or torsion-free")
        if self.top is not None:
            object.__setattr__(self, "top", Fraction(self.top))
            object.__setattr__(self, "bottom", Fraction(self.bottom))
            if self.top <= 0 or self.bottom <= 0:
                raise InvalidInput(f"loop lengths must be positive, got l={self.top}, n={self.bottom}")
        if self.explicit_torsion is not None and self.explicit_torsion < 0:
            raise InvalidInput("torsion must be nonnegative")

    @classmethod
    def torsion_free(cls) -> "LoopSpec":
        return cls(None, None)

    @property
    def is_rational(self) -> bool:
        return self.top is not None

    @property
    def circumference(self) -> Fraction:
        if not self.is_rational:
            raise UnsupportedInput("torsion-free loop has no rational circumference")
        return self.top + self.bottom

    @property
    def period(self) -> Fraction:
        """Period of the class coordinate, ``(l + n) / l``."""
        return self.circumference / self.top


def loop_torsion(loop: LoopSpec) -> int:
    """Minimal ``m > 0`` with ``m * l`` a multiple of ``l + n``; 0 for torsion-free loops."""
    if not loop.is_rational:
        return 0
    return (loop.top / loop.circumference).denominator


def torsion_profile(chain_lengths: Iterable[LoopSpec]) -> list[int]:
    """Torsion orders of a sequence of loops."""
    return [loop_torsion(loop) for loop in chain_lengths]


@dataclass(frozen=True)
class ChainOfLoops:
    """A chain of ``g`` loops with bridges, marked at ``w_g``.

    ``torsion`` holds ``m_1..m_g``.  ``m_1`` defaults to 0 because label 1 of
    a displacement tableau can only sit in the corner box, so its modulus
    never matters; every other entry is derived from the lengths unless an
    explicit override is supplied.
    """

    loops: tuple[LoopSpec, ...]
    bridges: tuple[Fraction, ...]
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self):
        loops = tuple(self.loops)
        if not loops:
            raise InvalidInput("a chain needs at least one loop")
        bridges = tuple(Fraction(b) for b in self.bridges)
        if len(bridges) != len(loops) - 1:
            raise InvalidInput(f"expected {len(loops) - 1} bridges, got {len(bridges)}")
        if any(b < 0 for b in bridges):
            raise InvalidInput("bridge lengths must be nonnegative")
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "bridges", bridges)
        if not self.torsion:
            derived = [0] + torsion_profile(loops[1:])
            torsion = tuple(
                lp.explicit_torsion if lp.explicit_torsion is not None else m
                for lp, m in zip(loops, derived)
            )
            object.__setattr__(self, "torsion", torsion)
        else:
            torsion = tuple(int(m) for m in self.torsion)
            if len(torsion) != len(loops) or any(m < 0 for m in torsion):
                raise InvalidInput("torsion override must list g nonnegative integers")
            object.__setattr__(self, "torsion", torsion)

    @classmethod
    def from_lengths(
        cls,
        tops: Sequence[RationalLike],
        bottoms: Sequence[RationalLike],
        bridges: Sequence[RationalLike] | None = None,
        torsion: Sequence[int] | None = None,
    ) -> "ChainOfLoops":
        if len(tops) != len(bottoms):
            raise InvalidInput("tops and bottoms must have equal length")
        loops = tuple(LoopSpec(parse_rational(a), parse_rational(b)) for a, b in zip(tops, bottoms))
        if bridges is None:
            bridges = [0] * (len(loops) - 1)
        return cls(loops, tuple(parse_rational(b) for b in bridges), tuple(torsion or ()))

    @property
    def g(self) -> int:
        return len(self.loops)

    @property
    def is_rational(self) -> bool:
        return all(lp.is_rational for lp in self.loops)

    def periods(self) -> list[Fraction | None]:
        return [lp.period if lp.is_rational else None for lp in self.loops]

    def require_rational(self) -> None:
        if not self.is_rational:
            bad = [i + 1 for i, lp in enumerate(self.loops) if not lp.is_rational]
            raise UnsupportedInput(f"torsion-free loops {bad} have no rational model")

    # -- geometry ----------------------------------------------------------

    def edge_length(self, kind: str, i: int) -> Fraction:
        if kind == "top":
            return self.loops[i - 1].top
        if kind == "bottom":
            return self.loops[i - 1].bottom
        if kind == "bridge":
            return self.bridges[i - 1]
        raise InvalidInput(f"unknown edge kind {kind!r}")

    def base_edges(self) -> Iterator[tuple[str, int, Fraction]]:
        """Yield ``(kind, index, length)`` for every edge of positive length."""
        for i in range(1, self.g + 1):
            yield "top", i, self.edge_length("top", i)
            yield "bottom", i, self.edge_length("bottom", i)
            if i < self.g and self.bridges[i - 1] > 0:
                yield "bridge", i, self.bridges[i - 1]

    def vertex(self, name: str, i: int) -> Point:
        """Canonical point for ``v_i`` or ``w_i``."""
        if name == "v" and i > 1 and self.bridges[i - 2] == 0:
            return ("w", i - 1, 0)
        if name not in ("v", "w") or not 1 <= i <= self.g:
            raise InvalidInput(f"no vertex {name}_{i}")
        return (name, i, 0)

    @property
    def marked_point(self) -> Point:
        return ("w", self.g, 0)

    def essential_vertices(self) -> list[Point]:
        out: list[Point] = []
        for i in range(1, self.g + 1):
            for p in (self.vertex("v", i), self.vertex("w", i)):
                if p not in out:
                    out.append(p)
        return out

    def canonical_point(self, kind: str, i: int, offset: RationalLike) -> Point:
        """Canonical form of the point at ``offset`` from ``w_i`` along an edge."""
        if kind in ("v", "w"):
            return self.vertex(kind, i)
        s = Fraction(offset)
        length = self.edge_length(kind, i)
        if s < 0 or s > length:
            raise InvalidInput(f"offset {s} outside edge {kind}_{i} of length {length}")
        if s == 0:
            return self.vertex("w", i)
        if s == length:
            return self.vertex("v", i + 1) if kind == "bridge" else self.vertex("v", i)
        return (kind, i, s)

    def endpoints(self, kind: str, i: int) -> tuple[Point, Point]:
        """Canonical endpoints (at offset 0, at full length) of an edge."""
        far = self.vertex("v", i + 1) if kind == "bridge" else self.vertex("v", i)
        return self.vertex("w", i), far

    def canonical_divisor(self) -> "MetricDivisor":
        """``K = sum (valence(p) - 2) p`` over the essential vertices."""
        valence: dict[Point, int] = {}
        for kind, i, _ in self.base_edges():
            for p in self.endpoints(kind, i):
                valence[p] = valence.get(p, 0) + 1
        return MetricDivisor.from_dict({p: val - 2 for p, val in valence.items()})


def is_generic(chain: ChainOfLoops) -> tuple[bool, list[tuple[int, int, bool]]]:
    """Whether every ``m_i`` (``i >= 2``) is 0 or exceeds ``2g - 2``.

    Returns the verdict and one ``(i, m_i, ok)`` row per loop ``i >= 2``.
    """
    bound = 2 * chain.g - 2
    report = [(i, m, m == 0 or m > bound) for i, m in enumerate(chain.torsion, start=1) if i >= 2]
    return all(ok for _, _, ok in report), report


# ---------------------------------------------------------------------------
# Partitions and Schubert indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Partition:
    """Young diagram in French notation; ``rows[0]`` is the bottom row.

    Box ``(x, y)`` is column ``x``, row ``y`` counted from the bottom, both
    starting at 1.
    """

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r < 0 for r in rows):
            raise InvalidInput(f"negative row in partition {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise InvalidInput(f"partition rows must be weakly decreasing: {rows}")
        object.__setattr__(self, "rows", tuple(r for r in rows if r > 0))

    @classmethod
    def rectangle(cls, n_rows: int, n_cols: int) -> "Partition":
        if n_rows <= 0 or n_cols <= 0:
            return cls(())
        return cls((n_cols,) * n_rows)

    @property
    def size(self) -> int:
        return sum(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def row_length(self, y: int) -> int:
        return self.rows[y - 1] if 1 <= y <= len(self.rows) else 0

    def column_height(self, x: int) -> int:
        return sum(1 for r in self.rows if r >= x)

    def __contains__(self, box) -> bool:
        x, y = box
        return y >= 1 and x >= 1 and x <= self.row_length(y)

    def boxes(self) -> list[tuple[int, int]]:
        """Boxes in reading order: bottom row left to right, then upward."""
        return [(x, y) for y, r in enumerate(self.rows, start=1) for x in range(1, r + 1)]

    def union(self, other: "Partition") -> "Partition":
        n = max(len(self), len(other))
        return Partition(tuple(max(self.row_length(y), other.row_length(y)) for y in range(1, n + 1)))

    def intersection(self, other: "Partition") -> "Partition":
        n = min(len(self), len(other))
        return Partition(tuple(min(self.row_length(y), other.row_length(y)) for y in range(1, n + 1)))

    def issubset(self, other: "Partition") -> bool:
        return all(r <= other.row_length(y) for y, r in enumerate(self.rows, start=1))

    def conjugate(self) -> "Partition":
        return Partition(tuple(self.column_height(x) for x in range(1, (self.rows or (0,))[0] + 1)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.rows)) + ")"


def all_partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` with parts at most ``max_part``, largest first."""
    if max_part is None:
        max_part = n

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - part, part):
                yield (part,) + rest

    for rows in rec(n, max_part):
        yield Partition(rows)


@dataclass(frozen=True)
class SchubertIndex:
    """Ramification sequence ``0 <= alpha_0 <= ... <= alpha_r <= d - r``."""

    r: int
    d: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if self.r < 0 or self.d < self.r:
            raise InvalidInput(f"need 0 <= r <= d, got r={self.r}, d={self.d}")
        if len(alpha) != self.r + 1:
            raise InvalidInput(f"alpha must have r+1={self.r + 1} entries, got {len(alpha)}")
        if alpha[0] < 0 or alpha[-1] > self.d - self.r:
            raise InvalidInput(f"alpha must lie in [0, d-r={self.d - self.r}]: {alpha}")
        if any(a > b for a, b in zip(alpha, alpha[1:])):
            raise InvalidInput(f"alpha must be non-decreasing: {alpha}")


def schubert_to_partition(g: int, idx: SchubertIndex) -> Partition:
    """Partition with rows ``(g - d + r) + alpha_{r - i}``."""
    base = g - idx.d + idx.r
    if base < 0:
        raise UnsupportedInput(f"g - d + r = {base} < 0 is not supported")
    return Partition(tuple(base + idx.alpha[idx.r - i] for i in range(idx.r + 1)))


def brill_noether_number(g: int, r: int, d: int) -> int:
    return g - (r + 1) * (g - d + r)


# ---------------------------------------------------------------------------
# Class coordinates and metric divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassCoords:
    """Coordinates ``xi_1..xi_g`` of the class ``sum <xi_i>_i - g w_g``."""

    xi: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(parse_rational(x) for x in self.xi))

    @classmethod
    def of(cls, *values: RationalLike) -> "ClassCoords":
        return cls(tuple(values))

    def __len__(self) -> int:
        return len(self.xi)

    def canonical(self, chain: ChainOfLoops) -> "ClassCoords":
        """Representative with ``0 <= xi_i < period_i`` on rational loops."""
        _check_length(self, chain)
        out = []
        for x, q in zip(self.xi, chain.periods()):
            out.append(x if q is None else x - q * math.floor(x / q))
        return ClassCoords(tuple(out))

    def __str__(self) -> str:
        return ",".join(format_rational(x) for x in self.xi)


def _check_length(xi: ClassCoords, chain: ChainOfLoops) -> None:
    if len(xi) != chain.g:
        raise InvalidInput(f"expected {chain.g} coordinates, got {len(xi)}")


def class_equal(a: ClassCoords, b: ClassCoords, chain: ChainOfLoops) -> bool:
    """Coordinate-wise congruence modulo the periods ``(l_i + n_i) / l_i``."""
    _check_length(a, chain)
    _check_length(b, chain)
    for x, y, q in zip(a.xi, b.xi, chain.periods()):
        if q is None:
            if x != y:
                return False
        elif ((x - y) / q).denominator != 1:
            return False
    return True


@dataclass(frozen=True)
class MetricDivisor:
    """Finite formal sum of canonical points; zero coefficients are dropped."""

    chips: tuple[tuple[Point, int], ...]

    @classmethod
    def from_dict(cls, chips: dict) -> "MetricDivisor":
        return cls(tuple(sorted((p, int(c)) for p, c in chips.items() if c != 0)))

    def as_dict(self) -> dict[Point, int]:
        return dict(self.chips)

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.chips)

    def __add__(self, other: "MetricDivisor") -> "MetricDivisor":
        out = self.as_dict()
        for p, c in other.chips:
            out[p] = out.get(p, 0) + c
        return MetricDivisor.from_dict(out)

    def __neg__(self) -> "MetricDivisor":
        return MetricDivisor(tuple((p, -c) for p, c in self.chips))

    def __sub__(self, other: "MetricDivisor") -> "MetricDivisor":
        return self + (-other)

    def support(self) -> list[Point]:
        return [p for p, _ in self.chips]


def loop_point(chain: ChainOfLoops, i: int, z: RationalLike) -> Point:
    """The point ``<z>_i``: arc distance ``z * l_i`` from ``w_i``, bottom edge first."""
    loop = chain.loops[i - 1]
    if not loop.is_rational:
        raise UnsupportedInput(f"loop {i} is torsion-free")
    c = loop.circumference
    s = (Fraction(z) * loop.top) % c
    if s <= loop.bottom:
        return chain.canonical_point("bottom", i, s)
    return chain.canonical_point("top", i, c - s)


def coords_to_divisor(xi: ClassCoords, degree: int, chain: ChainOfLoops) -> MetricDivisor:
    """``sum <xi_i>_i + (degree - g) w_g``."""
    _check_length(xi, chain)
    chips: dict[Point, int] = {}
    for i, z in enumerate(xi.xi, start=1):
        p = loop_point(chain, i, z)
        chips[p] = chips.get(p, 0) + 1
    w = chain.marked_point
    chips[w] = chips.get(w, 0) + degree - chain.g
    return MetricDivisor.from_dict(chips)
