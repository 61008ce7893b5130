"""Brill-Noether loci on a chain of loops as unions of coordinate tori."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    ChainOfLoops,
    ClassCoords,
    Partition,
    coords_to_divisor,
    format_rational,
    is_generic,
    parse_rational,
)
from .errors import InvalidInput
from .oracle import rank_at_least
from .tableaux import DisplacementTableau, enumerate_tableaux, torsion_of

Constraint = tuple[int, int, int]  # (coordinate, value, modulus)

DEFAULT_GRID_CAP = 10**6


def _canon(value: int, modulus: int) -> int:
    return value % modulus if modulus else value


@dataclass(frozen=True)
class Torus:
    """Coordinate torus ``xi_i = value (mod modulus)`` for each fixed ``i``.

    ``fixed`` is sorted by coordinate; values are canonical residues, and a
    modulus of 0 pins the coordinate to the exact integer value.
    """

    g: int
    fixed: tuple[Constraint, ...] = ()

    def __post_init__(self):
        seen = set()
        out = []
        for i, v, m in sorted(self.fixed):
            if not 1 <= i <= self.g:
                raise InvalidInput(f"coordinate {i} outside 1..{self.g}")
            if i in seen:
                raise InvalidInput(f"coordinate {i} fixed twice")
            seen.add(i)
            out.append((i, _canon(v, m), m))
        object.__setattr__(self, "fixed", tuple(out))

    @property
    def dim(self) -> int:
        return self.g - len(self.fixed)

    @property
    def fixed_coords(self) -> tuple[int, ...]:
        return tuple(i for i, _, _ in self.fixed)

    def free_coords(self) -> list[int]:
        pinned = set(self.fixed_coords)
        return [i for i in range(1, self.g + 1) if i not in pinned]

    def constraints(self) -> frozenset[Constraint]:
        return frozenset(self.fixed)

    def contains(self, other: "Torus") -> bool:
        """``other`` is a subset of ``self``: each constraint here is implied there."""
        if other.g != self.g:
            raise InvalidInput("tori of different genus")
        theirs = {i: (v, m) for i, v, m in other.fixed}
        for i, v, m in self.fixed:
            if i not in theirs:
                return False
            v2, m2 = theirs[i]
            if m == 0:
                if m2 != 0 or v2 != v:
                    return False
            elif m2 % m or (v2 - v) % m:
                return False
        return True

    def contains_class(self, xi: ClassCoords, chain: ChainOfLoops) -> bool:
        """Whether the class ``xi`` lies on this torus, comparing modulo the periods."""
        if len(xi) != self.g:
            raise InvalidInput(f"expected {self.g} coordinates, got {len(xi)}")
        periods = chain.periods()
        for i, v, m in self.fixed:
            x, q = xi.xi[i - 1], periods[i - 1]
            if q is None:
                # no period: the coordinate must be an integer in the residue class
                if x.denominator != 1 or not _congruent(int(x), v, m):
                    return False
            elif ((x - v) / _rational_gcd(Fraction(m), q)).denominator != 1:
                return False
        return True

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "fixed": [{"coord": i, "value": v, "modulus": m} for i, v, m in self.fixed],
        }

    def __str__(self) -> str:
        parts = [f"{i}:{v}" + (f" mod {m}" if m else "") for i, v, m in self.fixed]
        return "{" + ", ".join(parts) + "}"


def _rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    """Generator of the lattice ``a Z + b Z``."""
    if a == 0:
        return b
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(math.gcd(int(a * den), int(b * den)), den)


def _congruent(a: int, b: int, m: int) -> bool:
    return a == b if m == 0 else (a - b) % m == 0


def torus_of_tableau(t: DisplacementTableau, chain: ChainOfLoops | Sequence[int]) -> Torus | None:
    """``T(t)``: fix ``xi_{t(x,y)} = x - y (mod m_{t(x,y)})``; ``None`` on conflicting residues."""
    torsion = torsion_of(chain)
    fixed: dict[int, tuple[int, int]] = {}
    for (x, y), label in t.items():
        m = torsion[label - 1]
        v = _canon(x - y, m)
        if label in fixed and fixed[label][0] != v:
            return None
        fixed[label] = (v, m)
    return Torus(len(torsion), tuple((i, v, m) for i, (v, m) in fixed.items()))


def _crt(a: int, m: int, b: int, n: int) -> tuple[int, int] | None:
    """Combine ``x = a (mod m)`` and ``x = b (mod n)``; modulus 0 means equality."""
    if m == 0 and n == 0:
        return (a, 0) if a == b else None
    if m == 0:
        return (a, 0) if (a - b) % n == 0 else None
    if n == 0:
        return (b, 0) if (a - b) % m == 0 else None
    g = math.gcd(m, n)
    if (b - a) % g:
        return None
    lcm = m // g * n
    k = ((b - a) // g * pow(m // g, -1, n // g)) % (n // g) if n // g > 1 else 0
    return ((a + m * k) % lcm, lcm)


def torus_intersect(a: Torus, b: Torus) -> Torus | None:
    """Intersection of two tori, or ``None`` when it is empty."""
    if a.g != b.g:
        raise InvalidInput("tori of different genus")
    merged = {i: (v, m) for i, v, m in a.fixed}
    for i, v, m in b.fixed:
        if i in merged:
            combined = _crt(*merged[i], v, m)
            if combined is None:
                return None
            merged[i] = combined
        else:
            merged[i] = (v, m)
    return Torus(a.g, tuple((i, v, m) for i, (v, m) in merged.items()))


def sample_denominator(g: int) -> int:
    """Smallest prime exceeding ``4 g^2``."""
    n = 4 * g * g + 1
    while any(n % p == 0 for p in range(2, math.isqrt(n) + 1)):
        n += 1
    return n


def sample_point(t: Torus, chain: ChainOfLoops) -> ClassCoords:
    """Deterministic point of ``t``: residues on fixed coordinates, ``j/B`` on the ``j``-th free one."""
    if chain.g != t.g:
        raise InvalidInput(f"torus has genus {t.g}, chain has {chain.g}")
    B = sample_denominator(t.g)
    xi: list[Fraction] = [Fraction(0)] * t.g
    for i, v, _ in t.fixed:
        xi[i - 1] = Fraction(v)
    for j, i in enumerate(t.free_coords(), start=1):
        xi[i - 1] = Fraction(j, B)
    return ClassCoords(tuple(xi)).canonical(chain)


@dataclass
class BNLocus:
    """``W^shape(Gamma, w_g)`` as a list of distinct tori, each with its tableaux."""

    shape: Partition
    chain: ChainOfLoops
    tori: list[Torus] = field(default_factory=list)
    tableaux: list[list[DisplacementTableau]] = field(default_factory=list)
    conflicts: int = 0

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.tori]

    @property
    def tableau_count(self) -> int:
        return sum(len(ts) for ts in self.tableaux)

    def is_pure(self) -> bool:
        return all(d == self.chain.g - self.shape.size for d in self.dims)

    def __len__(self) -> int:
        return len(self.tori)


def bn_locus(shape: Partition, chain: ChainOfLoops) -> BNLocus:
    """Assemble the locus from every displacement tableau on ``shape``."""
    if not is_generic(chain)[0]:
        warnings.warn("chain is not generic; the locus need not be pure", stacklevel=2)
    locus = BNLocus(shape, chain)
    where: dict[Torus, int] = {}
    for t in enumerate_tableaux(shape, chain):
        T = torus_of_tableau(t, chain)
        if T is None:
            locus.conflicts += 1
            continue
        if T not in where:
            where[T] = len(locus.tori)
            locus.tori.append(T)
            locus.tableaux.append([])
        locus.tableaux[where[T]].append(t)
    return locus


def rank_conditions(shape: Partition, g: int, all_boxes: bool = False) -> list[tuple[int, int]]:
    """``(d', r')`` pairs a class must satisfy: ``r(D + d'P) >= r'`` for each box.

    Box ``(x, y)`` demands ``r' = y - 1`` at ``d' = g + y - 1 - x``.  Only the
    row ends are needed unless ``all_boxes`` is set.
    """
    boxes = shape.boxes() if all_boxes else [(r, y) for y, r in enumerate(shape.rows, start=1)]
    return [(g + y - 1 - x, y - 1) for x, y in boxes]


def membership_by_rank(
    xi: ClassCoords,
    shape: Partition,
    chain: ChainOfLoops,
    engine: str = "metric",
    all_boxes: bool = False,
) -> bool:
    """Membership decided by the rank oracle."""
    for d_prime, r_prime in rank_conditions(shape, chain.g, all_boxes):
        if d_prime < 0:
            if r_prime >= 0:
                return False
            continue
        if not rank_at_least(chain, coords_to_divisor(xi, d_prime, chain), r_prime, engine=engine):
            return False
    return True


def membership_by_tableaux(xi: ClassCoords, locus: BNLocus) -> bool:
    """Membership decided by lying on one of the locus tori."""
    if not locus.tori and locus.shape.size == 0:
        return True
    return any(T.contains_class(xi, locus.chain) for T in locus.tori)


class GridTooLarge(InvalidInput):
    def __init__(self, size: int, cap: int):
        super().__init__(f"grid has {size} points, above the cap of {cap}; pass force to run anyway")
        self.size = size
        self.cap = cap


def grid_axes(chain: ChainOfLoops, step: Fraction) -> list[list[Fraction]]:
    """Multiples of ``step`` in ``[0, period_i)`` for each coordinate."""
    chain.require_rational()
    step = parse_rational(step)
    if step <= 0:
        raise InvalidInput("grid step must be positive")
    axes = []
    for i, q in enumerate(chain.periods(), start=1):
        count = q / step
        if count.denominator != 1:
            raise InvalidInput(f"step {step} does not divide the period {q} of coordinate {i}")
        axes.append([k * step for k in range(int(count))])
    return axes


@dataclass
class GridReport:
    shape: Partition
    step: Fraction
    points: int
    members: int
    tori: int
    disagreements: list[dict]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_dict(self) -> dict:
        return {
            "shape": list(self.shape.rows),
            "step": format_rational(self.step),
            "points": self.points,
            "members": self.members,
            "tori": self.tori,
            "disagreements": self.disagreements,
        }


def cross_validate_grid(
    shape: Partition,
    chain: ChainOfLoops,
    step: Fraction | str,
    cap: int = DEFAULT_GRID_CAP,
    force: bool = False,
    engine: str = "metric",
    locus: BNLocus | None = None,
) -> GridReport:
    """Compare both membership tests at every point of a grid in one fundamental domain."""
    axes = grid_axes(chain, step)
    size = math.prod(len(a) for a in axes)
    if size > cap and not force:
        raise GridTooLarge(size, cap)
    if locus is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            locus = bn_locus(shape, chain)
    members = 0
    disagreements = []
    for point in itertools.product(*axes):
        xi = ClassCoords(point)
        by_rank = membership_by_rank(xi, shape, chain, engine)
        by_tori = membership_by_tableaux(xi, locus)
        members += by_rank
        if by_rank != by_tori:
            disagreements.append({"xi": str(xi), "by_rank": by_rank, "by_tableaux": by_tori})
    return GridReport(shape, parse_rational(step), size, members, len(locus.tori), disagreements)


def iter_points(locus: BNLocus) -> Iterable[tuple[Torus, ClassCoords]]:
    for T in locus.tori:
        yield T, sample_point(T, locus.chain)
