"""Displacement tableaux: validation, enumeration and counting."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union

from .core import ChainOfLoops, Partition, brill_noether_number, is_generic
from .errors import ConsistencyError, InvalidInput, UnsupportedInput

Box = tuple[int, int]
TorsionLike = Union[ChainOfLoops, Sequence[int]]


def torsion_of(chain: TorsionLike) -> tuple[int, ...]:
    """Torsion profile ``m_1..m_g`` of a chain, or a bare sequence passed through."""
    if isinstance(chain, ChainOfLoops):
        return chain.torsion
    return tuple(int(m) for m in chain)


def congruent(a: int, b: int, m: int) -> bool:
    """``a = b (mod m)``, where modulus 0 means equality."""
    return a == b if m == 0 else (a - b) % m == 0


@dataclass(frozen=True)
class DisplacementTableau:
    """Labels of a partition's boxes, stored row by row from the bottom."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows if len(row))
        object.__setattr__(self, "rows", rows)
        # raises on a non-partition shape
        Partition(tuple(len(r) for r in rows))

    @classmethod
    def from_labels(cls, shape: Partition, labels: Mapping[Box, int]) -> "DisplacementTableau":
        boxes = shape.boxes()
        if set(labels) != set(boxes):
            raise InvalidInput("labels must cover exactly the boxes of the shape")
        return cls(tuple(tuple(labels[(x, y)] for x in range(1, r + 1)) for y, r in enumerate(shape.rows, start=1)))

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    def __getitem__(self, box: Box) -> int:
        x, y = box
        return self.rows[y - 1][x - 1]

    def items(self) -> Iterator[tuple[Box, int]]:
        for y, row in enumerate(self.rows, start=1):
            for x, v in enumerate(row, start=1):
                yield (x, y), v

    def labels(self) -> dict[Box, int]:
        return dict(self.items())

    def values(self) -> set[int]:
        return {v for row in self.rows for v in row}

    def is_injective(self) -> bool:
        return len(self.values()) == self.shape.size

    def restrict(self, sub: Partition) -> "DisplacementTableau":
        if not sub.issubset(self.shape):
            raise InvalidInput(f"{sub} is not a subdiagram of {self.shape}")
        return DisplacementTableau(tuple(self.rows[y][:r] for y, r in enumerate(sub.rows)))

    def as_matrix(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "/".join(",".join(map(str, r)) for r in self.rows)


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with the first violation found, if any."""

    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_displacement_tableau(t: DisplacementTableau, chain: TorsionLike) -> Verdict:
    """Check strict increase along rows and columns, and the diagonal congruence
    for repeated labels modulo their torsion."""
    torsion = torsion_of(chain)
    g = len(torsion)
    labels = t.labels()
    for (x, y), v in labels.items():
        if not 1 <= v <= g:
            raise InvalidInput(f"label {v} at box {(x, y)} outside 1..{g}")
    for (x, y), v in labels.items():
        left = labels.get((x - 1, y))
        if left is not None and left >= v:
            return Verdict(False, f"row {y} not increasing at column {x}: {left} then {v}")
        below = labels.get((x, y - 1))
        if below is not None and below >= v:
            return Verdict(False, f"column {x} not increasing at row {y}: {below} then {v}")
    seen: dict[int, Box] = {}
    for (x, y), v in sorted(labels.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if v in seen:
            x0, y0 = seen[v]
            if not congruent(x - y, x0 - y0, torsion[v - 1]):
                return Verdict(
                    False,
                    f"label {v} at {(x0, y0)} and {(x, y)}: {x0 - y0} != {x - y} mod {torsion[v - 1]}",
                )
        else:
            seen[v] = (x, y)
    return Verdict(True)


def enumerate_tableaux(shape: Partition, chain: TorsionLike) -> Iterator[DisplacementTableau]:
    """Every displacement tableau on ``shape``, each exactly once.

    Boxes are filled in reading order (bottom row left to right, then upward)
    and candidate labels are tried smallest first, so the stream order is
    deterministic.
    """
    torsion = torsion_of(chain)
    g = len(torsion)
    boxes = shape.boxes()
    if not boxes:
        yield DisplacementTableau(())
        return
    cols = [shape.column_height(x) for x in range(1, shape.rows[0] + 1)]
    # a label must leave room for the strictly larger labels to its right and above
    headroom = [max(shape.row_length(y) - x, cols[x - 1] - y) for x, y in boxes]
    labels: dict[Box, int] = {}
    placed: dict[int, list[int]] = {}

    def rec(k: int) -> Iterator[DisplacementTableau]:
        if k == len(boxes):
            yield DisplacementTableau.from_labels(shape, labels)
            return
        x, y = boxes[k]
        low = max(labels.get((x - 1, y), 0), labels.get((x, y - 1), 0)) + 1
        for v in range(low, g - headroom[k] + 1):
            diag = x - y
            m = torsion[v - 1]
            if any(not congruent(diag, other, m) for other in placed.get(v, ())):
                continue
            labels[(x, y)] = v
            placed.setdefault(v, []).append(diag)
            yield from rec(k + 1)
            placed[v].pop()
            del labels[(x, y)]

    yield from rec(0)


def hook_lengths(shape: Partition) -> list[int]:
    return [
        shape.row_length(y) - x + shape.column_height(x) - y + 1
        for x, y in shape.boxes()
    ]


def standard_tableaux_count(shape: Partition) -> int:
    """Number of standard Young tableaux of ``shape`` by the hook-length formula."""
    return math.factorial(shape.size) // math.prod(hook_lengths(shape))


def count_tableaux_closed_form(shape: Partition, g: int, chain: ChainOfLoops | None = None) -> int:
    """``C(g, |shape|) * f^shape``: the tableau count on a generic chain of genus ``g``."""
    if chain is not None:
        if chain.g != g:
            raise InvalidInput(f"chain has genus {chain.g}, not {g}")
        if not is_generic(chain)[0]:
            raise UnsupportedInput("closed-form count only holds on generic chains")
    if shape.size > g:
        return 0
    return math.comb(g, shape.size) * standard_tableaux_count(shape)


def castelnuovo_number(g: int, r: int, d: int) -> int:
    """``g! * prod_{i=0..r} i! / (g - d + r + i)!``.

    Outside ``rho(g, r, d) = 0`` the value is computed anyway but a warning is
    issued, since it then no longer counts tori.
    """
    if g < 0 or r < 0:
        raise InvalidInput("g and r must be nonnegative")
    if g - d + r < 0:
        raise UnsupportedInput(f"g - d + r = {g - d + r} < 0")
    value = Fraction(math.factorial(g))
    for i in range(r + 1):
        value *= Fraction(math.factorial(i), math.factorial(g - d + r + i))
    rho = brill_noether_number(g, r, d)
    if rho != 0:
        warnings.warn(f"rho({g},{r},{d}) = {rho} != 0: value is not a torus count", stacklevel=2)
    if value.denominator != 1:
        raise ConsistencyError(f"castelnuovo_number({g},{r},{d}) = {value} is not an integer")
    return int(value)
