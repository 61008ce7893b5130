"""Combinatorial checks for lifting ramified divisors along the ladder of rectangles.

For a Schubert index ``alpha`` the ladder consists of

* the rectangles ``lambda_j = (r+1-j) x (g-d+r+alpha_j)``,
* their running unions ``lambda^j = lambda_0 u ... u lambda_j``,
* the overlaps ``mu_j = lambda^j n lambda_{j+1} = (r-j) x (g-d+r+alpha_j)``,
* the critical diagonals ``k_j = g-d+alpha_j+j``.

Every torus of the ``lambda^{j+1}``-locus should sit in exactly one torus of the
``mu_j``-locus, namely the one of the restricted tableau, and the two loci for
``lambda^j`` and ``lambda_{j+1}`` should meet properly.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import ChainOfLoops, Partition, SchubertIndex, is_generic, schubert_to_partition
from .errors import ConsistencyError, InvalidInput, UnsupportedInput
from .locus import Torus, torus_intersect, torus_of_tableau
from .tableaux import DisplacementTableau, enumerate_tableaux

Box = tuple[int, int]


@dataclass(frozen=True)
class Ladder:
    g: int
    index: SchubertIndex
    rectangles: tuple[Partition, ...]
    unions: tuple[Partition, ...]
    overlaps: tuple[Partition, ...]
    diagonals: tuple[int, ...]

    @property
    def r(self) -> int:
        return self.index.r

    @property
    def d(self) -> int:
        return self.index.d

    @property
    def alpha(self) -> tuple[int, ...]:
        return self.index.alpha

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "r": self.r,
            "d": self.d,
            "alpha": list(self.alpha),
            "rectangles": [list(p.rows) for p in self.rectangles],
            "unions": [list(p.rows) for p in self.unions],
            "overlaps": [list(p.rows) for p in self.overlaps],
            "diagonals": list(self.diagonals),
        }


def build_ladder(g: int, r: int, d: int, alpha) -> Ladder:
    """Construct the ladder and verify its identities."""
    index = alpha if isinstance(alpha, SchubertIndex) else SchubertIndex(r, d, tuple(alpha))
    if (index.r, index.d) != (r, d):
        raise InvalidInput("Schubert index does not match r and d")
    base = g - d + r
    if base < 0:
        raise UnsupportedInput(f"g - d + r = {base} < 0")
    rects = tuple(Partition.rectangle(r + 1 - j, base + index.alpha[j]) for j in range(r + 1))
    unions = [rects[0]]
    for j in range(1, r + 1):
        unions.append(unions[-1].union(rects[j]))
    overlaps = tuple(Partition.rectangle(r - j, base + index.alpha[j]) for j in range(r))
    diagonals = tuple(g - d + index.alpha[j] + j for j in range(r + 1))
    ladder = Ladder(g, index, rects, tuple(unions), overlaps, diagonals)
    _verify_ladder(ladder)
    return ladder


def _verify_ladder(L: Ladder) -> None:
    for j, mu in enumerate(L.overlaps):
        if mu != L.unions[j].intersection(L.rectangles[j + 1]):
            raise ConsistencyError(f"mu_{j} differs from lambda^{j} n lambda_{j+1}")
        if L.unions[j + 1].size != L.unions[j].size + L.rectangles[j + 1].size - mu.size:
            raise ConsistencyError(f"size identity fails at j={j}")
    if L.unions[-1] != schubert_to_partition(L.g, L.index):
        raise ConsistencyError("lambda^r differs from the partition of the Schubert index")


def diagonal(shape: Partition, k: int) -> list[Box]:
    """Boxes of ``shape`` on ``x - y = k``, bottom to top."""
    return [(x, y) for x, y in shape.boxes() if x - y == k]


def _check_j(ladder: Ladder, j: int) -> None:
    if not 0 <= j < ladder.r:
        raise InvalidInput(f"j must lie in 0..{ladder.r - 1}, got {j}")


def _tori(shape: Partition, chain: ChainOfLoops):
    """``(tableau, torus)`` pairs over every tableau with a consistent torus."""
    for t in enumerate_tableaux(shape, chain):
        T = torus_of_tableau(t, chain)
        if T is not None:
            yield t, T


def _advisory(chain: ChainOfLoops) -> bool:
    return not is_generic(chain)[0]


@dataclass
class CheckReport:
    """Outcome of one lemma check; ``counterexamples`` carry full payloads."""

    name: str
    j: int
    checked: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    advisory: bool = False

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    @property
    def verdict(self) -> str:
        if not self.ok:
            return "fail"
        return "advisory" if self.advisory else "pass"

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "j": self.j,
            "checked": self.checked,
            "verdict": self.verdict,
            "details": self.details,
            "counterexamples": self.counterexamples,
        }


def _tableau_json(t: DisplacementTableau) -> list[list[int]]:
    return t.as_matrix()


def check_unique_containment(ladder: Ladder, j: int, chain: ChainOfLoops) -> CheckReport:
    """Each ``lambda^{j+1}``-torus lies in exactly one ``mu_j``-torus, that of ``t|mu_j``."""
    _check_j(ladder, j)
    report = CheckReport("unique_containment", j, advisory=_advisory(chain))
    big, mu = ladder.unions[j + 1], ladder.overlaps[j]
    if big.size > chain.g:
        report.details["vacuous"] = True
        return report
    # same chain, so containment is inclusion of canonical constraint sets
    containers = [(tp, Tp.constraints()) for tp, Tp in _tori(mu, chain)]
    for t, T in _tori(big, chain):
        report.checked += 1
        cons = T.constraints()
        hits = [(tp, c) for tp, c in containers if c <= cons]
        restricted = t.restrict(mu)
        if len(hits) != 1 or hits[0][0] != restricted:
            report.counterexamples.append(
                {
                    "tableau": _tableau_json(t),
                    "torus": T.as_dict(),
                    "containers": [_tableau_json(tp) for tp, _ in hits],
                    "restriction": _tableau_json(restricted),
                }
            )
    report.details.update({"mu_tori": len(containers), "vacuous": False})
    return report


def _encode(tori: list[Torus], g: int) -> tuple[np.ndarray, np.ndarray]:
    """Residue matrix and fixed mask, one row per torus."""
    values = np.zeros((len(tori), g), dtype=np.int64)
    mask = np.zeros((len(tori), g), dtype=bool)
    for row, T in enumerate(tori):
        for i, v, _ in T.fixed:
            values[row, i - 1] = v
            mask[row, i - 1] = True
    return values, mask


def compatible_pairs(a: list[Torus], b: list[Torus], chunk: int = 256):
    """Index pairs ``(ia, ib)`` whose tori share no conflicting coordinate.

    Assumes all tori come from one chain, so a coordinate carries the same
    modulus everywhere and canonical residues compare by equality.
    """
    if not a or not b:
        return
    g = a[0].g
    va, ma = _encode(a, g)
    vb, mb = _encode(b, g)
    for start in range(0, len(a), chunk):
        sa, sm = va[start : start + chunk, None, :], ma[start : start + chunk, None, :]
        clash = (sm & mb[None, :, :] & (sa != vb[None, :, :])).any(axis=2)
        for ia, ib in zip(*np.nonzero(~clash)):
            yield start + int(ia), int(ib)


def check_proper_intersection(ladder: Ladder, j: int, chain: ChainOfLoops) -> CheckReport:
    """The ``lambda^j`` and ``lambda_{j+1}`` loci meet properly inside the ``mu_j`` locus."""
    _check_j(ladder, j)
    report = CheckReport("proper_intersection", j, advisory=_advisory(chain))
    g = chain.g
    lo, rect, big, mu = ladder.unions[j], ladder.rectangles[j + 1], ladder.unions[j + 1], ladder.overlaps[j]
    expected_dim = g - big.size
    report.details["codimension_additive"] = big.size == lo.size + rect.size - mu.size
    if not report.details["codimension_additive"]:
        report.counterexamples.append({"kind": "codimension", "sizes": [lo.size, rect.size, mu.size, big.size]})
    if big.size > g:
        report.details["vacuous"] = True
        return report
    A = sorted({T for _, T in _tori(lo, chain)}, key=lambda T: T.fixed)
    B = sorted({T for _, T in _tori(rect, chain)}, key=lambda T: T.fixed)
    target = {T.constraints(): T for _, T in _tori(big, chain)}
    by_size = big.size
    reached: set = set()
    pairs = 0
    for ia, ib in compatible_pairs(A, B):
        pairs += 1
        X = torus_intersect(A[ia], B[ib])
        if X is None:
            raise ConsistencyError("compatible pair produced an empty intersection")
        problem = None
        if X.dim > expected_dim:
            problem = "dimension"
        else:
            cons = X.constraints()
            if cons in target:
                reached.add(cons)
            elif not any(frozenset(sub) in target for sub in itertools.combinations(sorted(cons), by_size)):
                problem = "not_in_union_locus"
        if problem:
            report.counterexamples.append(
                {"kind": problem, "a": A[ia].as_dict(), "b": B[ib].as_dict(), "intersection": X.as_dict()}
            )
    missing = [T for cons, T in target.items() if cons not in reached]
    for T in missing:
        report.counterexamples.append({"kind": "not_an_intersection", "torus": T.as_dict()})
    impure = [T for T in target.values() if T.dim != expected_dim]
    for T in impure:
        report.counterexamples.append({"kind": "impure", "torus": T.as_dict()})
    report.checked = pairs
    report.details.update(
        {
            "vacuous": False,
            "lower_tori": len(A),
            "rectangle_tori": len(B),
            "union_tori": len(target),
            "meeting_pairs": pairs,
            "expected_dim": expected_dim,
            "pure": not impure,
        }
    )
    return report


@dataclass
class DiagonalStep:
    k: int
    boxes: int
    agree: bool
    forced: bool
    inclusion: bool

    def as_dict(self) -> dict:
        return {"k": self.k, "boxes": self.boxes, "agree": self.agree, "forced": self.forced, "inclusion": self.inclusion}


@dataclass
class DiagonalReport:
    j: int
    k_j: int
    steps: list[DiagonalStep]
    critical_match: bool

    @property
    def ok(self) -> bool:
        return self.critical_match and all(s.agree and s.inclusion for s in self.steps)

    @property
    def order(self) -> list[int]:
        return [s.k for s in self.steps]

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "k_j": self.k_j,
            "critical_match": self.critical_match,
            "ok": self.ok,
            "steps": [s.as_dict() for s in self.steps],
        }


def diagonal_restriction_check(
    t: DisplacementTableau,
    tp: DisplacementTableau,
    ladder: Ladder,
    j: int,
    chain: ChainOfLoops,
) -> DiagonalReport:
    """Replay the diagonal induction showing ``tp = t|mu_j`` when ``T(t)`` lies in ``T(tp)``.

    ``t`` lives on ``lambda^{j+1}`` and ``tp`` on ``mu_j``.  Diagonals are
    visited from ``k_j`` downward, then from ``k_j + 1`` upward.  At each one
    the labels of ``tp`` must appear among the labels of ``t`` on the same
    diagonal of ``lambda^{j+1}``; ``forced`` records whether the label sets of
    ``t`` and ``tp`` on ``mu_j`` coincide there, which by monotonicity along
    the diagonal forces box-wise agreement.
    """
    _check_j(ladder, j)
    big, mu = ladder.unions[j + 1], ladder.overlaps[j]
    if t.shape != big or tp.shape != mu:
        raise InvalidInput(f"expected tableaux on {big} and {mu}, got {t.shape} and {tp.shape}")
    T, Tp = torus_of_tableau(t, chain), torus_of_tableau(tp, chain)
    if T is None or Tp is None or not Tp.contains(T):
        raise InvalidInput("precondition failed: T(t) is not contained in T(t')")
    k_j = ladder.diagonals[j]
    critical_match = diagonal(mu, k_j) == diagonal(big, k_j)
    if not mu.size:
        return DiagonalReport(j, k_j, [], critical_match)
    diags = [x - y for x, y in mu.boxes()]
    order = list(range(k_j, min(diags) - 1, -1)) + list(range(k_j + 1, max(diags) + 1))
    steps = []
    for k in order:
        boxes = diagonal(mu, k)
        own = [t[b] for b in boxes]
        theirs = [tp[b] for b in boxes]
        inclusion = set(theirs) <= {t[b] for b in diagonal(big, k)}
        steps.append(DiagonalStep(k, len(boxes), own == theirs, set(own) == set(theirs), inclusion))
    return DiagonalReport(j, k_j, steps, critical_match)


def check_diagonal_induction(ladder: Ladder, j: int, chain: ChainOfLoops) -> CheckReport:
    """Run the diagonal replay on every contained pair found by exhaustive search."""
    _check_j(ladder, j)
    report = CheckReport("diagonal_induction", j, advisory=_advisory(chain))
    big, mu = ladder.unions[j + 1], ladder.overlaps[j]
    if big.size > chain.g:
        report.details["vacuous"] = True
        return report
    containers = [(tp, Tp.constraints()) for tp, Tp in _tori(mu, chain)]
    for t, T in _tori(big, chain):
        cons = T.constraints()
        for tp, c in containers:
            if not c <= cons:
                continue
            report.checked += 1
            replay = diagonal_restriction_check(t, tp, ladder, j, chain)
            if not replay.ok:
                report.counterexamples.append(
                    {"tableau": _tableau_json(t), "container": _tableau_json(tp), "replay": replay.as_dict()}
                )
    report.details.update({"vacuous": False, "k_j": ladder.diagonals[j]})
    return report


def monotone_filtration(ladder: Ladder, j: int, chain: ChainOfLoops) -> CheckReport:
    """Every ``lambda^{j+1}``-torus lies in some ``lambda^j``-torus."""
    _check_j(ladder, j)
    report = CheckReport("monotone_filtration", j, advisory=_advisory(chain))
    lower = {T.constraints() for _, T in _tori(ladder.unions[j], chain)}
    size = ladder.unions[j].size
    for t, T in _tori(ladder.unions[j + 1], chain):
        report.checked += 1
        if not any(frozenset(s) in lower for s in itertools.combinations(T.fixed, size)):
            report.counterexamples.append({"tableau": _tableau_json(t), "torus": T.as_dict()})
    return report


def verify_ladder(ladder: Ladder, chain: ChainOfLoops) -> list[CheckReport]:
    """All checks for every ``j``, in a fixed order."""
    if chain.g != ladder.g:
        raise InvalidInput(f"ladder has genus {ladder.g}, chain has {chain.g}")
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for j in range(ladder.r):
            out.append(check_unique_containment(ladder, j, chain))
            out.append(check_proper_intersection(ladder, j, chain))
            out.append(check_diagonal_induction(ladder, j, chain))
            out.append(monotone_filtration(ladder, j, chain))
    return out
