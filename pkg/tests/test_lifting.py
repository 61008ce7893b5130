import pytest

from chainbn.core import ChainOfLoops, Partition, SchubertIndex
from chainbn.errors import InvalidInput, UnsupportedInput
from chainbn.lifting import (
    build_ladder,
    check_diagonal_induction,
    check_proper_intersection,
    check_unique_containment,
    compatible_pairs,
    diagonal,
    diagonal_restriction_check,
    monotone_filtration,
    verify_ladder,
)
from chainbn.locus import torus_intersect, torus_of_tableau
from chainbn.tableaux import DisplacementTableau, enumerate_tableaux

from conftest import generic_chain


def rect(rows, cols):
    return Partition.rectangle(rows, cols)


def test_ladder_g12():
    L = build_ladder(12, 2, 11, (0, 1, 2))
    assert L.rectangles == (rect(3, 3), rect(2, 4), rect(1, 5))
    assert L.unions[1] == Partition((4, 4, 3))
    assert L.unions[2] == Partition((5, 4, 3))
    assert L.overlaps == (rect(2, 3), Partition((4,)))
    assert L.diagonals == (1, 3, 5)


def test_ladder_g4():
    L = build_ladder(4, 1, 3, (0, 0))
    assert L.rectangles == (rect(2, 2), rect(1, 2))
    assert L.overlaps == (Partition((2,)),)
    assert L.unions[1] == Partition((2, 2))


def test_constant_alpha_is_degenerate():
    L = build_ladder(9, 2, 8, (1, 1, 1))
    for j in range(L.r):
        assert L.rectangles[j + 1].issubset(L.unions[j])
        assert L.unions[j + 1] == L.unions[j]


@pytest.mark.parametrize("g", range(1, 13))
def test_ladder_identities_exhaustive(g):
    for r in range(0, 4):
        for d in range(r, g + r + 1):
            if g - d + r < 0:
                continue
            for alpha in _alphas(r, d):
                build_ladder(g, r, d, alpha)


def _alphas(r, d, cap=3):
    def rec(prefix):
        if len(prefix) == r + 1:
            yield tuple(prefix)
            return
        lo = prefix[-1] if prefix else 0
        for a in range(lo, min(d - r, cap) + 1):
            yield from rec(prefix + [a])

    yield from rec([])


def test_ladder_rejects_bad_input():
    with pytest.raises(UnsupportedInput):
        build_ladder(2, 1, 5, (0, 0))
    with pytest.raises(InvalidInput):
        build_ladder(4, 1, 3, SchubertIndex(1, 4, (0, 0)))


def test_unique_containment_g4():
    L, ch = build_ladder(4, 1, 3, (0, 0)), generic_chain(4)
    rep = check_unique_containment(L, 0, ch)
    assert rep.ok and rep.checked == 2 and rep.details["mu_tori"] == 6


def test_proper_intersection_g4():
    rep = check_proper_intersection(build_ladder(4, 1, 3, (0, 0)), 0, generic_chain(4))
    assert rep.ok and rep.details["expected_dim"] == 0 and rep.details["pure"]


def test_diagonal_replay_hand_example():
    L, ch = build_ladder(4, 1, 3, (0, 0)), generic_chain(4)
    t = DisplacementTableau(((1, 2), (3, 4)))
    tp = DisplacementTableau(((1, 2),))
    rep = diagonal_restriction_check(t, tp, L, 0, ch)
    assert rep.ok and rep.k_j == 1 and rep.order == [1, 0]
    assert [s.boxes for s in rep.steps] == [1, 1]


def test_diagonal_replay_rejects_noncontainment():
    L, ch = build_ladder(4, 1, 3, (0, 0)), generic_chain(4)
    with pytest.raises(InvalidInput):
        diagonal_restriction_check(DisplacementTableau(((1, 2), (3, 4))), DisplacementTableau(((1, 3),)), L, 0, ch)


def test_diagonal_replay_empty_overlap():
    # r = 0 ladders have no j; use mu_j empty via a zero-width rectangle
    L = build_ladder(3, 1, 4, (0, 0))
    assert L.overlaps[0] == Partition(())
    ch = generic_chain(3)
    t = next(enumerate_tableaux(L.unions[1], ch))
    rep = diagonal_restriction_check(t, DisplacementTableau(()), L, 0, ch)
    assert rep.ok and rep.steps == []


def test_critical_diagonal_shared():
    for g, r, d, alpha in [(12, 2, 11, (0, 1, 2)), (6, 1, 5, (0, 1))]:
        L = build_ladder(g, r, d, alpha)
        for j in range(r):
            k = L.diagonals[j]
            assert diagonal(L.overlaps[j], k) == diagonal(L.unions[j + 1], k)


@pytest.mark.parametrize("g,d,r,alpha", [(4, 3, 1, (0, 0)), (6, 5, 1, (0, 1)), (7, 6, 1, (0, 2)), (8, 7, 2, (0, 0, 1))])
def test_full_suite_small(g, d, r, alpha):
    for rep in verify_ladder(build_ladder(g, r, d, alpha), generic_chain(g)):
        assert rep.ok, rep.as_dict()
        assert rep.verdict == "pass"


def test_constant_alpha_suite_passes():
    for rep in verify_ladder(build_ladder(6, 1, 5, (1, 1)), generic_chain(6)):
        assert rep.ok


def test_vacuous_when_shape_too_big():
    L = build_ladder(4, 1, 3, (0, 1))
    rep = check_unique_containment(L, 0, generic_chain(4))
    assert rep.ok and rep.details["vacuous"]


def test_nongeneric_flags():
    L = build_ladder(4, 1, 3, (0, 0))
    loose = ChainOfLoops.from_lengths([1] * 4, [1] * 4, torsion=[0, 3, 3, 3])
    rep = check_unique_containment(L, 0, loose)
    assert rep.ok and rep.verdict == "advisory"
    # with torsion 2 a torus can sit in two containers; every check notices
    tight = ChainOfLoops.from_lengths([1] * 4, [1] * 4, torsion=[0, 2, 2, 2])
    rep = check_unique_containment(L, 0, tight)
    assert rep.verdict == "fail"
    assert rep.counterexamples[0]["containers"] == [[[1, 2]], [[1, 3]]]
    replay = diagonal_restriction_check(
        DisplacementTableau(((1, 2), (3, 4))), DisplacementTableau(((1, 3),)), L, 0, tight
    )
    assert not replay.ok and not replay.steps[0].agree
    assert not check_diagonal_induction(L, 0, tight).ok


def test_compatible_pairs_matches_intersection():
    ch = generic_chain(5)
    A = [torus_of_tableau(t, ch) for t in enumerate_tableaux(Partition((2, 1)), ch)]
    B = [torus_of_tableau(t, ch) for t in enumerate_tableaux(Partition((2,)), ch)]
    fast = set(compatible_pairs(A, B, chunk=7))
    slow = {(i, j) for i, a in enumerate(A) for j, b in enumerate(B) if torus_intersect(a, b) is not None}
    assert fast == slow


def test_monotone_filtration():
    L = build_ladder(6, 1, 5, (0, 1))
    assert monotone_filtration(L, 0, generic_chain(6)).ok


def test_bad_j():
    with pytest.raises(InvalidInput):
        check_diagonal_induction(build_ladder(4, 1, 3, (0, 0)), 1, generic_chain(4))


@pytest.mark.slow
def test_g12_suite():
    reports = verify_ladder(build_ladder(12, 2, 11, (0, 1, 2)), generic_chain(12))
    assert all(r.ok for r in reports)
    proper = [r for r in reports if r.name == "proper_intersection"]
    assert proper[1].details["expected_dim"] == 0
    assert proper[0].details["lower_tori"] == 9240 and proper[0].details["rectangle_tori"] == 6930
    assert proper[1].details["union_tori"] == 2112
