import numpy as np
import pytest

from leaperforge.board import BoardSpec, MoveSpec, Tour, verify_tour
from leaperforge.merge import (Bridge, CycleSet, MergeError, Unmergeable, compound, cycles_of, find_bridge,
                               merge_all, nbrs_of_cycle, swap_edges, walk)
from leaperforge.search import two_factor

from oracles import check_tour

KNIGHT = MoveSpec(2, 1)


def _four_cycles():
    cs = two_factor(BoardSpec.square(4), KNIGHT)
    return [cs.cycle_coords(cs.labels[r]) for r in cs.components()]


def test_compound_of_two_cycles():
    assert sorted(len(c) for c in _four_cycles()) == [4, 4, 4, 4]
    from leaperforge.ab25 import BRICK, MOVE, _brick_data
    board = BoardSpec(BRICK)
    cycles = [[tuple(p) for p in c] for c in _brick_data()["cycles"]]
    cs = CycleSet(board, MOVE, cycles)
    pairs = [(i, j, cs.find_bridge(i, j)) for i in range(len(cycles)) for j in range(i + 1, len(cycles))]
    i, j, br = next(p for p in pairs if p[2] is not None)
    out = compound(cycles[i], cycles[j], br, MOVE)
    assert len(out) == len(cycles[i]) + len(cycles[j]) and set(out) == set(cycles[i]) | set(cycles[j])
    assert check_tour(out, BRICK, 5, 2, hamiltonian=False)
    (a1, b1), (a2, b2) = br.e1, br.e2
    assert br.cross == ((a1, a2), (b1, b2))


def test_compound_rejects_bad_input():
    c1 = [(0, 0), (2, 1), (4, 0), (2, 2)]  # not a real cycle, only its edges matter here
    c2 = [(5, 5), (6, 7)]
    with pytest.raises(MergeError):
        compound(c1, c1, Bridge(((0, 0), (2, 1)), ((0, 0), (2, 1))))
    with pytest.raises(MergeError):
        compound(c1, c2, Bridge(((0, 0), (4, 0)), ((5, 5), (6, 7))))
    with pytest.raises(MergeError):
        compound(c1, c2, Bridge(((0, 0), (2, 1)), ((5, 5), (6, 7))), KNIGHT)


def test_find_bridge_none_for_distant_cycles():
    # two 4-cycles in opposite corners of a 12 x 12 board
    a = [(0, 0), (1, 2), (3, 3), (2, 1)]
    b = [(x + 8, y + 8) for x, y in a]
    cs = CycleSet(BoardSpec.square(12), KNIGHT, [a, b], ["a", "b"])
    assert find_bridge(cs, "a", "b") is None


def test_find_bridge_respects_protection():
    cycles = _four_cycles()
    cs = CycleSet(BoardSpec.square(4), KNIGHT, cycles)
    prot = {(c[k], c[(k + 1) % 4]) for k in range(4) for c in [cycles[0]]}
    for j in range(1, 4):
        assert cs.find_bridge(0, j, prot) is None


def test_find_bridge_is_deterministic_and_least():
    cycles = _four_cycles()
    a = CycleSet(BoardSpec.square(4), KNIGHT, cycles).find_bridge(0, 1)
    b = CycleSet(BoardSpec.square(4), KNIGHT, cycles).find_bridge(0, 1)
    assert a == b


def test_merge_all_single_cycle_is_identity():
    from leaperforge.ab23 import stored_base
    t = stored_base(10)
    cs = CycleSet(t.board, t.move, [t.vertices])
    out = merge_all(cs)
    assert {frozenset(e) for e in out.edges()} == {frozenset(e) for e in t.edges()}


def test_merge_all_rim_plus_middle():
    from leaperforge.a1 import base_case_tour, rim_colour_cycles, structured_edges
    rim = rim_colour_cycles(2, 18)
    mid = np.asarray(base_case_tour(2).vertices) + 2
    cycles = [rim.cycle(k) for k in range(len(rim))] + [mid]
    cs = CycleSet(rim.board, KNIGHT, cycles, rim.labels + ["middle"])
    prot = set(structured_edges(2))
    t = merge_all(cs, prot)
    assert verify_tour(t).hamiltonian and len(t) == 324
    assert all(t.has_edge(p, q) for p, q in prot)


def test_merge_all_two_stacked_bricks():
    from leaperforge.ab25 import BRICK, MOVE, _brick_data, _seam_bridges, _stack
    cycles = [np.asarray(c) for c in _brick_data()["cycles"]]
    two = CycleSet(BoardSpec((20, 20)), MOVE, _stack(cycles, 2))
    for br in _seam_bridges(2):
        two.try_bridge(br)
    t = merge_all(two)
    assert verify_tour(t).hamiltonian and len(t) == 400 and BRICK == (20, 10)


def test_unmergeable_reports_labels():
    a = [(0, 0), (1, 2), (3, 3), (2, 1)]
    b = [(x + 8, y + 8) for x, y in a]
    cs = CycleSet(BoardSpec.square(12), KNIGHT, [a, b], ["a", "b"])
    with pytest.raises(Unmergeable) as err:
        cs.merge_all()
    assert sorted(err.value.labels) == ["a", "b"]


def test_cycleset_rejects_overlap():
    a = [(0, 0), (1, 2), (3, 3), (2, 1)]
    with pytest.raises(MergeError):
        CycleSet(BoardSpec.square(6), KNIGHT, [a, a])


def test_apply_checks_bridge():
    cycles = _four_cycles()
    cs = CycleSet(BoardSpec.square(4), KNIGHT, cycles)
    c0 = [cs.flat(p) for p in cycles[0]]
    with pytest.raises(MergeError):
        cs.apply(c0[0], c0[1], c0[2], c0[3])


def test_neighbour_array_helpers():
    cyc = np.array([0, 5, 3, 7])
    nbr = nbrs_of_cycle(cyc, 8)
    assert list(walk(nbr, 0)) in ([0, 5, 3, 7], [0, 7, 3, 5])
    nbr2 = nbrs_of_cycle(np.array([1, 2, 4, 6]), 8, nbr.copy())
    assert sorted(len(c) for c in cycles_of(nbr2)) == [4, 4]
    swap_edges(nbr2, 0, 5, 1, 2)
    assert len(walk(nbr2, 0)) == 8
    with pytest.raises(MergeError):
        swap_edges(nbr2, 0, 3, 1, 2)


def test_cycleset_to_tour_and_json_round_trip():
    from leaperforge.formats import cycles_from_json, cycles_to_json
    cs = two_factor(BoardSpec((20, 10)), MoveSpec(5, 2))
    back = cycles_from_json(cycles_to_json(cs))
    assert len(back) == len(cs) and back.covered().size == 200
    with pytest.raises(MergeError):
        cs.to_tour()
    t = Tour.from_coords(KNIGHT, BoardSpec.square(4), _four_cycles()[0])
    assert len(t) == 4
