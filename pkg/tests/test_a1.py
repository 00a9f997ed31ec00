import numpy as np
import pytest

from leaperforge.a1 import (T1_REGION, T_REGION, GuideGraph, a1_tour, base_case_tour, build_guide, decompose,
                            extend_by_rim, is_structured, level_partition, link_b, position, replicate_square,
                            rim_colour_cycles, snake_order, structured_edges)
from leaperforge.board import BoardError, LinkKind, MoveSpec, contains_link, is_move, verify_tour

from oracles import check_tour


def _rim_size(n, a):
    return n * n - (n - 2 * a) ** 2


@pytest.mark.parametrize("a,n", [(2, 6), (2, 14), (2, 18), (4, 14), (4, 18), (6, 20)])
def test_rim_colour_cycles_partition_the_rim(a, n):
    rim = rim_colour_cycles(a, n)
    assert len(rim) == a * a
    lens = [len(rim.cycle(k)) for k in range(a * a)]
    assert sum(lens) == _rim_size(n, a)
    assert rim.covered().size == _rim_size(n, a)
    for k in range(a * a):
        cyc = rim.coords[rim.cycle(k)].tolist()
        assert check_tour(cyc, (n, n), a, 1, hamiltonian=False)
    for k, (i, j) in enumerate(rim.labels):
        assert i * n + j in set(rim.cycle(k).tolist())


def test_rim_cycle_lengths():
    assert [len(c) for c in map(rim_colour_cycles(2, 14).cycle, range(4))] == [24] * 4
    lens = sorted(len(rim_colour_cycles(4, 14).cycle(k)) for k in range(16))
    assert lens == [8] * 4 + [10] * 8 + [12] * 4
    with pytest.raises(BoardError):
        rim_colour_cycles(2, 5)
    with pytest.raises(BoardError):
        rim_colour_cycles(3, 14)


def test_structured_edges_are_moves():
    for a in (2, 4, 6):
        es = structured_edges(a)
        assert len(es) == a * a
        assert all(is_move(MoveSpec(a, 1), p, q) for p, q in es)
        assert all(sorted(abs(u - v) for u, v in zip(p, q)) == [1, a] for p, q in es)


def test_position_classes():
    assert [position(L) for L in ((0, 0), (1, 0), (1, 1), (0, 1), (2, 3))] == ["A", "B", "C", "D", "D"]


@pytest.mark.parametrize("a", [2, 4, 6, 8, 10, 12])
def test_guide_graph_degrees(a):
    g = GuideGraph(a)
    for L in g.vertices:
        nb = g.neighbours(L)
        assert sum(e.orientation == "vertical" for e in nb) == 2
        assert sum(e.orientation == "horizontal" for e in nb) == 2
        for e in nb:
            assert g.edge(e.target, L) is not None
            # special moves flip the position, ordinary ones keep it
            assert (position(e.target) != position(L)) == e.special


@pytest.mark.parametrize("a", [2, 4, 6, 8, 10, 12])
def test_guide_is_hamiltonian_with_four_specials(a):
    g = GuideGraph(a)
    cyc = build_guide(a)
    assert g.is_guide(cyc) and g.special_count(cyc) == 4
    assert cyc[0] == (0, 0) and cyc[-1] == (a - 2, 1)


def test_guide_graph_rejects_non_guides():
    g = GuideGraph(4)
    assert not g.is_guide(g.vertices)
    assert not g.is_guide(build_guide(4)[:-1])


@pytest.mark.parametrize("a", [2, 4, 6])
def test_level_partition_sizes(a):
    part = level_partition(a)
    sizes = {}
    for L in {L for L, _ in part.vertex_at}:
        sizes[L] = part.size(L)
    assert len(sizes) == a * a
    counts = sorted(sizes.values())
    assert counts.count(49) == 4 and counts.count(42) == 4 * (a - 2) and counts.count(36) == (a - 2) ** 2
    assert sum(counts) == (6 * a + 2) ** 2
    # every level has exactly one vertex in each of its blocks
    assert len(part.vertex_at) == (6 * a + 2) ** 2


def test_regions():
    assert len(T_REGION) == 4 and len(T1_REGION) == 12 and not T_REGION & T1_REGION


@pytest.mark.parametrize("a", [2, 4])
def test_base_case_tour(a):
    t = base_case_tour(a)
    assert len(t) == (6 * a + 2) ** 2
    assert verify_tour(t).hamiltonian and is_structured(t, a)
    assert check_tour(t.vertices.tolist(), t.board.dims, a, 1)


def test_extend_by_rim_chain():
    t = base_case_tour(2)
    for n in (18, 22):
        t = extend_by_rim(t, 2)
        assert len(t) == n * n and verify_tour(t).hamiltonian and is_structured(t, 2)
    with pytest.raises(BoardError):
        extend_by_rim(t, 4)


def test_replicate_square():
    t = base_case_tour(2)
    for k, size in ((2, 784), (3, 1764)):
        r = replicate_square(t, k)
        assert len(r) == size and verify_tour(r).hamiltonian and is_structured(r, 2)
    assert replicate_square(t, 1) is t
    with pytest.raises(BoardError):
        replicate_square(t, 0)


def test_snake_order():
    assert snake_order(2) == [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert len(set(snake_order(5))) == 25


@pytest.mark.parametrize("a,n,want", [(2, 14, (1, 0)), (2, 30, (1, 4)), (2, 28, (2, 0)), (4, 34, (1, 1)),
                                      (4, 104, (4, 0))])
def test_decompose(a, n, want):
    k, m = decompose(a, n)
    assert (k, m) == want and n == k * (6 * a + 2) + 2 * a * m


def test_decompose_rejects():
    with pytest.raises(BoardError):
        decompose(4, 20)
    with pytest.raises(BoardError):
        decompose(2, 15)


@pytest.mark.parametrize("a,n", [(2, 28), (2, 30), (4, 34)])
def test_a1_tour(a, n):
    t = a1_tour(a, n)
    assert len(t) == n * n and verify_tour(t).hamiltonian
    assert contains_link(t, LinkKind.B) and t.has_edge(*link_b(a, n))


def test_a1_tour_large_a4():
    t = a1_tour(4, 104)
    assert len(t) == 104 * 104 and verify_tour(t).hamiltonian and is_structured(t, 4)
    assert np.unique(t.vertices, axis=0).shape[0] == 104 * 104
