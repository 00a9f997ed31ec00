import numpy as np
import pytest

from leaperforge.ab25 import (ALPHA_EDGE, BASE_SIDE, BRICK, H_EDGE, MOVE, V_EDGE, assemble_grid, assemble_rect,
                              assemble_strip, base_required, base_tour, beta_edge, block, block_edges,
                              brick_cover, corner_edges, decompose, orient, search_block, strip_tour, supported,
                              tour_25)
from leaperforge.board import BoardError, BoardSpec, LinkKind, contains_link, is_move, link_edge, verify_tour
from leaperforge.merge import MergeError

from oracles import check_tour


def test_canonical_edges_are_moves_and_match_links():
    b = BoardSpec.square(30)
    for e in (H_EDGE, V_EDGE, ALPHA_EDGE, beta_edge(30), *corner_edges(20, 10)):
        assert is_move(MOVE, *e)
    assert link_edge(LinkKind.H, MOVE, b) == H_EDGE
    assert link_edge(LinkKind.V, MOVE, b) == V_EDGE
    assert link_edge(LinkKind.ALPHA, MOVE, b) == ALPHA_EDGE
    assert link_edge(LinkKind.BETA, MOVE, b) == beta_edge(30)


def test_corner_edges_cover_all_corners():
    es = corner_edges(20, 10)
    assert len(es) == 8 and len({frozenset(e) for e in es}) == 8
    # two images near each corner
    for cx, cy in ((0, 0), (19, 0), (0, 9), (19, 9)):
        near = [e for e in es if all(abs(x - cx) <= 5 and abs(y - cy) <= 5 for x, y in e)]
        assert len(near) == 2


def test_brick_cover():
    cs = brick_cover()
    assert cs.board.dims == BRICK and cs.covered().size == 200
    for r in cs.components():
        assert check_tour(cs.coords[cs.cycle(r)].tolist(), BRICK, 5, 2, hamiltonian=False)
    assert all(cs.has_edge(p, q) for p, q in block_edges(*BRICK))


def test_base_tour():
    t = base_tour()
    assert t.board.dims == (BASE_SIDE, BASE_SIDE) and verify_tour(t).hamiltonian
    assert all(t.has_edge(p, q) for p, q in base_required())
    assert check_tour(t.vertices.tolist(), (14, 14), 5, 2)


@pytest.mark.parametrize("h", [20, 30, 44, 54])
def test_strip_tours(h):
    t = strip_tour(h)
    assert t.board.dims == (20, h) and len(t) == 20 * h and verify_tour(t).hamiltonian
    assert all(t.has_edge(p, q) for p, q in block_edges(20, h))


@pytest.mark.parametrize("h", [10, 24, 34, 15])
def test_strip_heights_rejected(h):
    with pytest.raises(BoardError):
        strip_tour(h)


def test_search_block():
    t = search_block(20, 14)
    assert t is not None and t.board.dims == (20, 14) and verify_tour(t).hamiltonian
    assert all(t.has_edge(p, q) for p, q in block_edges(20, 14))
    assert search_block(20, 10, seeds=10) is None


def test_orient():
    t = base_tour()
    img = orient(t, (14, 14), [H_EDGE], [V_EDGE])
    assert img.has_edge(*H_EDGE) and verify_tour(img).hamiltonian
    with pytest.raises(MergeError):
        orient(t, (14, 14), [((0, 0), (1, 1))])


@pytest.mark.parametrize("k,sides,want", [
    (174, (154, 20), [154, 20]),
    (40, (154, 20), [20, 20]),
    (12, (14, 20), None),
    (34, (14, 20), [20, 14]),
    (0, (14, 20), None),
])
def test_decompose(k, sides, want):
    assert decompose(k, sides) == want


def test_assemble_strip_34x14():
    pieces = {14: base_tour(), 20: search_block(20, 14)}
    t = assemble_strip(14, pieces, 34)
    assert t.board.dims == (34, 14) and verify_tour(t).hamiltonian
    with pytest.raises(BoardError):
        assemble_strip(14, pieces, 12)
    with pytest.raises(BoardError):
        assemble_strip(14, pieces, 35)


def test_assemble_grid_of_base_squares():
    t = assemble_grid([14, 14], [14, 14, 14], lambda w, h: base_tour())
    assert t.board.dims == (28, 42) and verify_tour(t).hamiltonian
    assert check_tour(t.vertices.tolist(), (28, 42), 5, 2)


def test_block_dispatch():
    assert block(14, 14) is base_tour()
    assert block(10 * 2, 20).board.dims == (20, 20)
    assert block(44, 20).board.dims == (44, 20)
    with pytest.raises(BoardError):
        block(16, 16)


def test_assemble_rect_308x174():
    t = assemble_rect(308, 174)
    assert t.board.dims == (308, 174) and verify_tour(t).hamiltonian
    assert np.unique(t.vertices, axis=0).shape[0] == 308 * 174


@pytest.mark.parametrize("n", [28, 40, 174])
def test_tour_25(n):
    t = tour_25(n)
    assert len(t) == n * n and verify_tour(t).hamiltonian
    assert contains_link(t, LinkKind.ALPHA) and contains_link(t, LinkKind.BETA)


def test_supported_sizes():
    assert supported(14) and supported(40) and supported(174) and supported(308)
    assert not supported(12) and not supported(16) and not supported(15)
    with pytest.raises(BoardError):
        tour_25(16)
    with pytest.raises(BoardError):
        tour_25(15)
