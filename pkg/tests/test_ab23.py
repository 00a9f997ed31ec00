import pytest
from hypothesis import given, settings, strategies as st

from leaperforge.ab23 import (BASES, MOVE, NO_TOUR, S_PERM, base_for, compose, corner_check, corner_pattern,
                              corner_permutation, cycle_notation, extend_23, is_identity, lap_permutation,
                              link_edges, parse_perm, power, rim6_cycles, rim6_edges, rotate, stored_base,
                              tour_23)
from leaperforge.board import BoardError, LinkKind, contains_link, is_move, verify_tour

from oracles import check_tour, perm_power_identity

QUOTED_F = "(1 4 10 7)(2 5 11 8)(3 9 12 6)"


def test_parse_and_print_permutations():
    f = parse_perm(QUOTED_F)
    assert f[0] == 4 and f[3] == 10 and f[6] == 1
    assert cycle_notation(f) == QUOTED_F
    assert cycle_notation(parse_perm("()")) == "()"
    with pytest.raises(ValueError):
        parse_perm("(1 2)(2 3)")


def test_compose_and_power():
    s = parse_perm(S_PERM)
    assert is_identity(compose(s, s))
    assert power(parse_perm("(1 2 3)"), 3) == tuple(range(1, 13))


@pytest.mark.parametrize("n", [22, 24, 26, 28])
def test_corner_check_examples(n):
    assert corner_check(QUOTED_F, n)
    assert corner_check("()", n) == (n % 4 == 2 or is_identity(power(parse_perm(S_PERM), 4)))
    assert not corner_check("(1 2 3 4 5)", n)
    with pytest.raises(BoardError):
        corner_check(QUOTED_F, 23)


perms = st.permutations(list(range(1, 13))).map(tuple)


@settings(max_examples=200, deadline=None)
@given(perms, st.sampled_from([22, 24, 26, 28, 30]))
def test_corner_check_matches_oracle(f, n):
    g = f if n % 4 == 2 else tuple(parse_perm(S_PERM)[f[i] - 1] for i in range(12))
    assert corner_check(f, n) == perm_power_identity(g, 4)


def test_stored_corner_pattern_gives_the_quoted_permutation():
    pat = corner_pattern()
    assert all(is_move(MOVE, p, q) for p, q in pat)
    assert cycle_notation(corner_permutation(pat)) == QUOTED_F
    for n in (22, 24, 26, 34):
        assert is_identity(lap_permutation(corner_permutation(pat), n))


def test_rotate_is_a_quarter_turn():
    n = 22
    c = (3, 1)
    assert rotate(rotate(rotate(rotate(c, n), n), n), n) == c
    assert rotate((0, 0), n) == (n - 1, 0)


@pytest.mark.parametrize("n", [22, 24, 26])
def test_rim6_cycles(n):
    rim = rim6_cycles(n)
    assert len(rim) == 12 and sorted(rim.labels) == list(range(1, 13))
    assert rim.covered().size == n * n - (n - 12) ** 2
    for k in range(12):
        assert check_tour(rim.coords[rim.cycle(k)].tolist(), (n, n), 3, 2, hamiltonian=False)
    assert all(is_move(MOVE, p, q) for p, q in rim6_edges(n))


def test_rim6_needs_room():
    with pytest.raises(BoardError):
        rim6_edges(20)


@pytest.mark.parametrize("n", BASES)
def test_stored_bases_are_linked(n):
    t = stored_base(n)
    assert len(t) == n * n and verify_tour(t).hamiltonian
    assert check_tour(t.vertices.tolist(), (n, n), 3, 2)
    assert contains_link(t, LinkKind.ALPHA) and contains_link(t, LinkKind.BETA)


def test_extend_23_chain():
    t = stored_base(10)
    for n in (22, 34, 46):
        t = extend_23(t)
        assert len(t) == n * n and verify_tour(t).hamiltonian
        assert all(t.has_edge(p, q) for p, q in link_edges(n))


def test_extend_23_rejects_non_tours():
    t = stored_base(10)
    v = t.vertices.copy()
    v[[0, 5]] = v[[5, 0]]
    bad = type(t)(t.move, t.board, v)
    with pytest.raises(BoardError):
        extend_23(bad)


def test_base_for():
    assert base_for(10) == 10 and base_for(34) == 10 and base_for(36) == 24 and base_for(26) == 14
    assert base_for(12) is None and base_for(8) is None
    assert all(base_for(n) is not None for n in range(10, 200, 2) if n != 12)


@pytest.mark.parametrize("n", [28, 36, 38])
def test_tour_23(n):
    t = tour_23(n)
    assert len(t) == n * n and verify_tour(t).hamiltonian
    assert contains_link(t, LinkKind.ALPHA) and contains_link(t, LinkKind.BETA)


@pytest.mark.parametrize("n", NO_TOUR + (11,))
def test_tour_23_refuses(n):
    with pytest.raises(BoardError):
        tour_23(n)
