"""Tours on [n]^d built floor by floor from a 2-D tour.

A floor is the 2-D slice with fixed coordinates ``p = (x_3, ..., x_d)``.
Every floor carries a copy of the same 2-D tour; consecutive floors are
joined by swapping one edge on each for two cross edges.  The full board is
held as a (N, 2) neighbour array so each join is O(1).
"""
from __future__ import annotations

import itertools
import logging
from typing import Sequence

import numpy as np

from .board import BoardError, BoardSpec, LinkKind, MoveSpec, Tour, contains_link, link_edge
from .merge import MergeError, swap_edges, walk, nbrs_of_cycle

log = logging.getLogger(__name__)


def grid_ham_path(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Boustrophedon Hamiltonian path of the grid graph; the first axis varies fastest."""
    dims = list(dims)
    if any(d < 1 for d in dims):
        raise ValueError("grid sides must be positive")
    if not dims:
        return [()]
    if len(dims) == 1:
        return [(i,) for i in range(dims[0])]
    inner = grid_ham_path(dims[:-1])
    out = []
    for i in range(dims[-1]):
        seq = inner if i % 2 == 0 else inner[::-1]
        out.extend(p + (i,) for p in seq)
    return out


class FloorStack:
    """Copies of a 2-D tour on every floor of [n]^d, flattened in C order."""

    def __init__(self, base: Tour, d: int):
        n = base.board.dims[0]
        if base.board.d != 2 or base.board.dims[1] != n:
            raise BoardError("base tour must live on a square 2-D board")
        if d < 2:
            raise BoardError("d must be >= 2")
        self.n, self.d, self.move = n, d, base.move
        self.board = BoardSpec.square(n, d)
        self.floors = n ** (d - 2)
        nbr2 = nbrs_of_cycle(base.flat, n * n)
        f = np.arange(self.floors, dtype=np.int64)
        self.nbr = (nbr2[:, None, :] * self.floors + f[None, :, None]).reshape(-1, 2)
        self.joins = 0

    def vid(self, xy: Sequence[int], p: Sequence[int]) -> int:
        return self.board.index(tuple(xy) + tuple(p))

    def join(self, e1, p1, e2, p2) -> None:
        """Swap edge e1 on floor p1 and edge e2 on floor p2 for the two cross edges."""
        u, v = self.vid(e1[0], p1), self.vid(e1[1], p1)
        w, x = self.vid(e2[0], p2), self.vid(e2[1], p2)
        try:
            swap_edges(self.nbr, u, v, w, x)
        except MergeError as exc:
            raise MergeError(f"bridge edge missing between floors {tuple(p1)} and {tuple(p2)}: {exc}") from None
        self.joins += 1

    def tour(self) -> Tour:
        cyc = walk(self.nbr, 0)
        if len(cyc) != self.board.size:
            raise MergeError(f"floors did not close into one cycle ({len(cyc)} of {self.board.size})")
        return Tour.from_flat(self.move, self.board, cyc)


def extend_a1_to_d(a: int, n: int, d: int, base: Tour | None = None) -> Tour:
    """(a, 1) tour of [n]^d from a 2-D tour containing link B."""
    if d < 2:
        raise BoardError("d must be >= 2")
    if base is None:
        from .a1 import a1_tour
        base = a1_tour(a, n)
    if base.move != MoveSpec(a, 1) or base.board != BoardSpec.square(n):
        raise BoardError("base tour does not match (a, 1) on [n]^2")
    if not contains_link(base, LinkKind.B):
        raise BoardError("base tour lacks link B")
    if d == 2:
        return base
    st = FloorStack(base, d)
    link_b = link_edge(LinkKind.B, base.move, base.board)
    corner = ((0, 0), (a, 1))
    path = grid_ham_path([n] * (d - 2))
    for p, q in zip(path, path[1:]):
        # link B on p with the forced corner edge on q; cross edges (a,0,p)-(0,0,q), (0,1,p)-(a,1,q)
        st.join(link_b, p, corner, q)
    return st.tour()


def residue(p: Sequence[int], a: int) -> tuple[int, ...]:
    return tuple(int(x) % a for x in p)


def extend_ab_to_d(move: MoveSpec, n: int, d: int, base: Tour) -> Tour:
    """Tour of [n]^d from a linked 2-D tour (one containing links alpha and beta)."""
    e, o = move.even_odd
    if np.gcd(e, o) != 1 or (e + o) % 2 == 0:
        raise BoardError(f"({move}) needs coprime legs of different parity")
    if e < 2:
        raise BoardError("the even leg must be at least 2")
    if n < e + o or n % 2:
        raise BoardError(f"need even n >= {e + o}, got {n}")
    if base.move != move or base.board != BoardSpec.square(n):
        raise BoardError("base tour does not match the move and board")
    alpha = link_edge(LinkKind.ALPHA, move, base.board)
    beta = link_edge(LinkKind.BETA, move, base.board)
    for kind, edge in (("alpha", alpha), ("beta", beta)):
        if not base.has_edge(*edge):
            raise BoardError(f"base tour lacks link {kind}")
    if set(alpha) & set(beta):
        raise BoardError("links alpha and beta overlap")
    if d == 2:
        return base
    st = FloorStack(base, d)
    k = d - 2
    bl_corner = ((0, 0), (e, o))
    br_corner = ((n - 1, 0), (n - 1 - o, e))

    # phase 1: inside each class mod e, floors e apart joined by the corner edge and alpha
    for r in itertools.product(range(e), repeat=k):
        sides = [len(range(ri, n, e)) for ri in r]
        floors = [tuple(ri + e * qi for ri, qi in zip(r, q)) for q in grid_ham_path(sides)]
        for p, q in zip(floors, floors[1:]):
            st.join(bl_corner, p, alpha, q)

    # phase 2: class cycles joined along floors o apart with the corner edge and beta
    used: set[tuple[tuple[int, ...], str]] = set()
    reps = [tuple(o * c for c in q) for q in grid_ham_path([e] * k)]
    for p, q in zip(reps, reps[1:]):
        delta = np.subtract(q, p)
        f1 = residue(p, e)
        f2 = tuple(np.add(f1, delta).tolist())
        if min(f2) < 0 or max(f2) >= n:
            f2 = residue(q, e)
            f1 = tuple(np.subtract(f2, delta).tolist())
        if min(f1) < 0 or max(f1) >= n:  # pragma: no cover
            raise MergeError(f"no floor pair for classes {p} and {q}")
        x, y = f1, f2
        if (x, "corner") in used or (y, "beta") in used:
            x, y = f2, f1
        if (x, "corner") in used or (y, "beta") in used:
            raise MergeError(f"bottom-right edges of floors {f1}, {f2} already used")
        used.add((x, "corner"))
        used.add((y, "beta"))
        st.join(br_corner, x, beta, y)
    return st.tour()
