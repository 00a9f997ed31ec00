"""Tours of the (a, 1) leaper for even a.

The building blocks are

* the rim colouring: in a frame of width ``a`` the moves that stay inside
  one 2x2 unit class split the frame into ``a*a`` disjoint cycles;
* levels and blocks on the [6a+2]^2 board, and the guide, a Hamiltonian
  cycle on the level adjacency graph, which together give the base tour;
* replication of a base tour onto a k x k grid of boards and growing a tour
  by one rim at a time.

A tour is *structured* when it contains the a^2 edges
``{(i, j), (i + a, j + (-1)**j)}`` for ``i, j`` in ``range(a)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .board import (BoardError, BoardSpec, LinkKind, MoveSpec, Tour, contains_link, flip_x, legal_moves,
                    link_edge, transpose, verify_tour)
from .merge import Bridge, CycleSet, MergeError, cycles_of
from .search import grid_ham_path_between

log = logging.getLogger(__name__)

BLOCKS = 7  # the [6a+2]^2 board is 7 x 7 blocks, the last row/column incomplete
T_REGION = frozenset((i, j) for i in (2, 3) for j in (2, 3))
T1_REGION = frozenset((i, j) for i in range(1, 5) for j in range(1, 5)) - T_REGION


def _check_even(a: int, name: str = "a"):
    if a < 2 or a % 2:
        raise BoardError(f"{name} must be an even integer >= 2, got {a}")


def structured_edges(a: int, offset: Sequence[int] = (0, 0)) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    ox, oy = offset
    return [((ox + i, oy + j), (ox + i + a, oy + j + (1 if j % 2 == 0 else -1)))
            for i in range(a) for j in range(a)]


def is_structured(t: Tour, a: int) -> bool:
    return all(t.has_edge(p, q) for p, q in structured_edges(a))


def in_middle(n: int, a: int, x, y):
    return (a <= x) & (x <= n - a - 1) & (a <= y) & (y <= n - a - 1)


def _unit_edges(n: int, a: int, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edges (u < v, flat ids) of (a, 1) moves between equivalent units, inside ``mask``.

    A move (+-a, +-1) joins equivalent units when it keeps y inside its row
    pair; a move (+-1, +-a) when it keeps x inside its column pair.
    """
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    us, vs = [], []
    for dx, dy in ((a, 1), (a, -1), (1, a), (-1, a)):
        X, Y = x + dx, y + dy
        ok = (X >= 0) & (X < n) & (Y >= 0) & (Y < n)
        if abs(dx) == a:
            ok &= (y // 2) == (Y // 2)
        else:
            ok &= (x // 2) == (X // 2)
        Xc, Yc = np.where(ok, X, 0), np.where(ok, Y, 0)
        ok &= mask & mask[Xc, Yc]
        u = (x * n + y)[ok]
        v = (X * n + Y)[ok]
        us.append(np.minimum(u, v))
        vs.append(np.maximum(u, v))
    return np.concatenate(us), np.concatenate(vs)


def _components(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    g = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n * n, n * n))
    return connected_components(g, directed=False)[1]


# ---------------------------------------------------------------- rim

def rim_colour_cycles(a: int, n: int) -> CycleSet:
    """The a^2 colour cycles of the rim of width ``a`` of [n]^2, labelled (i, j) by the vertex they contain."""
    _check_even(a)
    _check_even(n, "n")
    if n < 2 * a + 2:
        raise BoardError(f"rim of width {a} needs n >= {2 * a + 2}, got {n}")
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rim = ~in_middle(n, a, x, y)
    u, v = _unit_edges(n, a, rim)
    nbr = np.full((n * n, 2), -1, dtype=np.int64)
    fill = np.zeros(n * n, dtype=np.int64)
    for p, q in ((u, v), (v, u)):
        for k in range(len(p)):
            s = p[k]
            if fill[s] >= 2:
                raise MergeError("rim vertex of degree > 2")
            nbr[s, fill[s]] = q[k]
            fill[s] += 1
    if np.any(fill[rim.ravel()] != 2):
        raise MergeError("rim subgraph is not 2-regular")
    cycles = cycles_of(nbr)
    owner = {}
    for k, c in enumerate(cycles):
        for v0 in c:
            owner[int(v0)] = k
    labels = [None] * len(cycles)
    for i in range(a):
        for j in range(a):
            labels[owner[i * n + j]] = (i, j)
    if len(cycles) != a * a or None in labels:
        raise MergeError(f"expected {a * a} rim colours, found {len(cycles)}")
    board = BoardSpec.square(n)
    return CycleSet(board, MoveSpec(a, 1), cycles, labels)


def extend_by_rim(t: Tour, a: int) -> Tour:
    """A structured tour on [n+2a]^2 from a structured tour on [n]^2."""
    n = t.board.dims[0]
    if t.board.d != 2 or t.board.dims[1] != n or t.move != MoveSpec(a, 1):
        raise BoardError("extend_by_rim needs an (a,1) tour on a square board")
    if not is_structured(t, a):
        raise BoardError("input tour is not structured")
    if n < a + 2:
        raise BoardError(f"board too small to extend, n={n}")
    big = n + 2 * a
    cs = rim_colour_cycles(a, big)
    middle = np.asarray(t.vertices) + a
    cs = CycleSet(cs.board, cs.move, [cs.cycle(k) for k in range(len(cs.labels))] + [middle],
                  cs.labels + ["middle"])
    for i in range(a):
        for j in range(a):
            jj = j + (1 if j % 2 == 0 else -1)
            rim_e = ((i + a + 1, j), (i + 2 * a + 1, jj))
            mid_e = ((i + a, j + a), (i + 2 * a, jj + a))
            if not cs.try_bridge(Bridge(rim_e, mid_e)):
                log.info("rim bridge %s / %s unavailable, searching", rim_e, mid_e)
    protected = set(structured_edges(a))
    out = cs.merge_all(protected).to_tour()
    if not is_structured(out, a):
        raise MergeError("extended tour lost a structured edge")
    return out


# ---------------------------------------------------------------- levels and guide

def position(level: tuple[int, int]) -> str:
    i, j = level
    return {(0, 0): "A", (1, 0): "B", (1, 1): "C", (0, 1): "D"}[(i % 2, j % 2)]


@dataclass(frozen=True)
class GuideEdge:
    target: tuple[int, int]
    orientation: str  # "vertical" or "horizontal"
    special: bool


class GuideGraph:
    """Adjacency of the a^2 levels; each level has two vertical and two horizontal neighbours."""

    def __init__(self, a: int):
        _check_even(a)
        self.a = a
        self.vertices = [(i, j) for i in range(a) for j in range(a)]

    def neighbours(self, level: tuple[int, int]) -> list[GuideEdge]:
        a = self.a
        i, j = level
        sj = 1 if j % 2 == 0 else -1
        si = 1 if i % 2 == 0 else -1
        out = []
        if i >= 2:
            out.append(GuideEdge((i - 2, j), "vertical", False))
        if i <= a - 3:
            out.append(GuideEdge((i + 2, j), "vertical", False))
        if i in (0, 1):
            out.append(GuideEdge((i - 2 + a, j + sj), "vertical", True))
        if i in (a - 2, a - 1):
            out.append(GuideEdge((i + 2 - a, j + sj), "vertical", True))
        if j >= 2:
            out.append(GuideEdge((i, j - 2), "horizontal", False))
        if j <= a - 3:
            out.append(GuideEdge((i, j + 2), "horizontal", False))
        if j in (0, 1):
            out.append(GuideEdge((i + si, j - 2 + a), "horizontal", True))
        if j in (a - 2, a - 1):
            out.append(GuideEdge((i + si, j + 2 - a), "horizontal", True))
        return out

    def edge(self, p, q) -> GuideEdge | None:
        for e in self.neighbours(p):
            if e.target == tuple(q):
                return e
        return None

    def is_guide(self, cycle: Sequence[tuple[int, int]]) -> bool:
        cyc = [tuple(c) for c in cycle]
        if sorted(cyc) != sorted(self.vertices):
            return False
        return all(self.edge(cyc[k], cyc[(k + 1) % len(cyc)]) is not None for k in range(len(cyc)))

    def special_count(self, cycle) -> int:
        cyc = [tuple(c) for c in cycle]
        return sum(self.edge(cyc[k], cyc[(k + 1) % len(cyc)]).special for k in range(len(cyc)))


def _position_path(a: int, parity: tuple[int, int], start, end) -> list[tuple[int, int]] | None:
    h = a // 2
    cells = grid_ham_path_between(h, h, (start[0] // 2, start[1] // 2), (end[0] // 2, end[1] // 2))
    if cells is None:
        return None
    return [(2 * r + parity[0], 2 * c + parity[1]) for r, c in cells]


@lru_cache(maxsize=None)
def build_guide(a: int) -> tuple[tuple[int, int], ...]:
    """Hamiltonian cycle of the guide graph: positions A, B, C, D in turn, from L00 to L_{a-2,1}."""
    _check_even(a)
    A = _position_path(a, (0, 0), (0, 0), (0, a - 2))
    B = _position_path(a, (1, 0), (1, 0), (1, a - 2))
    g = GuideGraph(a)
    for c_end, d_start in _c_d_handovers(a):
        C = _position_path(a, (1, 1), (a - 1, a - 1), c_end)
        D = _position_path(a, (0, 1), d_start, (a - 2, 1))
        if None in (A, B, C, D):
            continue
        cyc = tuple(A + B + C + D)
        if g.is_guide(cyc) and g.special_count(cyc) == 4:
            return cyc
    raise AssertionError(f"no guide found for a={a}")  # pragma: no cover


def _c_d_handovers(a: int):
    """Pairs (last C level, first D level) joined by a special move."""
    for i in range(1, a, 2):
        yield (i, 1), (i - 1, a - 1)
        yield (i, a - 1), (i - 1, 1)


@dataclass
class LevelPartition:
    """Block and level of every vertex of [6a+2]^2."""

    a: int
    n: int
    level: np.ndarray  # (n, n, 2) level index (i, j)
    vertex_at: dict  # (level, block) -> coordinate

    def __getitem__(self, c):
        x, y = c
        return (x // self.a, y // self.a), tuple(int(v) for v in self.level[x, y])

    def block(self, c) -> tuple[int, int]:
        return c[0] // self.a, c[1] // self.a

    def grid_shape(self, lvl) -> tuple[int, int]:
        blocks = [b for (L, b) in self.vertex_at if L == lvl]
        return max(b[0] for b in blocks) + 1, max(b[1] for b in blocks) + 1

    def size(self, lvl) -> int:
        r, c = self.grid_shape(lvl)
        return r * c

    def lifts(self, src, dst) -> set:
        """Blocks of ``src`` holding a vertex adjacent to a vertex of ``dst``."""
        out = set()
        mv = MoveSpec(self.a, 1)
        board = BoardSpec.square(self.n)
        for (L, b), c in self.vertex_at.items():
            if L == src and any(tuple(self.level[q]) == dst for q in legal_moves(c, board, mv)):
                out.add(b)
        return out


@lru_cache(maxsize=None)
def level_partition(a: int) -> LevelPartition:
    _check_even(a)
    n = 6 * a + 2
    u, v = _unit_edges(n, a, np.ones((n, n), dtype=bool))
    comp = _components(n, u, v).reshape(n, n)
    name = {}
    for i in range(a):
        for j in range(a):
            name.setdefault(comp[i, j], (i, j))
    if len(name) != a * a or len(np.unique(comp)) != a * a:
        raise AssertionError("unexpected level structure")
    level = np.zeros((n, n, 2), dtype=np.int64)
    vertex_at = {}
    for x in range(n):
        for y in range(n):
            L = name[comp[x, y]]
            level[x, y] = L
            key = (L, (x // a, y // a))
            if key in vertex_at:
                raise AssertionError(f"level {L} has two vertices in block {key[1]}")
            vertex_at[key] = (x, y)
    return LevelPartition(a, n, level, vertex_at)


def _shade(block) -> int:
    return (block[0] + block[1]) % 2  # 0 = gray


def _transitions(part: LevelPartition, src, dst) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Knight edges (u in src, v in dst), lifts in T landing in T1 first."""
    a, n = part.a, part.n
    out = []
    for (L, b), c in part.vertex_at.items():
        if L != src:
            continue
        x, y = c
        for dx, dy in ((a, 1), (a, -1), (-a, 1), (-a, -1), (1, a), (1, -a), (-1, a), (-1, -a)):
            X, Y = x + dx, y + dy
            if 0 <= X < n and 0 <= Y < n and tuple(part.level[X, Y]) == dst:
                out.append(((x, y), (X, Y)))

    def rank(e):
        bu, bv = part.block(e[0]), part.block(e[1])
        return (bu not in T_REGION, bv not in T1_REGION, bv not in T_REGION | T1_REGION, e)
    out.sort(key=rank)
    return out


@lru_cache(maxsize=None)
def base_case_tour(a: int) -> Tour:
    """Structured (a, 1) tour of [6a+2]^2 that covers the levels one by one in guide order."""
    _check_even(a)
    part = level_partition(a)
    guide = build_guide(a)
    K = len(guide)
    trans = [_transitions(part, guide[k], guide[(k + 1) % K]) for k in range(K)]

    def level_path(lvl, s, e):
        bs, be = part.block(s), part.block(e)
        if bs == be or (0, 0) in (bs, be):
            return None
        rows, cols = part.grid_shape(lvl)
        return grid_ham_path_between(rows, cols, bs, be)

    paths: list = [None] * K
    for closing in trans[K - 1]:
        start0 = closing[1]
        chosen = [None] * K
        chosen[K - 1] = closing
        # depth-first choice of the exit of each level
        stack = [(0, 0)]
        while stack:
            k, idx = stack.pop()
            s = start0 if k == 0 else chosen[k - 1][1]
            if k == K - 1:
                p = level_path(guide[k], s, closing[0])
                if p is not None:
                    paths[k] = p
                    break
                continue
            opts = trans[k]
            while idx < len(opts):
                e = opts[idx]
                p = level_path(guide[k], s, e[0])
                idx += 1
                if p is not None:
                    chosen[k] = e
                    paths[k] = p
                    stack.append((k, idx))
                    stack.append((k + 1, 0))
                    break
        else:
            continue
        break
    else:  # pragma: no cover
        raise AssertionError(f"no level ordering found for a={a}")
    verts = [part.vertex_at[(guide[k], b)] for k in range(K) for b in paths[k]]
    t = Tour.from_coords(MoveSpec(a, 1), BoardSpec.square(part.n), verts)
    rep = verify_tour(t)
    if not rep.hamiltonian or not is_structured(t, a):
        raise AssertionError(f"base case construction failed for a={a}: {rep}")
    return t


# ---------------------------------------------------------------- replication and square boards

def _orient(verts: np.ndarray, n: int, how: str) -> np.ndarray:
    if how == "right":
        return verts
    if how == "left":
        return flip_x(verts, (n, n))[0]
    if how == "up":
        return transpose(verts, (n, n))[0]
    raise ValueError(how)


def snake_order(k: int) -> list[tuple[int, int]]:
    """Row-by-row boustrophedon order of a k x k grid of (column, row) cells."""
    out = []
    for r in range(k):
        cols = range(k) if r % 2 == 0 else range(k - 1, -1, -1)
        out.extend((c, r) for c in cols)
    return out


def replicate_square(t: Tour, k: int, linked: Tour | None = None) -> Tour:
    """Structured tour on [kn]^2 from a structured tour ``t`` and an A-linked tour ``linked`` on [n]^2."""
    if k < 1:
        raise BoardError("k must be >= 1")
    a = t.move.a
    n = t.board.dims[0]
    if not is_structured(t, a):
        raise BoardError("replicate_square needs a structured tour")
    if k == 1:
        return t
    linked = linked if linked is not None else t
    has_a = contains_link(linked, LinkKind.A)
    if not has_a:
        log.info("tour is not A-linked; bridges will be searched")
    order = snake_order(k)
    cycles, moves = [], []
    for idx, (c, r) in enumerate(order):
        if idx == 0:
            how, src = "right", t
        else:
            pc, pr = order[idx - 1]
            how = "up" if r != pr else ("right" if c > pc else "left")
            src = linked
        moves.append(how)
        cycles.append(_orient(np.asarray(src.vertices), n, how) + np.array([c * n, r * n]))
    big = BoardSpec.square(k * n)
    cs = CycleSet(big, t.move, cycles, list(range(len(order))))
    for idx in range(1, len(order)):
        (pc, pr), (c, r) = order[idx - 1], order[idx]
        P, Q = np.array([pc * n, pr * n]), np.array([c * n, r * n])
        la = (a - 1, 1), (a - 2, a + 1)
        if moves[idx] == "right":
            pe = ((n - 1, 0), (n - 2, a))
            qe = la
        elif moves[idx] == "left":
            pe = ((0, 0), (1, a))
            qe = ((n - a, 1), (n - a + 1, a + 1))
        else:
            pe = ((0, n - 1), (a, n - 2))
            qe = ((1, a - 1), (a + 1, a - 2))
        br = Bridge(tuple(tuple(int(v) for v in np.add(p, P)) for p in pe),
                    tuple(tuple(int(v) for v in np.add(q, Q)) for q in qe))
        if not cs.try_bridge(br):
            log.info("link-A bridge into board %s unavailable, searching", (c, r))
            if not cs.merge_into(idx - 1, idx, set(structured_edges(a))):
                raise MergeError(f"no bridge into board {(c, r)}")
    out = cs.merge_all(set(structured_edges(a))).to_tour()
    if not is_structured(out, a):
        raise MergeError("replicated tour lost a structured edge")
    return out


def decompose(a: int, n: int) -> tuple[int, int]:
    """(k, m) with n = k(6a+2) + 2am, k in 1..a minimal, m >= 0."""
    _check_even(a)
    _check_even(n, "n")
    base = 6 * a + 2
    for k in range(1, a + 1):
        rest = n - k * base
        if rest >= 0 and rest % (2 * a) == 0:
            return k, rest // (2 * a)
    raise BoardError(f"n={n} is not constructed by this artifact (not of the form "
                     f"k*{base} + {2 * a}*m with 1 <= k <= {a}, m >= 0)")


def a1_tour(a: int, n: int) -> Tour:
    """Structured (a, 1) tour of [n]^2, which therefore contains link B."""
    k, m = decompose(a, n)
    base = base_case_tour(a)
    t = replicate_square(base, k)
    for _ in range(m):
        t = extend_by_rim(t, a)
    if not contains_link(t, LinkKind.B):  # pragma: no cover
        raise AssertionError("structured tour without link B")
    return t


def link_b(a: int, n: int):
    return link_edge(LinkKind.B, MoveSpec(a, 1), BoardSpec.square(n))
