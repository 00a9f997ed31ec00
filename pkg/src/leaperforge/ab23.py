"""Tours of the (2, 3) leaper.

The rim of width 6 splits into bands tiled by 2 x 6 blocks and four 6 x 6
corners.  In a band every strand steps two squares along the band and flips
between rows 3 apart, so the 12 squares of a block each carry one strand.
The corners are filled by one stored pattern (found by search) rotated into
place.  A strand's square inside a block is its *block-position*,
numbered ``1 + 6*dx + dy`` with ``dx`` along the band and ``dy`` across it.

Growing a tour by 12 wraps it in that rim and merges the 13 cycles.
"""
from __future__ import annotations

import json
import logging
import re
from functools import lru_cache
from typing import Sequence

import numpy as np

from .board import (BoardError, BoardSpec, LinkKind, MoveSpec, Tour, contains_link, is_move, link_edge,
                    verify_tour)
from .formats import data_file, read_tour
from .merge import Bridge, CycleSet, MergeError, Unmergeable, cycles_of
from .search import SearchConfig, ham_cycle_search, two_factor, two_factor_flat

log = logging.getLogger(__name__)

MOVE = MoveSpec(3, 2)
WIDTH = 6
S_PERM = "(1 4)(2 5)(3 6)(7 10)(8 11)(9 12)"


# ---------------------------------------------------------------- permutations

Perm = tuple  # images of 1..12, stored at indices 0..11


def parse_perm(text: str, size: int = 12) -> Perm:
    """Permutation of 1..size from cycle notation such as ``(1 4)(2 5)``."""
    img = list(range(1, size + 1))
    for cyc in re.findall(r"\(([^)]*)\)", text):
        items = [int(v) for v in cyc.replace(",", " ").split()]
        for k, v in enumerate(items):
            img[v - 1] = items[(k + 1) % len(items)]
    if sorted(img) != list(range(1, size + 1)):
        raise ValueError(f"not a permutation: {text}")
    return tuple(img)


def compose(f: Perm, g: Perm) -> Perm:
    """f after g."""
    return tuple(f[g[i] - 1] for i in range(len(g)))


def power(f: Perm, k: int) -> Perm:
    out = tuple(range(1, len(f) + 1))
    for _ in range(k):
        out = compose(f, out)
    return out


def is_identity(f: Perm) -> bool:
    return all(v == i + 1 for i, v in enumerate(f))


def cycle_notation(f: Perm) -> str:
    seen, parts = set(), []
    for i in range(1, len(f) + 1):
        if i in seen or f[i - 1] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = f[j - 1]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def corner_check(f: Perm | str, n: int) -> bool:
    """Whether every strand returns to its block-position after one lap of the rim."""
    if isinstance(f, str):
        f = parse_perm(f)
    if len(f) != 12 or sorted(f) != list(range(1, 13)):
        raise ValueError("f must be a permutation of 1..12")
    if n % 4 == 2:
        return is_identity(power(f, 4))
    if n % 4 == 0:
        return is_identity(power(compose(parse_perm(S_PERM), f), 4))
    raise BoardError("n must be even")


def lap_permutation(f: Perm, n: int) -> Perm:
    """Block-positions after one lap: four bands of (n-12)/2 blocks and four corners."""
    blocks = (n - 2 * WIDTH) // 2
    band = power(parse_perm(S_PERM), blocks - 1)
    return power(compose(f, band), 4)


# ---------------------------------------------------------------- rim geometry

def rotate(c, n: int):
    """Quarter turn anticlockwise about the centre of [n]^2; takes the bottom band to the right band."""
    x, y = c
    return n - 1 - y, x


def rotations(c, n: int) -> list:
    out = [tuple(c)]
    for _ in range(3):
        out.append(rotate(out[-1], n))
    return out


def _partner(y: int) -> int:
    return y + 3 if y < 3 else y - 3


def bottom_band_edges(n: int) -> list:
    """Band edges of the bottom band, x in 6..n-7."""
    return [((x, y), (x + 2, _partner(y))) for x in range(WIDTH, n - WIDTH - 2) for y in range(WIDTH)]


def bottom_stubs() -> list:
    return [(x, y) for x in (6, 7) for y in range(WIDTH)]


def left_stubs() -> list:
    return [(x, y) for x in range(WIDTH) for y in (6, 7)]


def bottom_position(c) -> int:
    """Block-position of a square of the first bottom block (x in 6..7)."""
    return 1 + 6 * (c[0] - 6) + c[1]


def left_position(c) -> int:
    """Block-position of a square of the lowest left block (y in 6..7), read along the band."""
    return 1 + 6 * (7 - c[1]) + c[0]


def corner_graph():
    """Cells and legal edges for the bottom-left corner pattern search."""
    corner = [(x, y) for x in range(WIDTH) for y in range(WIDTH)]
    bs, ls = bottom_stubs(), left_stubs()
    cells = corner + bs + ls
    kind = {c: "corner" for c in corner} | {c: "bottom" for c in bs} | {c: "left" for c in ls}
    edges = []
    for i, p in enumerate(cells):
        for j in range(i + 1, len(cells)):
            q = cells[j]
            if is_move(MOVE, p, q) and not (kind[p] == kind[q] != "corner"):
                edges.append((i, j))
    return cells, kind, edges


def corner_permutation(pattern: Sequence) -> Perm:
    """Permutation f: block-position entering the corner from the left band -> leaving into the bottom band."""
    adj: dict = {}
    for p, q in pattern:
        p, q = tuple(p), tuple(q)
        adj.setdefault(p, []).append(q)
        adj.setdefault(q, []).append(p)
    img = [0] * 12
    bs = set(bottom_stubs())
    visited = set()
    for s in left_stubs():
        if len(adj.get(s, [])) != 1:
            raise ValueError(f"stub {s} must have exactly one corner edge")
        prev, cur = s, adj[s][0]
        visited.add(s)
        while cur not in bs:
            if cur in visited or len(adj.get(cur, [])) != 2:
                raise ValueError("corner pattern is not a set of stub-to-stub paths")
            visited.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (a if a != prev else b)
        visited.add(cur)
        img[left_position(s) - 1] = bottom_position(cur)
    if len(visited) != 60 or sorted(img) != list(range(1, 13)):
        raise ValueError("corner pattern does not join the left and bottom stubs one-to-one")
    return tuple(img)


def search_corner_pattern(max_seeds: int = 100000) -> dict:
    """Sample corner fillings until one passes corner_check for both n mod 4 classes and contains alpha."""
    cells, kind, edges = corner_graph()
    idx = {c: i for i, c in enumerate(cells)}
    deg = [2 if kind[c] == "corner" else 1 for c in cells]
    colour = [(x + y) % 2 for x, y in cells]
    alpha = link_edge(LinkKind.ALPHA, MOVE, BoardSpec.square(22))
    req = [(idx[alpha[0]], idx[alpha[1]])]
    for seed in range(max_seeds):
        nbr = two_factor_flat(len(cells), edges, colour, req, deg, seed=seed)
        if nbr is None:
            continue
        pattern = sorted({tuple(sorted((cells[u], cells[v]))) for u in range(len(cells)) for v in nbr[u] if v >= 0})
        try:
            f = corner_permutation(pattern)
        except ValueError:
            continue
        if corner_check(f, 22) and corner_check(f, 24):
            return {"seed": seed, "f": cycle_notation(f), "edges": [[list(p), list(q)] for p, q in pattern]}
    raise RuntimeError("no corner pattern found")  # pragma: no cover


@lru_cache(maxsize=None)
def corner_pattern() -> tuple:
    data = json.loads(data_file("corner23.json").read_text())
    return tuple((tuple(p), tuple(q)) for p, q in data["edges"])


def rim6_edges(n: int) -> list:
    if n % 2 or n < 2 * WIDTH + 10:
        raise BoardError(f"rim of width 6 needs even n >= 22, got {n}")
    base = bottom_band_edges(n) + list(corner_pattern())
    out = []
    for p, q in base:
        for rp, rq in zip(rotations(p, n), rotations(q, n)):
            out.append((rp, rq))
    return out


def rim6_cycles(n: int) -> CycleSet:
    """The 12 rim cycles of [n]^2, labelled by block-position in the first bottom block."""
    board = BoardSpec.square(n)
    nbr = np.full((n * n, 2), -1, dtype=np.int64)
    fill = np.zeros(n * n, dtype=np.int64)
    for p, q in rim6_edges(n):
        if not is_move(MOVE, p, q):  # pragma: no cover
            raise AssertionError(f"illegal rim edge {p}-{q}")
        for s, t in ((p, q), (q, p)):
            i = board.index(s)
            if fill[i] >= 2:
                raise MergeError(f"rim square {s} has degree > 2")
            nbr[i, fill[i]] = board.index(t)
            fill[i] += 1
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rim = ~((x >= WIDTH) & (x < n - WIDTH) & (y >= WIDTH) & (y < n - WIDTH))
    if np.any(fill[rim.ravel()] != 2) or np.any(fill[~rim.ravel()] != 0):
        raise MergeError("rim edges do not form a 2-factor of the rim")
    cycles = cycles_of(nbr)
    labels = []
    for cyc in cycles:
        first = [c for c in (board.coord(int(v)) for v in cyc) if 6 <= c[0] <= 7 and c[1] < WIDTH]
        if len(first) != 1:
            raise MergeError("rim cycles do not return to their block-position")
        labels.append(bottom_position(first[0]))
    if len(cycles) != 12:
        raise MergeError(f"expected 12 rim cycles, found {len(cycles)}")
    order = np.argsort(labels)
    return CycleSet(board, MOVE, [cycles[k] for k in order], sorted(labels))


# bridges quoted for the step n -> n+12, tried before searching
_QUOTED_BRIDGES = [
    (((8, 3), (11, 5)), ((6, 6), (9, 8))),
    (((9, 3), (12, 5)), ((7, 6), (10, 8))),
    (((8, 3), (6, 6)), ((11, 1), (9, 4))),
]


def link_edges(n: int) -> list:
    board = BoardSpec.square(n)
    return [link_edge(LinkKind.ALPHA, MOVE, board), link_edge(LinkKind.BETA, MOVE, board)]


def extend_23(t: Tour) -> Tour:
    """A (2, 3) tour of [n+12]^2 from one of [n]^2."""
    n = t.board.dims[0]
    if t.move != MOVE or t.board != BoardSpec.square(n):
        raise BoardError("extend_23 needs a (2,3) tour on a square board")
    if not verify_tour(t).hamiltonian:
        raise BoardError("input is not a valid tour")
    big = n + 2 * WIDTH
    rim = rim6_cycles(big)
    cycles = [rim.cycle(k) for k in range(12)] + [np.asarray(t.vertices) + WIDTH]
    cs = CycleSet(rim.board, MOVE, cycles, rim.labels + ["middle"])
    protected = set(link_edges(big))
    for e1, e2 in _QUOTED_BRIDGES:
        cs.try_bridge(Bridge(e1, e2), protected)
    out = cs.merge_all(protected).to_tour()
    if not all(out.has_edge(p, q) for p, q in protected):  # pragma: no cover
        raise MergeError("a link edge was lost while merging")
    return out


def _solver_base(n: int, timeout: float, seeds: int = 50) -> Tour | None:
    """Linked tour of [n]^2: merge a random 2-factor through the links, else exact search."""
    board = BoardSpec.square(n)
    links = link_edges(n)
    for seed in range(seeds):
        cs = two_factor(board, MOVE, links, seed=seed)
        if cs is None:
            break
        try:
            return cs.merge_all(set(links)).to_tour()
        except Unmergeable:
            continue
    return ham_cycle_search(board, MOVE, SearchConfig(required_edges=links, timeout=timeout))


@lru_cache(maxsize=None)
def stored_base(n: int) -> Tour | None:
    """Linked base tour of [n]^2 from the data directory, if stored."""
    path = data_file(f"base23_{n}.json")
    if not path.exists():
        return None
    return read_tour(path)


BASES = (10, 14, 16, 18, 20, 24)  # smallest linked base per class of n mod 12
NO_TOUR = (2, 4, 6, 8, 12)  # even sides with no (2,3) tour at all


def base_for(n: int) -> int | None:
    for b in BASES:
        if b <= n and (n - b) % 12 == 0:
            return b
    return None


def tour_23(n: int, timeout: float = 120.0) -> Tour:
    """Linked (2, 3) tour of [n]^2 (contains alpha and beta)."""
    if n % 2:
        raise BoardError(f"no (2,3) tour on odd boards, n={n}")
    if n in NO_TOUR:
        raise BoardError(f"no (2,3) tour exists on [{n}]^2 (exhaustive search)")
    b = base_for(n)
    if b is None:
        raise BoardError(f"n={n} is not constructed by this artifact")
    t = stored_base(b)
    if t is None:
        t = _solver_base(b, timeout)
        if t is None:  # pragma: no cover
            raise BoardError(f"no linked base tour found for n={b}")
    while t.board.dims[0] < n:
        t = extend_23(t)
    for kind in (LinkKind.ALPHA, LinkKind.BETA):
        if not contains_link(t, kind):  # pragma: no cover
            raise MergeError(f"tour lacks link {kind.value}")
    return t
