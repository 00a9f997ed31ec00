"""Tours of the (2, 5) leaper assembled from rectangular blocks.

Blocks are laid in a grid.  Two blocks side by side are joined by the edge
every tour has at the bottom-right corner of the left block (a corner square
has only two neighbours) and link H at the bottom-left of the right block.
Rows are stacked the same way with the top-left corner edge of the lower row
and link V of the upper row.  The building blocks are a 14 x 14 tour found by
search and strips of width 20 made of 20 x 10 bricks, each brick carrying a
fixed cycle cover.
"""
from __future__ import annotations

import json
import logging
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .board import (BoardError, BoardSpec, LinkKind, MoveSpec, Tour, contains_link, flip_x, flip_y,
                    link_edge, transpose)
from .formats import data_file, read_tour
from .merge import Bridge, CycleSet, MergeError, Unmergeable, cycles_of, nbrs_of_cycle, swap_edges, walk
from .search import SearchConfig, _leaper_edges, ham_cycle_search, two_factor, two_factor_flat

log = logging.getLogger(__name__)

MOVE = MoveSpec(5, 2)
BRICK = (20, 10)
BASE_SIDE = 14
SIDES = (154, 20)

# canonical edges in block coordinates (bottom-left corner at the origin)
H_EDGE = ((4, 2), (2, 7))
V_EDGE = ((2, 4), (7, 2))
ALPHA_EDGE = ((0, 5), (2, 0))


def beta_edge(w: int) -> tuple:
    return (w - 1, 2), (w - 6, 0)


def _reflect(e, w: int, h: int, fx: bool, fy: bool) -> tuple:
    return tuple(((w - 1 - x) if fx else x, (h - 1 - y) if fy else y) for x, y in e)


def corner_edges(w: int, h: int) -> list:
    """Both images of the alpha edge at each of the four corners of a w x h board."""
    out = []
    for fx in (False, True):
        for fy in (False, True):
            for e in (ALPHA_EDGE, ((0, 2), (5, 0))):
                out.append(_reflect(e, w, h, fx, fy))
    return out


def block_edges(w: int, h: int) -> list:
    """Edges kept in every brick-built block: corner alpha images plus H and V at the bottom-left."""
    return corner_edges(w, h) + [H_EDGE, V_EDGE]


# ---------------------------------------------------------------- brick

def _brick_required() -> list:
    return block_edges(*BRICK)


def _stack(cycles: Sequence[np.ndarray], k: int, flip_from: int | None = None) -> list:
    """Copies of brick cycles (coordinate arrays) stacked k high; bricks from ``flip_from`` on are reflected."""
    out = []
    for i in range(k):
        for c in cycles:
            c = np.asarray(c)
            if flip_from is not None and i >= flip_from:
                c = np.stack([c[:, 0], BRICK[1] - 1 - c[:, 1]], axis=1)
            out.append(c + np.array([0, BRICK[1] * i]))
    return out


def search_brick_cover(max_seeds: int = 400) -> dict:
    """Sample brick covers, preferring one with 16 cycles, and record the seam bridges between two bricks."""
    board = BoardSpec(BRICK)
    best = None
    for seed in range(max_seeds):
        cs = two_factor(board, MOVE, _brick_required(), seed=seed)
        if cs is None:
            continue
        cycles = [cs.coords[cs.cycle(r)] for r in cs.components()]
        if best is None or abs(len(cycles) - 16) < abs(len(best[1]) - 16):
            best = (seed, cycles)
        if len(cycles) == 16:
            break
    if best is None:  # pragma: no cover
        raise RuntimeError("no brick cover found")
    seed, cycles = best
    two = CycleSet(BoardSpec((BRICK[0], 2 * BRICK[1])), MOVE, _stack(cycles, 2))
    prot = set(_brick_required()) | {tuple((x, y + BRICK[1]) for x, y in e) for e in _brick_required()}
    seam = []
    for c in range(len(cycles)):
        br = two.find_bridge(c, c + len(cycles), prot)
        if br is not None:
            seam.append([list(map(list, br.e1)), list(map(list, br.e2))])
    return {"seed": seed, "cycles": [c.tolist() for c in cycles], "seam": seam}


@lru_cache(maxsize=None)
def _brick_data() -> dict:
    return json.loads(data_file("brick25.json").read_text())


def brick_cover() -> CycleSet:
    """The stored cycle cover of the 20 x 10 brick, cycles labelled 0, 1, ..."""
    data = _brick_data()
    return CycleSet(BoardSpec(BRICK), MOVE, data["cycles"])


def _seam_bridges(k: int):
    """Stored seam bridges between consecutive bricks of a stack of k."""
    for i in range(k - 1):
        for e1, e2 in _brick_data()["seam"]:
            pts = [(x, y + BRICK[1] * i) for x, y in (*e1, *e2)]
            yield Bridge((pts[0], pts[1]), (pts[2], pts[3]))


def _fill_window(board: BoardSpec, nbr: np.ndarray, lo: int, hi: int, seed: int | None) -> np.ndarray | None:
    """Re-cover rows lo..hi-1 by a degree-constrained subgraph, keeping every edge outside them."""
    w, h = board.dims
    rows = np.arange(board.size) % h
    inside = (rows >= lo) & (rows < hi)
    keep = nbr.copy()
    deg = np.zeros(board.size, dtype=np.int64)
    deg[inside] = 2
    for v in np.flatnonzero(inside):
        keep[v] = -1
    for v in np.flatnonzero(~inside):
        for s in range(2):
            u = keep[v, s]
            if u >= 0 and inside[u]:
                keep[v, s] = -1
                deg[v] += 1
    edges = [(u, v) for u, v in _leaper_edges(board, MOVE) if (inside[u] or inside[v]) and deg[u] and deg[v]]
    coords = np.stack(np.unravel_index(np.arange(board.size), board.dims), axis=1)
    colour = coords.sum(axis=1) % 2
    sub = two_factor_flat(board.size, edges, colour, (), deg, seed=seed)
    if sub is None:
        return None
    out = keep
    for v in np.flatnonzero(deg):
        slots = [s for s in range(2) if out[v, s] < 0]
        new = [u for u in sub[v] if u >= 0]
        for s, u in zip(slots, new):
            out[v, s] = u
    return out


def _cover_of(board: BoardSpec, cycles: Sequence) -> np.ndarray:
    nbr = np.full((board.size, 2), -1, dtype=np.int64)
    for c in cycles:
        nbrs_of_cycle(np.ravel_multi_index(tuple(np.asarray(c).T), board.dims), board.size, nbr)
    return nbr


def strip_tour(height: int) -> Tour:
    """(2, 5) tour of [20] x [height] for height 10k (k >= 2) or 10k + 4 (k >= 4).

    The tour keeps both alpha images at each corner and links H and V at the
    bottom-left corner.
    """
    return _strip_tour(int(height))


@lru_cache(maxsize=None)
def _strip_tour(height: int) -> Tour:
    if height % 10 == 0 and height >= 20:
        k, rem = height // 10, False
    elif height % 10 == 4 and height >= 44:
        k, rem = (height - 4) // 10, True
    else:
        raise BoardError(f"strip height must be 10k (k >= 2) or 10k+4 (k >= 4), got {height}")
    board = BoardSpec((BRICK[0], height))
    cycles = [np.asarray(c) for c in _brick_data()["cycles"]]
    protected = set(block_edges(*board.dims))
    if not rem:
        cs = CycleSet(board, MOVE, _stack(cycles, k))
        bridges = list(_seam_bridges(k))
    else:
        # k-2 bricks, four empty rows, then two reflected bricks
        low = _stack(cycles, k - 2)
        top = [c + np.array([0, BRICK[1] * (k - 2) + 4]) for c in _stack(cycles, 2, flip_from=0)]
        nbr = _cover_of(board, low + top)
        y0 = BRICK[1] * (k - 2)
        filled = None
        for margin in (5, 7, 10):
            for seed in range(20):
                filled = _fill_window(board, nbr, y0 - margin, y0 + 4 + margin, seed)
                if filled is not None and all(_nbr_has(filled, board, e) for e in protected):
                    break
                filled = None
            if filled is not None:
                break
        if filled is None:  # pragma: no cover
            raise MergeError(f"could not fill the 4-row remainder of [20]x[{height}]")
        cs = CycleSet(board, MOVE, cycles_of(filled))
        bridges = list(_seam_bridges(k - 2))
    used = sum(cs.try_bridge(br, protected) for br in bridges)
    log.debug("strip %d: %d of %d stored seam bridges applied", height, used, len(bridges))
    cs.merge_all(protected)
    return cs.to_tour()


def _nbr_has(nbr: np.ndarray, board: BoardSpec, e) -> bool:
    u, v = board.index(e[0]), board.index(e[1])
    return v in nbr[u]


def search_block(w: int, h: int, seeds: int = 100) -> Tour | None:
    """Tour of [w] x [h] keeping the block edges, from a random 2-factor through them and merging."""
    board = BoardSpec((w, h))
    req = block_edges(w, h)
    for seed in range(seeds):
        cs = two_factor(board, MOVE, req, seed=seed)
        if cs is None:
            return None
        try:
            return cs.merge_all(set(req)).to_tour()
        except Unmergeable:
            continue
    return None


# ---------------------------------------------------------------- the 14 x 14 base

def base_required() -> list:
    b = BoardSpec.square(BASE_SIDE)
    return [H_EDGE, V_EDGE, link_edge(LinkKind.ALPHA, MOVE, b), link_edge(LinkKind.BETA, MOVE, b)]


def search_base(timeout: float = 120.0) -> Tour | None:
    """14 x 14 tour containing H and V at the bottom-left and links alpha and beta."""
    cfg = SearchConfig(required_edges=base_required(), timeout=timeout)
    return ham_cycle_search(BoardSpec.square(BASE_SIDE), MOVE, cfg)


@lru_cache(maxsize=None)
def base_tour() -> Tour:
    path = data_file(f"base25_{BASE_SIDE}.json")
    if path.exists():
        return read_tour(path)
    t = search_base()
    if t is None:  # pragma: no cover
        raise BoardError("no 14 x 14 base tour found")
    return t


# ---------------------------------------------------------------- assembly

_TRANSFORMS = [
    lambda v, d: (v, d),
    flip_x,
    flip_y,
    lambda v, d: flip_y(*flip_x(v, d)),
]


def _images(t: Tour):
    fns = list(_TRANSFORMS) + [lambda v, d, f=f: f(*transpose(v, d)) for f in _TRANSFORMS]
    for fn in fns:
        yield t.transformed(fn)


def orient(t: Tour, dims: Sequence[int], need: Sequence, want: Sequence = ()) -> Tour:
    """Image of ``t`` on a board of ``dims`` containing every edge of ``need`` and most of ``want``."""
    best, score = None, -1
    for img in _images(t):
        if tuple(img.board.dims) != tuple(dims):
            continue
        if not all(img.has_edge(*e) for e in need):
            continue
        s = sum(img.has_edge(*e) for e in want)
        if s > score:
            best, score = img, s
    if best is None:
        raise MergeError(f"no image of the {t.board} block contains {list(need)}")
    return best


def decompose(k: int, sides: Sequence[int]) -> list[int] | None:
    """Parts from ``sides`` (largest first) summing to k, or None; decided by dynamic programming."""
    if k <= 0:
        return None
    sides = sorted(set(sides), reverse=True)
    prev = [None] * (k + 1)
    ok = [False] * (k + 1)
    ok[0] = True
    for s in range(1, k + 1):
        for m in sides:
            if m <= s and ok[s - m]:
                ok[s], prev[s] = True, m
                break
    if not ok[k]:
        return None
    parts = []
    while k:
        parts.append(prev[k])
        k -= prev[k]
    return sorted(parts, reverse=True)


def assemble_grid(widths: Sequence[int], heights: Sequence[int], cell: Callable[[int, int], Tour]) -> Tour:
    """Join tours of the cells of a grid of blocks into one tour of the whole rectangle.

    Cells get their orientation from what the joins need: link H at the
    bottom-left of every block except the first in its row, link V at the
    bottom-left of the first block of every row but the bottom one.  The
    bottom-left block is also asked for H, V and alpha, the bottom-right one
    for beta, so the result carries these links when the blocks allow it.
    """
    W, Hh = sum(widths), sum(heights)
    board = BoardSpec((W, Hh))
    nbr = np.full((board.size, 2), -1, dtype=np.int64)
    xs = np.concatenate(([0], np.cumsum(widths)))
    ys = np.concatenate(([0], np.cumsum(heights)))
    for r, h in enumerate(heights):
        for c, w in enumerate(widths):
            need, want = [], []
            if c > 0:
                need.append(H_EDGE)
            elif r > 0:
                need.append(V_EDGE)
            if r == 0 and c == 0:
                want += [H_EDGE, V_EDGE, ALPHA_EDGE]
            if r == 0 and c == len(widths) - 1:
                want.append(beta_edge(w))
            t = orient(cell(w, h), (w, h), need, want)
            v = np.asarray(t.vertices)
            flat = (v[:, 0] + xs[c]) * Hh + (v[:, 1] + ys[r])
            nbrs_of_cycle(flat, board.size, nbr)
    idx = board.index
    for r in range(len(heights)):
        y0 = int(ys[r])
        for c in range(1, len(widths)):
            x0 = int(xs[c])
            # corner edge of the left block with link H of the right block
            swap_edges(nbr, idx((x0 - 1, y0)), idx((x0 - 3, y0 + 5)),
                       idx((x0 + 4, y0 + 2)), idx((x0 + 2, y0 + 7)))
    for r in range(1, len(heights)):
        y0 = int(ys[r])
        swap_edges(nbr, idx((0, y0 - 1)), idx((5, y0 - 3)), idx((2, y0 + 4)), idx((7, y0 + 2)))
    cyc = walk(nbr, 0)
    if len(cyc) != board.size:  # pragma: no cover
        raise MergeError(f"blocks did not close into one cycle ({len(cyc)} of {board.size})")
    return Tour.from_flat(MOVE, board, cyc)


def assemble_strip(n: int, pieces: Mapping[int, Tour], k: int) -> Tour:
    """Tour of [k] x [n] from tours of [m] x [n] (one per width m) laid left to right."""
    for m, t in pieces.items():
        if tuple(t.board.dims) != (m, n):
            raise BoardError(f"piece for width {m} lives on {t.board}, expected {m}x{n}")
    if k % 2:
        raise BoardError(f"k must be even, got {k}")
    widths = decompose(k, list(pieces))
    if widths is None:
        raise BoardError(f"{k} is not a sum of {sorted(pieces)}")
    return assemble_grid(widths, [n], lambda w, h: pieces[w])


def block(w: int, h: int) -> Tour:
    """Building block tour of [w] x [h]: the base square, a strip, a transposed strip or a grid of base squares."""
    return _block(int(w), int(h))


def _is_strip_height(h: int) -> bool:
    return (h % 10 == 0 and h >= 20) or (h % 10 == 4 and h >= 44)


@lru_cache(maxsize=8)
def _block(w: int, h: int) -> Tour:
    if w == h == BASE_SIDE:
        return base_tour()
    if w == BRICK[0] and _is_strip_height(h):
        return strip_tour(h)
    if h == BRICK[0] and _is_strip_height(w):
        return strip_tour(w).transformed(transpose)
    if w == h and w % BASE_SIDE == 0:
        k = w // BASE_SIDE
        return assemble_grid([BASE_SIDE] * k, [BASE_SIDE] * k, lambda a, b: base_tour())
    raise BoardError(f"no building block of size {w}x{h}")


def assemble_rect(k: int, l: int, sides: Sequence[int] = SIDES) -> Tour:
    """Tour of [k] x [l] assembled from blocks whose sides come from ``sides``."""
    if k % 2 or l % 2:
        raise BoardError(f"sides must be even, got {k}x{l}")
    widths, heights = decompose(k, sides), decompose(l, sides)
    if widths is None or heights is None:
        raise BoardError(f"{k}x{l} is not tiled by blocks with sides {sorted(sides)}")
    if len(widths) == len(heights) == 1:
        return block(k, l)
    return assemble_grid(widths, heights, block)


def supported(n: int) -> bool:
    return n % 2 == 0 and (n % BASE_SIDE == 0 or decompose(n, SIDES) is not None)


def tour_25(n: int) -> Tour:
    """(2, 5) tour of [n]^2 containing links alpha and beta."""
    if n % 2:
        raise BoardError(f"no (2,5) tour on odd boards, n={n}")
    if n % BASE_SIDE == 0:
        t = block(n, n)
    elif decompose(n, SIDES) is not None:
        t = assemble_rect(n, n)
    else:
        raise BoardError(f"n={n} is not constructed by this artifact (not a sum of {list(SIDES)} "
                         f"or a multiple of {BASE_SIDE})")
    for kind in (LinkKind.ALPHA, LinkKind.BETA):
        if not contains_link(t, kind):  # pragma: no cover
            raise MergeError(f"tour lacks link {kind.value}")
    return t
