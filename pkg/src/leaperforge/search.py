"""Hamiltonian cycle/path search and 2-factors.

The search works on edge states (free, in, out) with forced-move
propagation: a vertex with two chosen edges drops the rest, a vertex with
exactly two usable edges takes them, and an edge joining the two ends of a
partial path is dropped unless it closes the full cycle.  Branching picks the
most constrained vertex and tries its edges in Warnsdorff order.
"""
from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .board import BoardSpec, LinkKind, MoveSpec, Tour, link_candidates, link_edge, neighbor_table, is_move
from .merge import CycleSet, cycles_of

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 120.0
DEFAULT_NODE_LIMIT = 5 * 10**8


class SearchTimeout(RuntimeError):
    """The search hit its time or node limit before deciding."""

    def __init__(self, nodes: int, elapsed: float):
        self.nodes = nodes
        self.elapsed = elapsed
        super().__init__(f"search stopped after {nodes} nodes ({elapsed:.1f} s)")


@dataclass
class SearchConfig:
    required_edges: list = field(default_factory=list)
    timeout: float = DEFAULT_TIMEOUT
    node_limit: int = DEFAULT_NODE_LIMIT

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        self.required_edges = [tuple(tuple(int(x) for x in p) for p in e) for e in self.required_edges]


class _Engine:
    """Hamiltonian cycle search on an undirected simple graph."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        self.n = n
        self.eu = [int(u) for u, _ in edges]
        self.ev = [int(v) for _, v in edges]
        self.inc: list[list[int]] = [[] for _ in range(n)]
        self.eid: dict[tuple[int, int], int] = {}
        for k, (u, v) in enumerate(zip(self.eu, self.ev)):
            self.inc[u].append(k)
            self.inc[v].append(k)
            self.eid[(u, v) if u < v else (v, u)] = k
        self.nodes = 0

    def solve(self, required: Iterable[tuple[int, int]] = (), timeout: float = DEFAULT_TIMEOUT,
              node_limit: int = DEFAULT_NODE_LIMIT) -> list[int] | None:
        n = self.n
        eu, ev, inc, eid = self.eu, self.ev, self.inc, self.eid
        state = [0] * len(eu)
        din = [0] * n
        dfree = [len(x) for x in inc]
        other = list(range(n))
        fsz = [1] * n
        trail: list[tuple] = []
        queue: list[int] = []
        solved = [False]

        def set_out(e):
            state[e] = 2
            u, v = eu[e], ev[e]
            dfree[u] -= 1
            dfree[v] -= 1
            trail.append((0, e))
            queue.append(u)
            queue.append(v)

        def set_in(e):
            u, v = eu[e], ev[e]
            if din[u] >= 2 or din[v] >= 2:
                return False
            ou, ov = other[u], other[v]
            if ou == v:
                if fsz[u] != n:
                    return False
                solved[0] = True
            state[e] = 1
            dfree[u] -= 1
            dfree[v] -= 1
            din[u] += 1
            din[v] += 1
            trail.append((1, e, ou, other[ou], fsz[ou], ov, other[ov], fsz[ov]))
            if ou != v:
                size = fsz[u] + fsz[v]
                other[ou] = ov
                other[ov] = ou
                fsz[ou] = size
                fsz[ov] = size
                if size < n:
                    k = eid.get((ou, ov) if ou < ov else (ov, ou))
                    if k is not None and state[k] == 0:
                        set_out(k)
            queue.append(u)
            queue.append(v)
            return True

        def undo(mark):
            while len(trail) > mark:
                rec = trail.pop()
                e = rec[1]
                u, v = eu[e], ev[e]
                dfree[u] += 1
                dfree[v] += 1
                if rec[0] == 1:
                    din[u] -= 1
                    din[v] -= 1
                    _, _, ou, o_ou, s_ou, ov, o_ov, s_ov = rec
                    other[ov] = o_ov
                    fsz[ov] = s_ov
                    other[ou] = o_ou
                    fsz[ou] = s_ou
                state[e] = 0
            solved[0] = False

        def propagate():
            while queue:
                v = queue.pop()
                dv = din[v]
                fv = dfree[v]
                if dv + fv < 2:
                    return False
                if fv == 0:
                    continue
                if dv == 2:
                    for e in inc[v]:
                        if state[e] == 0:
                            set_out(e)
                elif dv + fv == 2:
                    for e in inc[v]:
                        if state[e] == 0 and not set_in(e):
                            return False
            return True

        def choose():
            best, bkey = -1, None
            for v in range(n):
                dv = din[v]
                if dv < 2:
                    key = (dfree[v] + dv, -dv)
                    if bkey is None or key < bkey:
                        best, bkey = v, key
                        if key[0] <= 2:
                            break
            if best < 0:
                return -1
            be, bk = -1, None
            for e in inc[best]:
                if state[e] == 0:
                    w = eu[e] if ev[e] == best else ev[e]
                    key = (dfree[w] + din[w], w)
                    if bk is None or key < bk:
                        be, bk = e, key
            return be

        def result():
            adj = [[] for _ in range(n)]
            for e, s in enumerate(state):
                if s == 1:
                    adj[eu[e]].append(ev[e])
                    adj[ev[e]].append(eu[e])
            cyc = [0]
            prev, cur = 0, adj[0][0]
            while cur != 0:
                cyc.append(cur)
                a, b = adj[cur]
                prev, cur = cur, (a if a != prev else b)
            return cyc

        if n < 3:
            return None
        t0 = time.monotonic()
        for u, v in required:
            k = eid.get((u, v) if u < v else (v, u))
            if k is None:
                raise ValueError(f"required edge {u}-{v} is not in the graph")
            if state[k] == 2 or (state[k] == 0 and not set_in(k)):
                return None
        queue.extend(range(n))
        stack: list[tuple[int, int, bool]] = []
        ok = True
        self.nodes = 0
        while True:
            if ok:
                ok = propagate()
            if ok and solved[0]:
                return result()
            if ok:
                e = choose()
                if e < 0:
                    ok = False
                else:
                    self.nodes += 1
                    if self.nodes & 1023 == 0:
                        elapsed = time.monotonic() - t0
                        if elapsed > timeout or self.nodes > node_limit:
                            raise SearchTimeout(self.nodes, elapsed)
                    stack.append((len(trail), e, False))
                    ok = set_in(e)
                    continue
            queue.clear()
            while stack:
                mark, e, tried_out = stack.pop()
                undo(mark)
                if not tried_out:
                    stack.append((mark, e, True))
                    set_out(e)
                    ok = True
                    break
            else:
                return None


def _leaper_edges(board: BoardSpec, move: MoveSpec) -> list[tuple[int, int]]:
    nt = neighbor_table(board, move)
    u = np.repeat(np.arange(board.size), nt.shape[1])
    v = nt.ravel()
    keep = v > u
    return list(zip(u[keep].tolist(), v[keep].tolist()))


def required_link_edges(board: BoardSpec, move: MoveSpec, links: Iterable) -> list[tuple]:
    """Concrete edges for requested links; H and V take their first on-board image."""
    out = []
    for k in links:
        kind = LinkKind.parse(k) if isinstance(k, str) else k
        if kind in (LinkKind.H, LinkKind.V):
            out.append(link_candidates(kind, move, board)[0])
        else:
            out.append(link_edge(kind, move, board))
    return out


def ham_cycle_search(board: BoardSpec, move: MoveSpec, cfg: SearchConfig | None = None) -> Tour | None:
    """A Hamiltonian cycle through every required edge, or None if none exists.

    Raises SearchTimeout when the limits are reached first.
    """
    cfg = cfg or SearchConfig()
    for p, q in cfg.required_edges:
        if not (board.contains(p) and board.contains(q) and is_move(move, p, q)):
            raise ValueError(f"required edge {p}-{q} is not a legal move on {board}")
    if board.size % 2:
        return None
    eng = _Engine(board.size, _leaper_edges(board, move))
    req = [(board.index(p), board.index(q)) for p, q in cfg.required_edges]
    cyc = eng.solve(req, cfg.timeout, cfg.node_limit)
    log.debug("ham_cycle_search %s %s: %d nodes", board, move, eng.nodes)
    if cyc is None:
        return None
    return Tour.from_flat(move, board, cyc)


# -- grid graph paths ---------------------------------------------------------

def _grid_transforms(rows: int, cols: int):
    """Dihedral maps of the rows x cols grid: (new_rows, new_cols, fn(cell), inverse)."""
    out = []
    R, C = rows - 1, cols - 1
    maps = [
        (rows, cols, lambda r, c: (r, c), lambda r, c: (r, c)),
        (rows, cols, lambda r, c: (R - r, c), lambda r, c: (R - r, c)),
        (rows, cols, lambda r, c: (r, C - c), lambda r, c: (r, C - c)),
        (rows, cols, lambda r, c: (R - r, C - c), lambda r, c: (R - r, C - c)),
        (cols, rows, lambda r, c: (c, r), lambda r, c: (c, r)),
        (cols, rows, lambda r, c: (C - c, r), lambda r, c: (c, C - r)),
        (cols, rows, lambda r, c: (c, R - r), lambda r, c: (R - c, r)),
        (cols, rows, lambda r, c: (C - c, R - r), lambda r, c: (R - c, C - r)),
    ]
    out.extend(maps)
    return out


def _grid_path_colour_ok(rows: int, cols: int, s, t) -> bool:
    n = rows * cols
    cs, ct = (s[0] + s[1]) % 2, (t[0] + t[1]) % 2
    if n % 2 == 0:
        return cs != ct
    return cs == 0 and ct == 0


class PathCache:
    """In-memory cache of grid paths, optionally backed by a JSON file."""

    def __init__(self, path: Path | None = None):
        self.path = path
        self.data: dict[str, list | None] = {}
        self.dirty = False
        if path is not None and path.exists():
            try:
                self.data = json.loads(path.read_text())
            except (OSError, ValueError):
                log.warning("ignoring unreadable path cache %s", path)

    def get(self, key):
        return self.data.get(key, ...)

    def put(self, key, value):
        self.data[key] = value
        self.dirty = True

    def save(self):
        if self.path is not None and self.dirty:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(json.dumps(self.data, sort_keys=True))
            self.dirty = False


def cache_dir() -> Path | None:
    d = os.environ.get("LEAPERFORGE_CACHE")
    return Path(d) if d else None


_path_cache: PathCache | None = None


def _cache() -> PathCache:
    global _path_cache
    if _path_cache is None:
        d = cache_dir()
        _path_cache = PathCache(d / "grid_paths.json" if d else None)
    return _path_cache


def _grid_search(rows: int, cols: int, s, t, timeout: float) -> list | None:
    n = rows * cols
    idx = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
    dummy = n
    edges += [(idx(*s), dummy), (idx(*t), dummy)]
    cyc = _Engine(n + 1, edges).solve(timeout=timeout)
    if cyc is None:
        return None
    i = cyc.index(dummy)
    cyc = cyc[i + 1:] + cyc[:i]
    if cyc[0] != idx(*s):
        cyc.reverse()
    return [divmod(v, cols) for v in cyc]


def grid_ham_path_between(rows: int, cols: int, start, end, timeout: float = DEFAULT_TIMEOUT):
    """Hamiltonian path of the rows x cols grid graph from start to end, or None.

    Cells are (row, col).  Answers are cached per symmetry class of the request.
    """
    start, end = tuple(start), tuple(end)
    for r, c in (start, end):
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"cell {(r, c)} outside {rows}x{cols} grid")
    if rows * cols == 1:
        return [start] if start == end else None
    if start == end or not _grid_path_colour_ok(rows, cols, start, end):
        return None
    key, inv = _canonical(rows, cols, start, end)
    path = _canonical_path(key, timeout)
    if path is None:
        return None
    path = [inv(*p) for p in path]
    if path[0] != start:
        path.reverse()
    return path


def _canonical(rows, cols, s, t):
    best = None
    for nr, nc, fn, inv in _grid_transforms(rows, cols):
        a, b = fn(*s), fn(*t)
        for x, y in ((a, b), (b, a)):
            key = (nr, nc, x, y)
            if best is None or key < best[0]:
                best = (key, inv)
    return best


@lru_cache(maxsize=None)
def _canonical_path(key, timeout):
    rows, cols, s, t = key
    ck = f"{rows}x{cols}:{s[0]},{s[1]}-{t[0]},{t[1]}"
    cache = _cache()
    hit = cache.get(ck)
    if hit is not ...:
        return None if hit is None else [tuple(p) for p in hit]
    path = _grid_search(rows, cols, s, t, timeout)
    cache.put(ck, path)
    cache.save()
    return path


# -- 2-factors -----------------------------------------------------------------

def two_factor_flat(n: int, edges: Sequence[tuple[int, int]], colour: Sequence[int],
                    required: Iterable[tuple[int, int]] = (), degree: Sequence[int] | None = None,
                    seed: int | None = None) -> np.ndarray | None:
    """Neighbour array (n, 2) of a spanning subgraph with the given degrees, or None.

    Degrees default to 2 (a 2-factor).  Each vertex gets one slot per unit of
    degree and each edge xy a pair e_x, e_y joined to each other and to the
    slots of x and y respectively.  A perfect matching either pairs e_x with
    e_y (edge unused) or both with slots (edge used).  ``colour`` is a proper
    2-colouring, which keeps the gadget bipartite.  ``seed`` shuffles the
    gadget so that different covers can be sampled.
    """
    colour = np.asarray(colour)
    deg = np.full(n, 2, dtype=np.int64) if degree is None else np.asarray(degree, dtype=np.int64)
    if deg.min() < 0 or deg.max() > 2:
        raise ValueError("degrees must lie in 0..2")
    req = {(min(u, v), max(u, v)) for u, v in required}
    if req - {(min(u, v), max(u, v)) for u, v in edges}:
        raise ValueError("required edge not in graph")
    # left: slots of colour-0 vertices and e_y nodes; right: slots of colour-1 vertices and e_x nodes
    d0 = np.where(colour == 0, deg, 0)
    d1 = np.where(colour == 1, deg, 0)
    lstart = np.concatenate(([0], np.cumsum(d0)))
    rstart = np.concatenate(([0], np.cumsum(d1)))
    nl0, nr0 = int(lstart[-1]), int(rstart[-1])
    if nl0 != nr0:
        return None
    m = len(edges)
    rows, cols = [], []
    oriented = []
    for k, (u, v) in enumerate(edges):
        x, y = (u, v) if colour[u] == 0 else (v, u)
        if colour[x] == colour[y]:
            raise ValueError("graph is not bipartite under the given colouring")
        oriented.append((x, y))
        ex, ey = nr0 + k, nl0 + k
        for s in range(lstart[x], lstart[x + 1]):
            rows.append(s)
            cols.append(ex)
        for s in range(rstart[y], rstart[y + 1]):
            rows.append(ey)
            cols.append(s)
        if (min(x, y), max(x, y)) not in req:
            rows.append(ey)
            cols.append(ex)
    nl, nr = nl0 + m, nr0 + m
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if seed is not None:
        rng = np.random.default_rng(seed)
        rp, cp = rng.permutation(nl), rng.permutation(nr)
        rows, cols = rp[rows], cp[cols]
    else:
        rp, cp = np.arange(nl), np.arange(nr)
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(nl, nr))
    match = maximum_bipartite_matching(g, perm_type="column")
    if np.any(match < 0):
        return None
    nbr = np.full((n, 2), -1, dtype=np.int64)
    fill = np.zeros(n, dtype=np.int64)
    for k, (x, y) in enumerate(oriented):
        if match[rp[nl0 + k]] != cp[nr0 + k]:
            nbr[x, fill[x]] = y
            fill[x] += 1
            nbr[y, fill[y]] = x
            fill[y] += 1
    if np.any(fill != deg):
        return None
    return nbr


def two_factor(board: BoardSpec, move: MoveSpec, required: Iterable = (), seed: int | None = None) -> CycleSet | None:
    """A spanning set of disjoint cycles of the leaper graph, or None.

    ``required`` lists coordinate edges every cover must use.
    """
    if (move.a + move.b) % 2 == 0:
        raise ValueError("two_factor needs a bipartite leaper graph (a+b odd)")
    if board.size % 2:
        return None
    coords = np.stack(np.unravel_index(np.arange(board.size), board.dims), axis=1)
    colour = coords.sum(axis=1) % 2
    req = [(board.index(p), board.index(q)) for p, q in required]
    nbr = two_factor_flat(board.size, _leaper_edges(board, move), colour, req, seed=seed)
    if nbr is None:
        return None
    cycles = cycles_of(nbr)
    return CycleSet(board, move, cycles)
