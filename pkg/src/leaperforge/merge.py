"""Concatenating vertex-disjoint cycles through bridges.

A bridge for cycles C1 and C2 is an edge A1B1 of C1 and an edge A2B2 of C2
with A1~A2 and B1~B2.  Swapping the two cycle edges for the two cross edges
joins the cycles.  :class:`CycleSet` stores a family of disjoint cycles as a
2-regular neighbour array over flat vertex ids, so a swap is O(1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .board import BoardSpec, Coord, MoveSpec, Tour, is_move, neighbor_table


class MergeError(RuntimeError):
    pass


class Unmergeable(MergeError):
    """No bridge joins the remaining components."""

    def __init__(self, labels):
        self.labels = labels
        super().__init__(f"no bridge between components {labels}")


@dataclass(frozen=True)
class Bridge:
    e1: tuple[Coord, Coord]  # (A1, B1) in the first cycle
    e2: tuple[Coord, Coord]  # (A2, B2) in the second cycle

    @property
    def cross(self) -> tuple[tuple[Coord, Coord], tuple[Coord, Coord]]:
        (a1, b1), (a2, b2) = self.e1, self.e2
        return (a1, a2), (b1, b2)


def compound(c1: Sequence[Coord], c2: Sequence[Coord], br: Bridge, move: MoveSpec | None = None) -> list[Coord]:
    """Join two cycles given as vertex sequences: A1 -C1-> B1 - B2 -C2-> A2 (- A1)."""
    c1 = [tuple(v) for v in c1]
    c2 = [tuple(v) for v in c2]
    if set(c1) & set(c2):
        raise MergeError("cycles are not vertex-disjoint")
    (a1, b1), (a2, b2) = br.e1, br.e2
    if move is not None:
        for p, q in br.cross:
            if not is_move(move, p, q):
                raise MergeError(f"cross edge {p}-{q} is not a legal move")
    return _open_at(c1, a1, b1) + _open_at(c2, b2, a2)


def _open_at(cyc: list[Coord], start: Coord, end: Coord) -> list[Coord]:
    """The Hamiltonian path of ``cyc`` from start to end once edge start-end is removed."""
    try:
        i = cyc.index(start)
    except ValueError:
        raise MergeError(f"{start} is not on the cycle") from None
    n = len(cyc)
    if cyc[(i + 1) % n] == end:
        return [cyc[(i - k) % n] for k in range(n)]
    if cyc[(i - 1) % n] == end:
        return [cyc[(i + k) % n] for k in range(n)]
    raise MergeError(f"edge {start}-{end} is not on the cycle")


def walk(nbr: np.ndarray, start: int) -> np.ndarray:
    """Traverse the cycle through ``start`` in a 2-regular neighbour array."""
    n0 = memoryview(np.ascontiguousarray(nbr[:, 0]))
    n1 = memoryview(np.ascontiguousarray(nbr[:, 1]))
    out = [start]
    prev, cur = start, min(n0[start], n1[start])
    while cur != start:
        out.append(cur)
        a = n0[cur]
        nxt = a if a != prev else n1[cur]
        prev, cur = cur, nxt
    return np.array(out, dtype=np.int64)


def cycles_of(nbr: np.ndarray) -> list[np.ndarray]:
    """All cycles of a neighbour array; vertices with no neighbours are skipped."""
    seen = np.zeros(len(nbr), dtype=bool)
    out = []
    for v in np.flatnonzero(nbr[:, 0] >= 0):
        if not seen[v]:
            cyc = walk(nbr, int(v))
            seen[cyc] = True
            out.append(cyc)
    return out


def nbrs_of_cycle(cycle: np.ndarray, size: int, nbr: np.ndarray | None = None) -> np.ndarray:
    """Write the cycle's adjacency into a (size, 2) array (allocated if not given)."""
    if nbr is None:
        nbr = np.full((size, 2), -1, dtype=np.int64)
    cycle = np.asarray(cycle, dtype=np.int64)
    nbr[cycle, 0] = np.roll(cycle, 1)
    nbr[cycle, 1] = np.roll(cycle, -1)
    return nbr


def swap_edges(nbr: np.ndarray, u: int, v: int, w: int, x: int) -> None:
    """Replace edges u-v and w-x by u-w and v-x."""
    for p, old, new in ((u, v, w), (v, u, x), (w, x, u), (x, w, v)):
        row = nbr[p]
        if row[0] == old:
            row[0] = new
        elif row[1] == old:
            row[1] = new
        else:
            raise MergeError(f"edge {p}-{old} is not present")


def has_edge(nbr: np.ndarray, u: int, v: int) -> bool:
    return bool(nbr[u, 0] == v or nbr[u, 1] == v)


class CycleSet:
    """Labelled vertex-disjoint cycles on a board, with union-find over labels."""

    def __init__(self, board: BoardSpec, move: MoveSpec, cycles: Iterable[Sequence], labels: Sequence | None = None):
        self.board = board
        self.move = move
        self.nbr = np.full((board.size, 2), -1, dtype=np.int64)
        self.owner = np.full(board.size, -1, dtype=np.int64)
        cycles = [self._as_flat(c) for c in cycles]
        self.labels = list(labels) if labels is not None else list(range(len(cycles)))
        if len(self.labels) != len(cycles):
            raise ValueError("one label per cycle required")
        for k, cyc in enumerate(cycles):
            if len(cyc) < 3 and len(cyc) != 0:
                raise MergeError(f"cycle {self.labels[k]} is too short")
            if np.any(self.owner[cyc] >= 0) or len(np.unique(cyc)) != len(cyc):
                raise MergeError(f"cycle {self.labels[k]} overlaps another cycle")
            self.owner[cyc] = k
            nbrs_of_cycle(cyc, board.size, self.nbr)
        self._parent = list(range(len(cycles)))
        self._size = [len(c) for c in cycles]
        self._rep = [int(c[0]) if len(c) else -1 for c in cycles]
        self._coords = None

    def _as_flat(self, c) -> np.ndarray:
        arr = np.asarray(c, dtype=np.int64)
        if arr.ndim == 2:
            return np.ravel_multi_index(tuple(arr.T), self.board.dims)
        return arr

    # -- bookkeeping
    def find(self, k: int) -> int:
        parent = self._parent
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def label_index(self, label) -> int:
        return self.labels.index(label)

    def component_of(self, v: int) -> int:
        return self.find(int(self.owner[v]))

    def components(self) -> list[int]:
        return sorted({self.find(k) for k in range(len(self.labels)) if self._size[k]})

    def __len__(self):
        return len(self.components())

    def cycle(self, k: int) -> np.ndarray:
        """Flat vertex sequence of the component whose root is ``find(k)``."""
        rep = self._rep[self.find(k)]
        if rep < 0:
            return np.array([], dtype=np.int64)
        return walk(self.nbr, rep)

    def cycle_coords(self, label) -> list[Coord]:
        return [self.board.coord(int(v)) for v in self.cycle(self.label_index(label))]

    def covered(self) -> np.ndarray:
        return np.flatnonzero(self.owner >= 0)

    @property
    def coords(self) -> np.ndarray:
        if self._coords is None:
            self._coords = np.stack(np.unravel_index(np.arange(self.board.size), self.board.dims), axis=1)
        return self._coords

    def flat(self, c: Sequence[int]) -> int:
        return self.board.index(c)

    def has_edge(self, p: Sequence[int], q: Sequence[int]) -> bool:
        return has_edge(self.nbr, self.flat(p), self.flat(q))

    # -- merging
    def apply(self, u: int, v: int, w: int, x: int) -> None:
        """Apply the bridge u-v (one cycle), w-x (another): new edges u-w, v-x."""
        ru, rw = self.component_of(u), self.component_of(w)
        if ru == rw:
            raise MergeError("bridge edges lie on the same cycle")
        if self.component_of(v) != ru or self.component_of(x) != rw:
            raise MergeError("bridge edge endpoints lie on different cycles")
        for p, q in ((u, w), (v, x)):
            if not is_move(self.move, self.coords[p], self.coords[q]):
                raise MergeError(f"cross edge {self.board.coord(p)}-{self.board.coord(q)} is not a legal move")
        swap_edges(self.nbr, u, v, w, x)
        small, big = sorted((ru, rw))
        self._parent[big] = small
        self._size[small] += self._size[big]

    def apply_bridge(self, br: Bridge) -> None:
        (a1, b1), (a2, b2) = br.e1, br.e2
        self.apply(self.flat(a1), self.flat(b1), self.flat(a2), self.flat(b2))

    def try_bridge(self, br: Bridge, protected: set | None = None) -> bool:
        """Apply an explicitly given bridge if it is valid here."""
        (a1, b1), (a2, b2) = br.e1, br.e2
        pts = (a1, b1, a2, b2)
        if not all(self.board.contains(p) for p in pts):
            return False
        u, v, w, x = (self.flat(p) for p in pts)
        if min(self.owner[[u, v, w, x]]) < 0:
            return False
        if not (has_edge(self.nbr, u, v) and has_edge(self.nbr, w, x)):
            return False
        prot = _norm_protected(self, protected)
        if (min(u, v), max(u, v)) in prot or (min(w, x), max(w, x)) in prot:
            return False
        if self.component_of(u) == self.component_of(w):
            return False
        if not (is_move(self.move, a1, a2) and is_move(self.move, b1, b2)):
            return False
        self.apply(u, v, w, x)
        return True

    def _bridge_from(self, root: int, target: int | None, prot: set) -> tuple[int, int, int, int] | None:
        """Least bridge from component ``root`` to ``target`` (or any other component)."""
        nt = neighbor_table(self.board, self.move)
        coords = self.coords
        cyc = self.cycle(root)
        nxt = np.roll(cyc, -1)
        lo, hi = np.minimum(cyc, nxt), np.maximum(cyc, nxt)
        # lexicographic by (min endpoint, max endpoint) in coordinate order == flat order (C order)
        order = np.lexsort((hi, lo))
        nbr = self.nbr
        owner = self.owner
        for i in order:
            p, q = int(lo[i]), int(hi[i])
            if (p, q) in prot:
                continue
            best = None
            for a1, b1 in ((p, q), (q, p)):
                for a2 in nt[a1]:
                    a2 = int(a2)
                    if a2 < 0:
                        break
                    o = owner[a2]
                    if o < 0:
                        continue
                    r2 = self.find(int(o))
                    if r2 == root or (target is not None and r2 != target):
                        continue
                    for b2 in nbr[a2]:
                        b2 = int(b2)
                        if (min(a2, b2), max(a2, b2)) in prot:
                            continue
                        if is_move(self.move, coords[b1], coords[b2]):
                            cand = (min(a2, b2), max(a2, b2), a1, b1, a2, b2)
                            if best is None or cand < best:
                                best = cand
            if best is not None:
                return best[2:]
        return None

    def find_bridge(self, l1, l2, protected: set | None = None) -> Bridge | None:
        """Least bridge between the cycles carrying labels l1 and l2, avoiding protected edges."""
        r1, r2 = self.find(self.label_index(l1)), self.find(self.label_index(l2))
        if r1 == r2:
            return None
        found = self._bridge_from(r1, r2, _norm_protected(self, protected))
        if found is None:
            return None
        u, v, w, x = (self.board.coord(i) for i in found)
        return Bridge((u, v), (w, x))

    def merge_into(self, l1, l2, protected: set | None = None) -> bool:
        br = self.find_bridge(l1, l2, protected)
        if br is None:
            return False
        self.apply_bridge(br)
        return True

    def merge_all(self, protected: set | None = None) -> "CycleSet":
        """Merge every component into one cycle, smallest components first."""
        prot = _norm_protected(self, protected)
        while True:
            comps = self.components()
            if len(comps) <= 1:
                return self
            comps.sort(key=lambda r: (self._size[r], r))
            for r in comps:
                found = self._bridge_from(r, None, prot)
                if found is not None:
                    self.apply(*found)
                    break
            else:
                raise Unmergeable([self.labels[r] for r in comps])

    def to_tour(self) -> Tour:
        comps = self.components()
        if len(comps) != 1:
            raise MergeError(f"{len(comps)} cycles remain")
        start = int(self.covered()[0])
        return Tour.from_flat(self.move, self.board, walk(self.nbr, start))

    def edges_present(self, edges) -> bool:
        return all(self.has_edge(p, q) for p, q in edges)


def _norm_protected(cs: CycleSet, protected) -> set:
    if not protected:
        return set()
    out = set()
    for e in protected:
        p, q = tuple(e)
        i, j = (p, q) if isinstance(p, (int, np.integer)) else (cs.flat(p), cs.flat(q))
        out.add((min(i, j), max(i, j)))
    return out


def merge_all(cs: CycleSet, protected: set | None = None) -> Tour:
    cs.merge_all(protected)
    return cs.to_tour()


def find_bridge(cs: CycleSet, l1, l2, protected: set | None = None) -> Bridge | None:
    return cs.find_bridge(l1, l2, protected)
