"""Boards, leaper moves, link edges, feasibility and the tour verifier.

Coordinates follow the Cartesian first quadrant: axis 0 is x (rightward),
axis 1 is y (upward), ``(0, 0)`` is the bottom-left square.  Vertices are
handled internally as flat C-order indices into the board.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

Coord = tuple[int, ...]


class BoardError(ValueError):
    """Raised for malformed boards, moves or coordinates."""


class LinkUndefined(BoardError):
    """The requested link edge does not fit on the board."""


@dataclass(frozen=True)
class MoveSpec:
    """An (a, b) leaper, stored with ``a >= b``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise BoardError(f"move legs must be positive, got ({self.a}, {self.b})")
        if self.a < self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, text: str) -> "MoveSpec":
        try:
            a, b = (int(p) for p in text.replace(" ", "").split(","))
        except ValueError:
            raise BoardError(f"cannot parse move {text!r}, expected 'a,b'") from None
        return cls(a, b)

    @property
    def even_odd(self) -> tuple[int, int]:
        """Legs ordered (even, odd); used by the floor-stacking links."""
        if (self.a + self.b) % 2 == 0:
            raise LinkUndefined(f"move {self} has no even/odd leg split")
        return (self.a, self.b) if self.a % 2 == 0 else (self.b, self.a)

    def __str__(self):
        return f"{self.a},{self.b}"


@dataclass(frozen=True)
class BoardSpec:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) < 2:
            raise BoardError("a board needs at least two axes")
        if any(d < 1 for d in dims):
            raise BoardError(f"board sides must be positive, got {dims}")

    @classmethod
    def square(cls, n: int, d: int = 2) -> "BoardSpec":
        return cls((n,) * d)

    @classmethod
    def parse(cls, text: str) -> "BoardSpec":
        try:
            return cls(tuple(int(p) for p in text.lower().split("x")))
        except ValueError:
            raise BoardError(f"cannot parse dims {text!r}, expected e.g. '28x28'") from None

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def contains(self, c: Sequence[int]) -> bool:
        return len(c) == self.d and all(0 <= x < n for x, n in zip(c, self.dims))

    def index(self, c: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(c), self.dims))

    def coord(self, i: int) -> Coord:
        return tuple(int(x) for x in np.unravel_index(i, self.dims))

    def __str__(self):
        return "x".join(map(str, self.dims))


def is_move(move: MoveSpec, u: Sequence[int], v: Sequence[int]) -> bool:
    nonzero = sorted(abs(x - y) for x, y in zip(u, v) if x != y)
    return nonzero == [move.b, move.a]


@lru_cache(maxsize=None)
def move_offsets(move: MoveSpec, d: int) -> tuple[Coord, ...]:
    """All displacement vectors of the leaper in d dimensions, sorted."""
    out = set()
    for i, j in itertools.permutations(range(d), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * d
            v[i] = si * move.a
            v[j] = sj * move.b
            out.add(tuple(v))
    return tuple(sorted(out))


def legal_moves(c: Sequence[int], board: BoardSpec, move: MoveSpec) -> list[Coord]:
    """In-bounds leaper neighbours of ``c`` in lexicographic order."""
    c = tuple(c)
    if not board.contains(c):
        raise BoardError(f"{c} is not on board {board}")
    out = []
    for off in move_offsets(move, board.d):
        w = tuple(x + o for x, o in zip(c, off))
        if board.contains(w):
            out.append(w)
    return sorted(out)


@lru_cache(maxsize=64)
def neighbor_table(board: BoardSpec, move: MoveSpec) -> np.ndarray:
    """(size, k) array of flat neighbour ids, padded with -1, ascending per row."""
    coords = np.indices(board.dims).reshape(board.d, -1).T
    offs = np.array(move_offsets(move, board.d))
    cand = coords[:, None, :] + offs[None, :, :]
    dims = np.array(board.dims)
    ok = np.all((cand >= 0) & (cand < dims), axis=2)
    flat = np.ravel_multi_index(tuple(np.clip(cand, 0, dims - 1).transpose(2, 0, 1)), board.dims)
    return _pad_last(np.where(ok, flat, -1))


def _pad_last(flat: np.ndarray) -> np.ndarray:
    big = np.iinfo(np.int64).max
    tmp = np.where(flat >= 0, flat, big)
    tmp.sort(axis=1)
    tmp[tmp == big] = -1
    width = int((tmp >= 0).sum(axis=1).max()) if len(tmp) else 0
    return tmp[:, :width].copy()


# ---------------------------------------------------------------- feasibility

class Obstruction(str, enum.Enum):
    GCD = "gcd(a,b) > 1: every move preserves coordinates modulo the common factor"
    PARITY = "a+b even: the graph has two connected components (coordinate-sum parity)"
    BIPARTITION = "odd vertex count: the graph is bipartite with two partitions of different size"
    EDGELESS = "board too small for a single move: the graph has no edges"


@dataclass(frozen=True)
class Feasibility:
    obstruction: Obstruction | None = None

    @property
    def feasible(self) -> bool:
        return self.obstruction is None

    def __bool__(self):
        return self.feasible

    def __str__(self):
        return "no obstruction found" if self.feasible else f"infeasible: {self.obstruction.value}"


def feasibility_check(board: BoardSpec, move: MoveSpec) -> Feasibility:
    """Necessary conditions only; feasible does not promise a tour exists."""
    if math.gcd(move.a, move.b) > 1:
        return Feasibility(Obstruction.GCD)
    if (move.a + move.b) % 2 == 0:
        return Feasibility(Obstruction.PARITY)
    if board.size % 2 == 1:
        return Feasibility(Obstruction.BIPARTITION)
    dims = board.dims
    if not any(dims[i] > move.a and dims[j] > move.b for i, j in itertools.permutations(range(board.d), 2)):
        return Feasibility(Obstruction.EDGELESS)
    return Feasibility()


# ---------------------------------------------------------------- tours

@dataclass(frozen=True, eq=False)
class Tour:
    """A closed leaper walk; ``vertices`` is an (L, d) integer array."""

    move: MoveSpec
    board: BoardSpec
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.int64).view()
        if v.ndim != 2 or (len(v) and v.shape[1] != self.board.d):
            raise BoardError(f"vertices must be an (L, {self.board.d}) array")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_coords(cls, move: MoveSpec, board: BoardSpec, coords: Iterable[Sequence[int]]) -> "Tour":
        arr = np.array([tuple(c) for c in coords], dtype=np.int64).reshape(-1, board.d)
        return cls(move, board, arr)

    @classmethod
    def from_flat(cls, move: MoveSpec, board: BoardSpec, flat: Sequence[int]) -> "Tour":
        flat = np.asarray(flat, dtype=np.int64)
        return cls(move, board, np.stack(np.unravel_index(flat, board.dims), axis=1))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return (tuple(int(x) for x in row) for row in self.vertices)

    @cached_property
    def flat(self) -> np.ndarray:
        return np.ravel_multi_index(tuple(self.vertices.T), self.board.dims)

    @cached_property
    def _edge_keys(self) -> np.ndarray:
        f = self.flat
        g = np.roll(f, -1)
        keys = np.minimum(f, g) * self.board.size + np.maximum(f, g)
        keys.sort()
        return keys

    def has_edge(self, u: Sequence[int], v: Sequence[int]) -> bool:
        if not (self.board.contains(u) and self.board.contains(v)):
            return False
        i, j = sorted((self.board.index(u), self.board.index(v)))
        key = i * self.board.size + j
        pos = np.searchsorted(self._edge_keys, key)
        return bool(pos < len(self._edge_keys) and self._edge_keys[pos] == key)

    def edges(self) -> list[tuple[Coord, Coord]]:
        vs = list(self)
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def transformed(self, fn) -> "Tour":
        """Apply a coordinate map ``fn(vertices, dims) -> (vertices, dims)``."""
        verts, dims = fn(self.vertices, self.board.dims)
        return Tour(self.move, BoardSpec(tuple(dims)), verts)

    def translated(self, offset: Sequence[int], board: BoardSpec) -> "Tour":
        return Tour(self.move, board, self.vertices + np.asarray(offset, dtype=np.int64))

    def __repr__(self):
        return f"Tour(move=({self.move}), board={self.board}, length={len(self)})"


# dihedral maps on 2-D boards; each takes (verts, dims) and returns the same
def flip_x(verts, dims):
    out = verts.copy()
    out[:, 0] = dims[0] - 1 - out[:, 0]
    return out, dims


def flip_y(verts, dims):
    out = verts.copy()
    out[:, 1] = dims[1] - 1 - out[:, 1]
    return out, dims


def transpose(verts, dims):
    out = verts.copy()
    out[:, [0, 1]] = out[:, [1, 0]]
    return out, (dims[1], dims[0]) + tuple(dims[2:])


def rotate_ccw(verts, dims):
    # (x, y) -> (m-1-y, x) on an m x n board, giving an n x m board... for squares only
    out = verts.copy()
    out[:, 0] = dims[1] - 1 - verts[:, 1]
    out[:, 1] = verts[:, 0]
    return out, (dims[1], dims[0]) + tuple(dims[2:])


def dihedral_images(p: Coord, q: Coord, dims: Sequence[int], square_only_transpose: bool = True):
    """Images of the edge {p, q} under the symmetry group of an m x n rectangle."""
    m, n = dims[0], dims[1]
    maps = [
        lambda x, y: (x, y),
        lambda x, y: (m - 1 - x, y),
        lambda x, y: (x, n - 1 - y),
        lambda x, y: (m - 1 - x, n - 1 - y),
    ]
    if m == n or not square_only_transpose:
        maps += [
            lambda x, y: (y, x),
            lambda x, y: (n - 1 - y, x),
            lambda x, y: (y, m - 1 - x),
            lambda x, y: (n - 1 - y, m - 1 - x),
        ]
    seen = []
    for f in maps:
        e = (f(*p), f(*q))
        if e not in seen and (e[1], e[0]) not in seen:
            seen.append(e)
    return seen


# ---------------------------------------------------------------- links

class LinkKind(str, enum.Enum):
    A = "A"
    B = "B"
    ALPHA = "alpha"
    BETA = "beta"
    H = "H"
    V = "V"

    @classmethod
    def parse(cls, text: str) -> "LinkKind":
        key = text.strip()
        for k in cls:
            if key in (k.value, k.name) or key.lower() == k.value.lower():
                return k
        raise BoardError(f"unknown link {text!r}")


def link_edge(kind: LinkKind, move: MoveSpec, board: BoardSpec) -> tuple[Coord, Coord]:
    """The canonical edge of a link for this move and (2-D) board."""
    a, b = move.a, move.b
    m = board.dims[0]
    if kind is LinkKind.A:
        p, q = (a - 1, 1), (a - 2, a + 1)
    elif kind is LinkKind.B:
        p, q = (a, 0), (0, 1)
    elif kind is LinkKind.ALPHA:
        e, o = move.even_odd
        p, q = (0, o), (e, 0)
    elif kind is LinkKind.BETA:
        e, o = move.even_odd
        p, q = (m - 1, e), (m - o - 1, 0)
    elif kind is LinkKind.H:
        p, q = (a - 1, b), (a - b - 1, a + b)
    elif kind is LinkKind.V:
        p, q = (b, a - 1), (a + b, a - b - 1)
    else:  # pragma: no cover
        raise BoardError(kind)
    tail = (0,) * (board.d - 2)
    p, q = p + tail, q + tail
    if not (board.contains(p) and board.contains(q)):
        raise LinkUndefined(f"link {kind.value} does not fit on board {board}")
    if not is_move(move, p, q):
        raise LinkUndefined(f"link {kind.value} is not a legal move of ({move})")
    return p, q


def link_candidates(kind: LinkKind, move: MoveSpec, board: BoardSpec) -> list[tuple[Coord, Coord]]:
    """Edges accepted as the link: H and V admit all their symmetric images."""
    p, q = link_edge(kind, move, board)
    if kind in (LinkKind.H, LinkKind.V) and board.d == 2:
        return dihedral_images(p, q, board.dims)
    return [(p, q)]


def find_link(t: Tour, kind: LinkKind) -> tuple[Coord, Coord] | None:
    """The first accepted image of the link that ``t`` contains, if any."""
    for p, q in link_candidates(kind, t.move, t.board):
        if t.has_edge(p, q):
            return p, q
    return None


def contains_link(t: Tour, kind: LinkKind) -> bool:
    return find_link(t, kind) is not None


# ---------------------------------------------------------------- verifier

@dataclass
class VerifyReport:
    length: int
    expected_length: int
    duplicate: Coord | None = None
    first_illegal: int | None = None
    illegal_steps: int = 0
    links: dict[str, bool] = field(default_factory=dict)

    @property
    def distinct(self) -> bool:
        return self.duplicate is None

    @property
    def legal(self) -> bool:
        return self.illegal_steps == 0

    @property
    def valid(self) -> bool:
        return self.length > 0 and self.distinct and self.legal

    @property
    def hamiltonian(self) -> bool:
        return self.valid and self.length == self.expected_length

    def lines(self) -> list[str]:
        out = [f"length: {self.length} (board has {self.expected_length})"]
        out.append("distinct: yes" if self.distinct else f"distinct: NO, {self.duplicate} repeats")
        if self.legal:
            out.append("steps: all legal")
        else:
            out.append(f"steps: {self.illegal_steps} illegal, first at step {self.first_illegal}")
        for k, v in self.links.items():
            out.append(f"link {k}: {'present' if v else 'absent'}")
        out.append("verdict: " + ("valid Hamiltonian tour" if self.hamiltonian else "valid cycle" if self.valid else "INVALID"))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def illegal_steps(move: MoveSpec, verts: np.ndarray) -> np.ndarray:
    """Indices i where verts[i] -> verts[i+1] (cyclically) is not a leaper move."""
    if len(verts) < 2:
        return np.arange(len(verts))
    diff = np.abs(np.roll(verts, -1, axis=0) - verts)
    diff.sort(axis=1)
    ok = (diff[:, -1] == move.a) & (diff[:, -2] == move.b)
    if diff.shape[1] > 2:
        ok &= np.all(diff[:, :-2] == 0, axis=1)
    return np.flatnonzero(~ok)


def verify_tour(t: Tour) -> VerifyReport:
    rep = VerifyReport(length=len(t), expected_length=t.board.size)
    if len(t) == 0:
        return rep
    if np.any(t.vertices < 0) or np.any(t.vertices >= np.array(t.board.dims)):
        bad = int(np.flatnonzero(np.any((t.vertices < 0) | (t.vertices >= np.array(t.board.dims)), axis=1))[0])
        rep.first_illegal = bad
        rep.illegal_steps = 1
        return rep
    flat = t.flat
    order = np.argsort(flat, kind="stable")
    dup = np.flatnonzero(flat[order][1:] == flat[order][:-1])
    if len(dup):
        rep.duplicate = t.board.coord(int(flat[order][dup[0]]))
    bad = illegal_steps(t.move, t.vertices)
    rep.illegal_steps = len(bad)
    rep.first_illegal = int(bad[0]) if len(bad) else None
    if t.board.d == 2:
        for kind in LinkKind:
            try:
                rep.links[kind.value] = contains_link(t, kind)
            except LinkUndefined:
                pass
    return rep


def is_hamiltonian(t: Tour) -> bool:
    return verify_tour(t).hamiltonian
