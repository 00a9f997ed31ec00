"""Tour files: the line-based text format and its JSON mirror.

Text format::

    leapertour v1 move=a,b dims=n1xn2[x...]
    x1,y1[,...]
    ...

one vertex per line, the closing move back to the first vertex implied.
"""
from __future__ import annotations

import json
import os
import re
from importlib import resources
from pathlib import Path

import numpy as np

from .board import BoardError, BoardSpec, MoveSpec, Tour

HEADER = re.compile(r"^leapertour v1 move=(\d+),(\d+) dims=(\d+(?:x\d+)+)\s*$")


class FormatError(BoardError):
    pass


def to_text(t: Tour) -> str:
    head = f"leapertour v1 move={t.move.a},{t.move.b} dims={'x'.join(map(str, t.board.dims))}"
    body = "\n".join(",".join(map(str, row)) for row in np.asarray(t.vertices).tolist())
    return head + "\n" + body + ("\n" if body else "")


def from_text(text: str) -> Tour:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty tour file")
    m = HEADER.match(lines[0])
    if not m:
        raise FormatError(f"bad header: {lines[0]!r}")
    move = MoveSpec(int(m.group(1)), int(m.group(2)))
    board = BoardSpec.parse(m.group(3))
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        try:
            row = [int(v) for v in ln.split(",")]
        except ValueError:
            raise FormatError(f"line {k}: not a list of integers: {ln!r}") from None
        if len(row) != board.d:
            raise FormatError(f"line {k}: expected {board.d} coordinates")
        rows.append(row)
    return Tour.from_coords(move, board, rows)


def to_json(t: Tour) -> str:
    return json.dumps({"move": [t.move.a, t.move.b], "dims": list(t.board.dims),
                       "vertices": np.asarray(t.vertices).tolist()}, separators=(",", ":"))


def from_json(text: str) -> Tour:
    try:
        data = json.loads(text)
        move = MoveSpec(*data["move"])
        board = BoardSpec(tuple(data["dims"]))
        verts = data["vertices"]
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad JSON tour: {exc}") from None
    if any(len(v) != board.d for v in verts):
        raise FormatError(f"every vertex needs {board.d} coordinates")
    return Tour.from_coords(move, board, verts)


def read_tour(path) -> Tour:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_text(text)


def write_tour(t: Tour, path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "txt")
    if fmt == "json":
        path.write_text(to_json(t))
    elif fmt == "txt":
        path.write_text(to_text(t))
    else:
        raise ValueError(f"unknown format {fmt}")


def cycles_to_json(cs) -> str:
    """A CycleSet as JSON: the tour mirror with ``cycles`` in place of ``vertices``."""
    cycles = [cs.coords[cs.cycle(r)].tolist() for r in cs.components()]
    return json.dumps({"move": [cs.move.a, cs.move.b], "dims": list(cs.board.dims), "cycles": cycles},
                      separators=(",", ":"))


def cycles_from_json(text: str):
    from .merge import CycleSet
    try:
        data = json.loads(text)
        move = MoveSpec(*data["move"])
        board = BoardSpec(tuple(data["dims"]))
        cycles = data["cycles"]
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad JSON cycle set: {exc}") from None
    return CycleSet(board, move, cycles)


# ---------------------------------------------------------------- data files

def package_data_dir() -> Path:
    return Path(str(resources.files("leaperforge") / "data"))


def data_file(name: str) -> Path:
    """A stored data file, taken from $LEAPERFORGE_CACHE when present there."""
    d = os.environ.get("LEAPERFORGE_CACHE")
    if d and (Path(d) / name).exists():
        return Path(d) / name
    return package_data_dir() / name
