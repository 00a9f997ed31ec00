"""Static SVG drawings of tours.

A 2-D tour is drawn as a chequered board with the closed walk on top;
(0, 0) sits at the bottom-left, so y is flipped for display.  For d > 2
every floor (fixed x_3..x_d) gets its own page, laid out in a column, with
the steps inside that floor drawn as lines and the squares where the walk
leaves the floor marked with dots.
"""
from __future__ import annotations

import itertools
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .board import LinkKind, LinkUndefined, Tour, find_link

LIGHT, DARK = "#f0d9b5", "#b58863"
LINE, LINK, EXIT = "#1f3a93", "#d62728", "#2ca02c"


def _board_rects(m: int, n: int, cell: float, x0: float, y0: float) -> list[str]:
    out = [f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{m * cell:.2f}" height="{n * cell:.2f}" fill="{LIGHT}"/>']
    for x in range(m):
        for y in range(n):
            if (x + y) % 2 == 0:
                sx, sy = x0 + x * cell, y0 + (n - 1 - y) * cell
                out.append(f'<rect x="{sx:.2f}" y="{sy:.2f}" width="{cell:.2f}" height="{cell:.2f}" fill="{DARK}"/>')
    return out


def _centre(p, n: int, cell: float, x0: float, y0: float) -> tuple[float, float]:
    return x0 + (p[0] + 0.5) * cell, y0 + (n - 1 - p[1] + 0.5) * cell


def _path_d(points: Sequence[tuple[float, float]], closed: bool) -> str:
    d = " ".join(f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}" for i, (x, y) in enumerate(points))
    return d + (" Z" if closed else "")


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="0 0 {width:.2f} {height:.2f}">')
    return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head, *body, "</svg>"]) + "\n"


def _cell_size(m: int, n: int, target: float) -> float:
    return max(2.0, min(40.0, target / max(m, n)))


def render_2d(t: Tour, target: float = 800.0, show_links: bool = True) -> str:
    m, n = t.board.dims
    cell = _cell_size(m, n, target)
    pad = cell
    body = _board_rects(m, n, cell, pad, pad)
    pts = [_centre(p, n, cell, pad, pad) for p in t.vertices.tolist()]
    stroke = max(0.5, cell / 8)
    body.append(f'<path d="{_path_d(pts, True)}" fill="none" stroke="{LINE}" stroke-width="{stroke:.2f}" '
                f'stroke-linejoin="round"/>')
    if show_links:
        for kind in LinkKind:
            try:
                e = find_link(t, kind)
            except LinkUndefined:
                continue
            if e is None:
                continue
            (ax, ay), (bx, by) = (_centre(p, n, cell, pad, pad) for p in e)
            body.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="{LINK}" '
                        f'stroke-width="{2 * stroke:.2f}"><title>link {kind.value}</title></line>')
    title = f'<title>({escape(str(t.move))}) tour of {escape(str(t.board))}, {len(t)} squares</title>'
    return _svg(m * cell + 2 * pad, n * cell + 2 * pad, [title, *body])


def render_floors(t: Tour, target: float = 400.0, max_floors: int | None = None) -> str:
    """One page per floor of a d > 2 tour, stacked vertically."""
    dims = t.board.dims
    m, n = dims[0], dims[1]
    floors = list(itertools.product(*(range(s) for s in dims[2:])))
    if max_floors is not None:
        floors = floors[:max_floors]
    cell = _cell_size(m, n, target)
    pad = cell
    page_h = n * cell + 3 * pad
    v = np.asarray(t.vertices)
    nxt = np.roll(v, -1, axis=0)
    prv = np.roll(v, 1, axis=0)
    same = np.all(v[:, 2:] == nxt[:, 2:], axis=1)
    leaves = ~same | ~np.all(v[:, 2:] == prv[:, 2:], axis=1)
    by_floor: dict[tuple, list[int]] = {}
    for i, key in enumerate(map(tuple, v[:, 2:].tolist())):
        by_floor.setdefault(key, []).append(i)
    stroke = max(0.5, cell / 8)
    body = [f'<title>({escape(str(t.move))}) tour of {escape(str(t.board))}, {len(t)} squares</title>']
    for k, f in enumerate(floors):
        y0 = k * page_h + 2 * pad
        body.append(f'<g id="floor-{"-".join(map(str, f))}">')
        body.append(f'<text x="{pad:.2f}" y="{y0 - pad / 3:.2f}" font-size="{max(8, pad * 0.8):.1f}" '
                    f'font-family="sans-serif">floor {escape(str(f))}</text>')
        body += _board_rects(m, n, cell, pad, y0)
        idx = by_floor.get(f, [])
        for i in idx:
            if same[i]:
                (ax, ay), (bx, by) = (_centre(p, n, cell, pad, y0) for p in (v[i], nxt[i]))
                body.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="{LINE}" '
                            f'stroke-width="{stroke:.2f}"/>')
        for i in idx:
            if leaves[i]:
                cx, cy = _centre(v[i], n, cell, pad, y0)
                body.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{cell / 4:.2f}" fill="{EXIT}"/>')
        body.append("</g>")
    return _svg(m * cell + 2 * pad, len(floors) * page_h + pad, body)


def render_svg(t: Tour, target: float = 800.0, max_floors: int | None = None) -> str:
    if t.board.d == 2:
        return render_2d(t, target)
    return render_floors(t, target / 2, max_floors)
