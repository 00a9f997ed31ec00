"""Command-line front end.

Exit codes: 0 ok, 1 invalid tour, 2 infeasible or unsupported, 3 timeout,
4 usage error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .board import BoardError, BoardSpec, MoveSpec, Tour, feasibility_check, verify_tour
from .merge import MergeError
from .search import SearchConfig, SearchTimeout, ham_cycle_search, required_link_edges

OK, INVALID, UNSUPPORTED, TIMEOUT, USAGE = 0, 1, 2, 3, 4

log = logging.getLogger("leaperforge")


class Unsupported(BoardError):
    """A feasible board this artifact has no construction for."""


def construct_tour(move: MoveSpec, board: BoardSpec) -> Tour:
    """Dispatch to the construction for this move; raises Unsupported or BoardError."""
    f = feasibility_check(board, move)
    if not f:
        raise BoardError(str(f))
    n, d = board.dims[0], board.d
    if any(s != n for s in board.dims):
        raise Unsupported(f"{board} is not a cube; not constructed by this artifact")
    if move.b == 1 and move.a % 2 == 0:
        from .a1 import a1_tour
        from .multidim import extend_a1_to_d
        return a1_tour(move.a, n) if d == 2 else extend_a1_to_d(move.a, n, d)
    if (move.a, move.b) in ((3, 2), (5, 2)):
        from .multidim import extend_ab_to_d
        if move.a == 3:
            from .ab23 import tour_23 as make
        else:
            from .ab25 import tour_25 as make
        base = make(n)
        return base if d == 2 else extend_ab_to_d(move, n, d, base)
    raise Unsupported(f"({move}) on {board} is not constructed by this artifact")


def _write(t: Tour, out: str | None, fmt: str) -> None:
    from .formats import to_json, to_text
    from .render import render_svg
    text = {"txt": to_text, "json": to_json, "svg": render_svg}[fmt](t)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fmt_for(out: str | None, fmt: str | None) -> str:
    if fmt:
        return fmt
    if out and out.endswith(".json"):
        return "json"
    if out and out.endswith(".svg"):
        return "svg"
    return "txt"


def cmd_generate(args) -> int:
    move, board = MoveSpec.parse(args.move), BoardSpec.parse(args.dims)
    try:
        t = construct_tour(move, board)
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except (BoardError, MergeError) as exc:
        print(f"cannot generate: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return TIMEOUT
    rep = verify_tour(t)
    if not rep.hamiltonian:  # pragma: no cover
        print("\n".join(rep.lines()), file=sys.stderr)
        return INVALID
    _write(t, args.out, _fmt_for(args.out, args.format))
    print(f"({move}) tour of {board}: {len(t)} squares, verified", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    from .formats import FormatError, read_tour
    try:
        t = read_tour(args.file)
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return USAGE
    except (FormatError, BoardError) as exc:
        print(f"invalid tour file: {exc}")
        return INVALID
    rep = verify_tour(t)
    print("\n".join(rep.lines()))
    if not rep.legal and rep.first_illegal is not None:
        i = rep.first_illegal
        v = t.vertices
        if i < len(v):
            nxt = v[(i + 1) % len(v)]
            print(f"first illegal step: {tuple(v[i].tolist())} -> {tuple(nxt.tolist())}")
    return OK if rep.hamiltonian else INVALID


def cmd_feasible(args) -> int:
    f = feasibility_check(BoardSpec.parse(args.dims), MoveSpec.parse(args.move))
    print(str(f))
    return OK if f else UNSUPPORTED


def cmd_search(args) -> int:
    move, board = MoveSpec.parse(args.move), BoardSpec.parse(args.dims)
    links = [s for s in (args.require_link or "").split(",") if s]
    try:
        req = required_link_edges(board, move, links)
    except BoardError as exc:
        print(f"cannot require links: {exc}", file=sys.stderr)
        return USAGE
    cfg = SearchConfig(required_edges=req, timeout=args.timeout)
    if args.node_limit:
        cfg.node_limit = args.node_limit
    try:
        t = ham_cycle_search(board, move, cfg)
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return TIMEOUT
    if t is None:
        print(f"no tour of {board} for ({move}) with the required edges (search exhausted)")
        return UNSUPPORTED
    _write(t, args.out, _fmt_for(args.out, args.format))
    print(f"found: {len(t)} squares", file=sys.stderr)
    return OK


def cmd_render(args) -> int:
    from .formats import FormatError, read_tour
    from .render import render_svg
    try:
        t = read_tour(args.file)
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return USAGE
    except (FormatError, BoardError) as exc:
        print(f"invalid tour file: {exc}", file=sys.stderr)
        return INVALID
    Path(args.svg).write_text(render_svg(t, max_floors=args.max_floors))
    return OK


def cmd_regenerate(args) -> int:
    import json
    from . import ab23, ab25
    from .formats import package_data_dir, write_tour
    out = Path(args.dir or os.environ.get("LEAPERFORGE_CACHE") or package_data_dir())
    out.mkdir(parents=True, exist_ok=True)
    what = set(args.what.split(",")) if args.what != "all" else {"corner23", "base23", "brick25", "base25"}
    try:
        if "corner23" in what:
            (out / "corner23.json").write_text(json.dumps(ab23.search_corner_pattern()))
            ab23.corner_pattern.cache_clear()
        if "base23" in what:
            for n in ab23.BASES:
                t = ab23._solver_base(n, args.timeout)
                if t is None:
                    print(f"no linked base for n={n}", file=sys.stderr)
                    return UNSUPPORTED
                write_tour(t, out / f"base23_{n}.json")
        if "brick25" in what:
            (out / "brick25.json").write_text(json.dumps(ab25.search_brick_cover(), separators=(",", ":")))
        if "base25" in what:
            t = ab25.search_base(args.timeout)
            if t is None:
                return UNSUPPORTED
            write_tour(t, out / f"base25_{ab25.BASE_SIDE}.json")
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return TIMEOUT
    print(f"data written to {out}", file=sys.stderr)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leaperforge", description="Generalized knight's tours.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="construct a tour")
    g.add_argument("--move", required=True, help="a,b")
    g.add_argument("--dims", required=True, help="n1xn2[x...]")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("txt", "json", "svg"))
    g.set_defaults(fn=cmd_generate)

    v = sub.add_parser("verify", help="check a tour file")
    v.add_argument("file")
    v.set_defaults(fn=cmd_verify)

    f = sub.add_parser("feasible", help="report a necessary-condition obstruction")
    f.add_argument("--move", required=True)
    f.add_argument("--dims", required=True)
    f.set_defaults(fn=cmd_feasible)

    s = sub.add_parser("search", help="exact backtracking search")
    s.add_argument("--move", required=True)
    s.add_argument("--dims", required=True)
    s.add_argument("--require-link", help="comma list of links, e.g. H,V")
    s.add_argument("--timeout", type=float, default=120.0)
    s.add_argument("--node-limit", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=("txt", "json", "svg"))
    s.set_defaults(fn=cmd_search)

    r = sub.add_parser("render", help="draw a tour file as SVG")
    r.add_argument("file")
    r.add_argument("--svg", required=True)
    r.add_argument("--max-floors", type=int)
    r.set_defaults(fn=cmd_render)

    rg = sub.add_parser("regenerate", help="recompute the stored data files")
    rg.add_argument("--what", default="all", help="all or a comma list of corner23,base23,brick25,base25")
    rg.add_argument("--dir", help="target directory (default $LEAPERFORGE_CACHE, else the package data)")
    rg.add_argument("--timeout", type=float, default=120.0)
    rg.set_defaults(fn=cmd_regenerate)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.fn(args)
    except BoardError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
