import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from leaperforge.board import BoardSpec, MoveSpec, verify_tour
from leaperforge.cli import INVALID, OK, TIMEOUT, UNSUPPORTED, USAGE, Unsupported, construct_tour, run
from leaperforge.formats import read_tour


def test_generate_and_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert run(["generate", "--move", "2,3", "--dims", "10x10", "--out", str(out)]) == OK
    t = read_tour(out)
    assert verify_tour(t).hamiltonian and len(t) == 100
    assert run(["verify", str(out)]) == OK
    assert "hamiltonian" in capsys.readouterr().out.lower()


def test_generate_json_and_svg(tmp_path):
    js, svg = tmp_path / "t.json", tmp_path / "t.svg"
    assert run(["generate", "--move", "2,1", "--dims", "14x14", "--out", str(js)]) == OK
    assert json.loads(js.read_text())["dims"] == [14, 14]
    assert run(["generate", "--move", "5,2", "--dims", "14x14", "--out", str(svg)]) == OK
    ET.parse(svg)


def test_generate_3d(tmp_path):
    out = tmp_path / "t.txt"
    assert run(["generate", "--move", "2,3", "--dims", "10x10x10", "--out", str(out)]) == OK
    assert len(read_tour(out)) == 1000


def test_verify_reports_first_illegal_step(tmp_path, capsys):
    out = tmp_path / "t.txt"
    run(["generate", "--move", "2,1", "--dims", "14x14", "--out", str(out)])
    lines = out.read_text().splitlines()
    lines[3], lines[4] = lines[4], lines[3]
    out.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert run(["verify", str(out)]) == INVALID
    assert "first illegal step" in capsys.readouterr().out


def test_verify_bad_files(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a tour\n")
    assert run(["verify", str(bad)]) == INVALID
    assert run(["verify", str(tmp_path / "missing.txt")]) == USAGE


@pytest.mark.parametrize("move,dims", [("2,1", "15x15"), ("3,1", "16x16"), ("2,4", "20x20")])
def test_infeasible_boards_exit_2(move, dims):
    assert run(["generate", "--move", move, "--dims", dims]) == UNSUPPORTED
    assert run(["feasible", "--move", move, "--dims", dims]) == UNSUPPORTED


def test_unsupported_boards_exit_2():
    assert run(["generate", "--move", "4,1", "--dims", "20x20"]) == UNSUPPORTED
    assert run(["generate", "--move", "2,1", "--dims", "14x16"]) == UNSUPPORTED
    assert run(["generate", "--move", "4,3", "--dims", "14x14"]) == UNSUPPORTED
    with pytest.raises(Unsupported):
        construct_tour(MoveSpec(7, 2), BoardSpec.square(20))


def test_feasible_ok():
    assert run(["feasible", "--move", "2,1", "--dims", "8x8"]) == OK


def test_search(tmp_path, capsys):
    out = tmp_path / "s.txt"
    assert run(["search", "--move", "3,2", "--dims", "10x10", "--require-link", "alpha,beta",
                "--out", str(out)]) == OK
    assert verify_tour(read_tour(out)).hamiltonian
    assert run(["search", "--move", "3,2", "--dims", "8x8"]) == UNSUPPORTED
    assert "exhausted" in capsys.readouterr().out
    assert run(["search", "--move", "3,2", "--dims", "12x12", "--node-limit", "100"]) == TIMEOUT
    assert run(["search", "--move", "3,2", "--dims", "10x10", "--require-link", "nope"]) == USAGE


def test_render(tmp_path):
    t, svg = tmp_path / "t.txt", tmp_path / "t.svg"
    run(["generate", "--move", "2,1", "--dims", "14x14x14", "--out", str(t)])
    assert run(["render", str(t), "--svg", str(svg), "--max-floors", "2"]) == OK
    assert len(ET.parse(svg).getroot().findall("{http://www.w3.org/2000/svg}g")) == 2


def test_regenerate_base(tmp_path):
    assert run(["regenerate", "--what", "base25", "--dir", str(tmp_path), "--timeout", "120"]) == OK
    t = read_tour(tmp_path / "base25_14.json")
    assert verify_tour(t).hamiltonian


def test_usage_errors():
    assert run([]) == USAGE
    assert run(["generate", "--move", "2", "--dims", "8x8"]) == USAGE
    assert run(["generate", "--move", "2,1", "--dims", "8"]) == USAGE
    assert run(["--help"]) == OK


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "leaperforge.cli", "feasible", "--move", "2,1", "--dims", "15x15"],
                       capture_output=True, text=True)
    assert r.returncode == UNSUPPORTED and "bipartite" in r.stdout.lower()
