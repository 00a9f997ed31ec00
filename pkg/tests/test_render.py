import xml.etree.ElementTree as ET

from leaperforge.a1 import a1_tour
from leaperforge.ab23 import stored_base
from leaperforge.multidim import extend_a1_to_d
from leaperforge.render import render_2d, render_floors, render_svg

NS = "{http://www.w3.org/2000/svg}"


def test_render_2d_is_well_formed():
    t = stored_base(10)
    root = ET.fromstring(render_svg(t))
    assert root.tag == NS + "svg"
    paths = root.findall(NS + "path")
    assert len(paths) == 1
    # one move per step of the tour, closed
    d = paths[0].get("d")
    assert d.count("L") == len(t) - 1 and d.endswith("Z")
    assert len(root.findall(NS + "rect")) == 1 + 50
    titles = [e.text for e in root.iter(NS + "title")]
    assert any("link alpha" in s for s in titles) and any("link beta" in s for s in titles)


def test_render_2d_without_links():
    root = ET.fromstring(render_2d(stored_base(10), show_links=False))
    assert not root.findall(NS + "line")


def test_render_floors():
    t = extend_a1_to_d(2, 14, 3)
    root = ET.fromstring(render_svg(t, max_floors=3))
    groups = root.findall(NS + "g")
    assert [g.get("id") for g in groups] == ["floor-0", "floor-1", "floor-2"]
    assert all(g.findall(NS + "circle") for g in groups)
    full = ET.fromstring(render_floors(t))
    assert len(full.findall(NS + "g")) == 14
    lines = sum(len(g.findall(NS + "line")) for g in full.findall(NS + "g"))
    circles = sum(len(g.findall(NS + "circle")) for g in full.findall(NS + "g"))
    # 13 joins between consecutive floors, each adding two cross steps
    cross = sum(int(p[2] != q[2]) for p, q in t.edges())
    assert cross == 26
    assert lines == len(t) - cross and circles == 2 * cross


def test_render_large_board_stays_bounded():
    svg = render_svg(a1_tour(2, 60))
    root = ET.fromstring(svg)
    assert float(root.get("width")) <= 900
