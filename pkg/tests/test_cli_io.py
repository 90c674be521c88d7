import json
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ribbonforge.cli import main
from ribbonforge.constructions import annulus_lk_n, pentagram_trefoil
from ribbonforge.diagram import Fold, KnotDiagram, regular_polygon, validate
from ribbonforge.io import DocumentError, canonical, make_document, parse_document, serialize_document
from ribbonforge.ribbon import build_ribbon
from ribbonforge.svg import BOUNDARY_COLOR, CORE_COLOR, FOLD_COLOR, PADDING, render_svg

SQUARE_DOC = """{
  "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
  "folding": ["u", "u", "u", "u"]
}"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_minimal_square_parses():
    doc = parse_document(SQUARE_DOC)
    assert validate(doc.diagram()) == []
    assert doc.folding == [Fold.UNDER] * 4
    assert doc.version == 1


def test_missing_folding_entry_names_index():
    text = SQUARE_DOC.replace('"u", "u", "u", "u"', '"u", "u", "u"')
    with pytest.raises(DocumentError) as err:
        parse_document(text)
    assert err.value.where == "folding[3]"


@pytest.mark.parametrize(
    "patch, where",
    [
        (lambda r: r.update(folding=["u", "x", "u", "u"]), "folding[1]"),
        (lambda r: r["vertices"].__setitem__(2, [1]), "vertices[2]"),
        (lambda r: r.update(crossings=[{"over": 0, "under": 9}]), "crossings[0].under"),
        (lambda r: r.update(width=-1), "width"),
        (lambda r: r.pop("vertices"), "vertices"),
    ],
)
def test_schema_errors_name_the_field(patch, where):
    raw = json.loads(SQUARE_DOC)
    patch(raw)
    with pytest.raises(DocumentError) as err:
        parse_document(json.dumps(raw))
    assert err.value.where == where


def test_json_syntax_error_reports_line():
    with pytest.raises(DocumentError) as err:
        parse_document('{\n  "vertices": [,\n}')
    assert err.value.where.startswith("line 2")


def test_unknown_fields_move_to_metadata():
    raw = json.loads(SQUARE_DOC)
    raw["author"] = "someone"
    doc = parse_document(json.dumps(raw))
    assert doc.metadata == {"author": "someone"}
    again = json.loads(serialize_document(doc))
    assert again["metadata"] == {"author": "someone"} and "author" not in again


def test_crossings_survive_round_trip():
    res = pentagram_trefoil()
    doc = make_document(res.diagram, res.folding, res.width)
    back = parse_document(serialize_document(doc))
    assert back.diagram().crossings == res.diagram.crossings
    assert back.width == res.width


coords = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@given(
    st.lists(st.tuples(coords, coords), min_size=2, max_size=12),
    st.data(),
)
def test_round_trip_is_canonical(verts, data):
    n = len(verts)
    letters = data.draw(st.lists(st.sampled_from("uo"), min_size=n, max_size=n))
    heights = data.draw(st.none() | st.lists(coords, min_size=n, max_size=n))
    width = data.draw(st.none() | st.floats(1e-6, 1e3))
    raw = {"vertices": [list(v) for v in verts], "folding": letters}
    if heights is not None:
        raw["heights"] = heights
    if width is not None:
        raw["width"] = width
    text = json.dumps(raw)
    once = canonical(text)
    assert canonical(once) == once
    doc = parse_document(once)
    assert doc.vertices == [tuple(v) for v in verts]
    assert serialize_document(parse_document(once)) == once


def test_svg_counts_match_topology():
    res = annulus_lk_n(3, 1)
    svg = render_svg(res.opened, res.folding, 1.0)
    assert svg.count('class="fold-line"') == res.opened.n
    assert svg.count('class="boundary"') == 2
    assert CORE_COLOR in svg and BOUNDARY_COLOR in svg and FOLD_COLOR in svg
    tri = regular_polygon(3)
    svg = render_svg(tri, (Fold.UNDER, Fold.UNDER, Fold.OVER))
    assert svg.count('class="fold-line"') == 3
    assert svg.count('class="boundary"') == 1
    assert svg.count('class="fold-sign"') == 3


def test_svg_viewport_is_padded():
    d, f, w = regular_polygon(4, perimeter=4.0), (Fold.UNDER,) * 4, 0.5
    svg = render_svg(d, f, w)
    x, y, wv, hv = map(float, re.search(r'viewBox="([^"]+)"', svg).group(1).split())
    geom = build_ribbon(d, f, w)
    every = np.vstack([d.points] + [np.asarray(b) for b in geom.boundary])
    extent = every.max(axis=0) - every.min(axis=0)
    assert (wv, hv) == pytest.approx(tuple(PADDING * extent), rel=1e-5)
    # the ribbon of a diamond ends on the fold lines through the corners
    assert extent == pytest.approx([2 ** 0.5] * 2, rel=1e-9)


def test_cli_construct_then_analyze(tmp_path, capsys):
    out = tmp_path / "a3.json"
    assert main(["construct", "annulus-lk-n", "--n", "3", "--out", str(out)]) == 0
    doc = parse_document(out.read_text())
    assert len(doc.vertices) == 8
    capsys.readouterr()
    assert main(["analyze", str(out), "--json", "--check-identity"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lk"] == 3 and data["rib"] == pytest.approx(6.0)


def test_cli_analyze_examples(tmp_path, capsys):
    pent = make_document(regular_polygon(5), [Fold.UNDER] * 5)
    path = _write(tmp_path, "pent.json", serialize_document(pent))
    assert main(["analyze", path, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lk"] == 5 and data["type"] == "MobiusBand"
    assert "max_width" in data

    star = pentagram_trefoil()
    path = _write(tmp_path, "star.json", serialize_document(make_document(star.diagram, star.folding)))
    assert main(["analyze", path, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["lk"], data["wr"]) == (-7, -3)

    path = _write(tmp_path, "sq.json", SQUARE_DOC)
    assert main(["analyze", path, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lk"] == 2 and data["rib"] == pytest.approx(4.0)


def test_cli_infeasible_width_fails(tmp_path, capsys):
    path = _write(tmp_path, "sq.json", SQUARE_DOC)
    assert main(["analyze", path, "--width", "2.0"]) == 1
    assert "feasible" in capsys.readouterr().err


def test_cli_invalid_document_fails(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", '{"vertices": [[0, 0]]}')
    assert main(["analyze", path]) == 2
    assert "folding" in capsys.readouterr().err


def test_cli_identity_failure_exits_nonzero(tmp_path, capsys, monkeypatch):
    import ribbonforge.linking as linking

    monkeypatch.setattr(linking.RibbonReport, "identity_holds", lambda self: False)
    path = _write(tmp_path, "sq.json", SQUARE_DOC)
    assert main(["analyze", path, "--check-identity"]) == 1


def test_cli_enumerate(capsys):
    assert main(["enumerate", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert "{-2, -1, 0, 1, 2}" in out
    rows = [line.split() for line in out.splitlines()[2:]]
    assert {(int(r[0]), int(r[1]), int(r[2])) for r in rows} == {
        (-2, 0, 4), (-1, 1, 3), (0, 2, 2), (1, 3, 1), (2, 4, 0)
    }


def test_cli_optimize(capsys):
    assert main(["optimize", "--n", "5"]) == 0
    out = capsys.readouterr().out
    assert re.search(r"f_min\s+6\.8819096", out)


def test_cli_svg(tmp_path):
    src = tmp_path / "p.json"
    assert main(["construct", "pentagram", "--out", str(src)]) == 0
    dst = tmp_path / "p.svg"
    assert main(["svg", str(src), str(dst)]) == 0
    text = dst.read_text()
    assert text.count('class="fold-line"') == 5 and text.count('class="boundary"') == 1


def test_cli_connected_sum_document(tmp_path, capsys):
    out = tmp_path / "sum.json"
    assert main(["construct", "pentagram", "--sum-with", "1", "--out", str(out)]) == 0
    doc = parse_document(out.read_text())
    assert len(doc.vertices) == 9
    assert doc.metadata["claimed_lk"] == -6
    assert doc.width is None and "nominal_width" in doc.metadata


def test_cli_tolerance_flag_accepted(tmp_path):
    path = _write(tmp_path, "sq.json", SQUARE_DOC)
    assert main(["analyze", path, "--tolerance", "1e-7"]) == 0


def test_cli_warns_on_close_approach(tmp_path, capsys):
    doc = make_document(KnotDiagram(((0, 0), (4, 0), (4, 2), (2, 0.1), (0, 2))), [Fold.UNDER] * 5, 0.3)
    path = _write(tmp_path, "dip.json", serialize_document(doc))
    assert main(["analyze", path]) == 0
    assert "edges 0 and 2 pass within 0.1" in capsys.readouterr().err
