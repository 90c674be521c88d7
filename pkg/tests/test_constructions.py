import math
from collections import Counter

import pytest

from oracle_values import FROZEN
from ribbonforge.constructions import (
    annulus_lk_n,
    connected_sum,
    delta_L,
    four_stick_lk1,
    pentagram_trefoil,
    regular_ngon,
    two_stick,
)
from ribbonforge.diagram import TopologicalType, crossings_from_levels, folding_string, topological_type, validate
from ribbonforge.linking import (
    analyze,
    crossing_sign,
    lift_diagram,
    linking_oracle_planar,
    rib_lower_bound,
    ribbon_linking_number,
    space_writhe,
)
from ribbonforge.ribbon import max_feasible_width


def _all_constructions():
    out = [
        two_stick(1.0, 1.0),
        two_stick(0.01, 1.0),
        regular_ngon(3, 1),
        regular_ngon(3, -3),
        regular_ngon(4, 1),
        regular_ngon(6, -3),
        regular_ngon(7, 5),
        four_stick_lk1(1),
        four_stick_lk1(-1),
        annulus_lk_n(4, 1),
        annulus_lk_n(5, -1),
        pentagram_trefoil(),
    ]
    out += [connected_sum(annulus_lk_n(2, 1), 2, k) for k in (1, -2)]
    out += [connected_sum(regular_ngon(4, 2), 0, k) for k in (1, -1)]
    out += [connected_sum(pentagram_trefoil(), 0, k) for k in (1, -1)]
    return out


CONSTRUCTIONS = _all_constructions()


def _cid(res):
    return f"{res.kind}-{folding_string(res.folding)}-{res.diagram.n}"


@pytest.mark.parametrize("res", CONSTRUCTIONS, ids=_cid)
def test_construction_is_valid(res):
    assert validate(res.diagram) == []
    if res.opened is not None:
        assert validate(res.opened, strict=True) == []


@pytest.mark.parametrize("res", CONSTRUCTIONS, ids=_cid)
def test_recomputed_report_matches_claimed(res):
    rep = analyze(res.diagram, res.folding, res.width)
    c = res.claimed
    assert rep.lk == c.lk
    assert rep.wr == c.wr
    assert rep.tw == c.tw
    assert rep.ttype is c.ttype
    assert rep.fold_signs == c.fold_signs
    assert rep.rib == pytest.approx(c.rib, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize(
    "res", [r for r in CONSTRUCTIONS if r.kind != "connected-sum"], ids=_cid
)
def test_claimed_width_is_feasible(res):
    assert max_feasible_width(res.diagram, res.folding) >= res.width * (1 - 1e-9)


@pytest.mark.parametrize("eps, rib", [(1.0, 2.0), (0.01, 0.02)])
def test_two_stick(eps, rib):
    res = two_stick(eps, 1.0)
    rep = analyze(res.diagram, res.folding, res.width)
    assert rep.rib == pytest.approx(rib)
    assert rep.lk == 0 and rep.ttype is TopologicalType.ANNULUS


@pytest.mark.parametrize(
    "n, k, rib",
    [
        (4, 1, 4.0),
        (4, -1, 4.0),
        (3, 1, FROZEN["sqrt3"]),
        (3, 3, FROZEN["three_sqrt3"]),
        (6, 3, FROZEN["ncot_6"]),
        (8, -4, FROZEN["ncot_8"]),
    ],
)
def test_regular_ngon_ribbonlength(n, k, rib):
    res = regular_ngon(n, k)
    rep = analyze(res.diagram, res.folding)
    assert rep.rib == pytest.approx(rib, rel=1e-9)
    assert rep.lk == k


@pytest.mark.parametrize("sign", [1, -1])
def test_four_stick(sign):
    res = four_stick_lk1(sign)
    assert res.diagram.n == 4
    rep = analyze(res.diagram, res.folding, res.width)
    assert (rep.lk, rep.rib, rep.ttype) == (sign, 2.0, TopologicalType.ANNULUS)
    assert res.labels == ("A", "v1", "C", "v2")


def test_four_stick_fold_letters():
    # v1 is a right overfold and v2 a left underfold, both positive
    res = four_stick_lk1(1)
    signs = {c.vertex: (c.turn.value, c.layer.value, c.sign) for c in res.claimed.fold_signs}
    assert signs == {1: ("R", "o", 1), 3: ("L", "u", 1)}


def test_annulus_n1_is_four_stick():
    a, b = annulus_lk_n(1, 1), four_stick_lk1(1)
    assert a.diagram == b.diagram and a.folding == b.folding


@pytest.mark.parametrize("n, sticks", [(3, 8), (4, 10)])
def test_annulus_examples(n, sticks):
    res = annulus_lk_n(n, 1)
    rep = analyze(res.diagram, res.folding)
    assert res.diagram.n == sticks
    assert (rep.lk, rep.rib) == (n, 2 * n)


def test_even_case_cut_points():
    res = annulus_lk_n(4, 1)
    assert res.labels[0] == "C" and res.labels[5] == "D" and res.labels[-1] == "v1"


@pytest.mark.parametrize("n", range(1, 21))
@pytest.mark.parametrize("sign", [1, -1])
def test_annulus_family(n, sign):
    res = annulus_lk_n(n, sign)
    d, f = res.diagram, res.folding
    assert ribbon_linking_number(d, f) == sign * n
    assert linking_oracle_planar(res.opened, f) == sign * n
    assert linking_oracle_planar(res.opened, f, component=1) == sign * n
    assert abs(space_writhe(lift_diagram(d, res.heights))) < 1e-6
    rep = analyze(d, f)
    assert rep.rib == 2 * n
    assert rib_lower_bound(rep.lk, rep.ttype) == rep.rib


def test_pentagram():
    res = pentagram_trefoil()
    rep = analyze(res.diagram, res.folding)
    assert (rep.lk, rep.wr) == (-7, -3)
    assert rep.rib == pytest.approx(FROZEN["pentagram_rib"], abs=1e-6)
    assert res.width == pytest.approx(FROZEN["pentagram_width"], rel=1e-12)


@pytest.mark.parametrize(
    "alpha, expected",
    [
        (math.pi / 2, FROZEN["delta_L_pi_2"]),
        (math.pi / 3, FROZEN["delta_L_pi_3"]),
        (2 * math.pi / 3, FROZEN["delta_L_2pi_3"]),
    ],
)
def test_delta_L(alpha, expected):
    assert delta_L(alpha) == pytest.approx(expected, rel=1e-12)


SUM_CASES = [
    (annulus_lk_n(2, 1), 2),
    (annulus_lk_n(3, -1), 2),
    (regular_ngon(4, 2), 1),
    (regular_ngon(3, 1), 0),
    (pentagram_trefoil(), 0),
]


def _sid(case):
    base, k = case
    return f"{base.kind}-{folding_string(base.folding)}@{k}"


@pytest.mark.parametrize("case", SUM_CASES, ids=_sid)
@pytest.mark.parametrize("n", [1, -1, 2])
def test_connected_sum_structure(case, n):
    base, k = case
    res = connected_sum(base, k, n)
    d = res.diagram
    assert d.n == base.diagram.n + 2 * abs(n) + 2
    assert topological_type(d) is topological_type(base.diagram)
    before = Counter(crossing_sign(c, base.diagram) for c in base.diagram.crossings)
    after = Counter(crossing_sign(c, d) for c in d.crossings)
    assert before == after
    assert res.claimed.rib <= res.rib_bound


@pytest.mark.parametrize("case", SUM_CASES, ids=_sid)
@pytest.mark.parametrize("n", [1, -1, 2])
def test_connected_sum_shifts_linking_by_n(case, n):
    base, k = case
    res = connected_sum(base, k, n)
    assert ribbon_linking_number(res.diagram, res.folding) == base.claimed.lk + n


@pytest.mark.parametrize("case", SUM_CASES, ids=_sid)
@pytest.mark.parametrize("n", [1, -1, 2])
def test_connected_sum_oracle_agrees(case, n):
    base, k = case
    res = connected_sum(base, k, n)
    lk = ribbon_linking_number(res.diagram, res.folding)
    assert linking_oracle_planar(res.diagram, res.folding) == lk
    factor = 1 if res.claimed.ttype is TopologicalType.ANNULUS else 2
    assert lk == base.claimed.lk + factor * n


def test_connected_sum_rejects_interior_vertex():
    base = annulus_lk_n(2, 1)
    with pytest.raises(ValueError):
        connected_sum(base, 0, 0)


def test_crossings_from_levels_rebuilds_pentagram():
    res = pentagram_trefoil()
    over = {(c.edge_over, c.edge_under) for c in res.diagram.crossings}
    rebuilt = crossings_from_levels(res.diagram, lambda i, j: (i, j) in over)
    assert {(c.edge_over, c.edge_under) for c in rebuilt.crossings} == over
