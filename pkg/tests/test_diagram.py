import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import convex_polygons
from ribbonforge.constructions import pentagram_trefoil
from ribbonforge.diagram import (
    Crossing,
    Fold,
    KnotDiagram,
    TopologicalType,
    close_approaches,
    fold_angle,
    fold_angles,
    interior_angles,
    is_convex,
    parse_folding,
    folding_string,
    polygon_from_angles,
    regular_polygon,
    reversed_diagram,
    rotated_diagram,
    topological_type,
    total_length,
    transversal_intersections,
    turning_number,
    validate,
)

SQUARE = KnotDiagram(((0, 0), (1, 0), (1, 1), (0, 1)))
TWO_STICK = KnotDiagram(((0, 0), (1, 0)))


def test_fold_angle_equilateral_is_plus_pi_over_3():
    tri = regular_polygon(3)
    for i in range(3):
        assert fold_angle(tri, i) == pytest.approx(math.pi / 3, abs=1e-12)


def test_fold_angle_clockwise_square():
    cw = KnotDiagram(SQUARE.vertices[::-1])
    assert all(a == pytest.approx(-math.pi / 2, abs=1e-12) for a in fold_angles(cw))


def test_two_stick_fold_angles_are_zero():
    assert fold_angles(TWO_STICK) == [0.0, 0.0]


def test_straight_vertex_has_angle_pi():
    d = KnotDiagram(((0, 0), (1, 0), (2, 0), (1, 1)))
    assert abs(fold_angle(d, 1)) == pytest.approx(math.pi)


@pytest.mark.parametrize(
    "d, expected",
    [
        (SQUARE, 4.0),
        (regular_polygon(3, perimeter=1.0), 1.0),
        (regular_polygon(5, perimeter=5 * 0.7), 5 * 0.7),
    ],
)
def test_total_length(d, expected):
    assert total_length(d) == pytest.approx(expected, rel=1e-12)


def test_validate_square_is_clean():
    assert validate(SQUARE) == []


def test_validate_flags_duplicated_vertex():
    d = KnotDiagram(((0, 0), (1, 0), (1, 0), (1, 1), (0, 1)))
    (v,) = validate(d)
    assert v.invariant == "zero-length-edge" and v.indices == (1,)


def test_validate_flags_missing_pentagram_crossing():
    d = pentagram_trefoil().diagram
    dropped = d.crossings[2]
    partial = KnotDiagram(d.vertices, d.crossings[:2] + d.crossings[3:])
    (v,) = validate(partial)
    assert v.invariant == "missing-crossing"
    assert v.indices == tuple(sorted((dropped.edge_over, dropped.edge_under)))


def test_validate_rejects_adjacent_and_fake_crossings():
    bad = SQUARE.with_crossings([Crossing(0, 1)])
    assert validate(bad)[0].invariant == "crossing-non-adjacent"
    fake = SQUARE.with_crossings([Crossing(0, 2)])
    assert validate(fake)[0].invariant == "crossing-not-transversal"


def test_two_stick_overlap_only_reported_in_strict_mode():
    assert validate(TWO_STICK) == []
    assert any(v.invariant == "collinear-overlap" for v in validate(TWO_STICK, strict=True))


def test_hexagon_is_convex_with_equal_angles():
    hexagon = regular_polygon(6)
    assert is_convex(hexagon)
    assert interior_angles(hexagon) == pytest.approx([2 * math.pi / 3] * 6)


def test_pentagram_is_not_convex():
    assert not is_convex(pentagram_trefoil().diagram)
    assert not is_convex(KnotDiagram(pentagram_trefoil().diagram.vertices))


def test_equiangular_non_equilateral_octagon_is_convex():
    lengths = [1, 2, 1, 2, 1, 2, 1, 2]
    d = polygon_from_angles([3 * math.pi / 4] * 8, lengths)
    assert is_convex(d)
    assert interior_angles(d) == pytest.approx([3 * math.pi / 4] * 8)


def test_topological_types():
    assert topological_type(TWO_STICK) is TopologicalType.ANNULUS
    assert topological_type(regular_polygon(3)) is TopologicalType.MOBIUS
    flat = KnotDiagram(((0, 0), (1, 0), (2, 0)))  # one vertex straight, two zero folds
    assert topological_type(flat) is TopologicalType.ANNULUS


def test_pentagram_crossings_found_by_brute_force():
    d = pentagram_trefoil().diagram
    pairs = {(i, j) for i, j, _ in transversal_intersections(d)}
    assert pairs == {(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)}


def test_parse_folding_round_trip():
    f = parse_folding("uuo")
    assert f == (Fold.UNDER, Fold.UNDER, Fold.OVER)
    assert folding_string(f) == "uuo"
    with pytest.raises(ValueError):
        parse_folding("uxo")


@given(convex_polygons())
def test_turning_sums_to_two_pi(d):
    turns = [math.copysign(math.pi - abs(a), a) for a in fold_angles(d)]
    assert abs(sum(turns)) == pytest.approx(2 * math.pi, abs=1e-9)
    assert turning_number(d) == pytest.approx(1.0)


@given(convex_polygons())
def test_interior_angles_sum(d):
    assert sum(interior_angles(d)) == pytest.approx((d.n - 2) * math.pi, abs=1e-9)


@given(convex_polygons(), st.integers(0, 20), st.booleans())
def test_topological_type_invariant_under_relabeling(d, shift, reverse):
    e, _ = rotated_diagram(d, shift % d.n)
    if reverse:
        e, _ = reversed_diagram(e)
    assert topological_type(e) is topological_type(d)


def test_close_approaches_reported_not_rejected():
    # vertex 3 dips to 0.1 above edge 0
    d = KnotDiagram(((0, 0), (4, 0), (4, 2), (2, 0.1), (0, 2)))
    assert validate(d) == []
    hits = close_approaches(d, 0.3)
    assert [(i, j) for i, j, _ in hits] == [(0, 2), (0, 3)]
    assert all(dist == pytest.approx(0.1) for _, _, dist in hits)
    assert close_approaches(d, 0.05) == []


def test_crossing_edges_are_not_close_approaches():
    d = pentagram_trefoil().diagram
    assert close_approaches(d, 10.0) == []
