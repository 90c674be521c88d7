"""Linking number, twist and writhe of folded ribbon knots.

The combinatorial rule: each genuine fold contributes a sign determined by
its turn direction and layer (left underfold and right overfold are +1),
each crossing contributes its usual sign. For an annulus the twist is half
the fold-sign sum and ``Lk = Tw + Wr``; for a Moebius band the single
boundary meets every fold and crossing twice, so ``Tw`` is the full fold-sign
sum and ``Lk = Tw + 2 Wr``.

Two independent checks are provided. :func:`linking_oracle_planar` walks one
boundary polyline of the actual ribbon and counts signed passes over and
under the diagram. :func:`space_writhe` evaluates the writhe of a 3D lift by
the exact segment-pair solid-angle sum.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import kernels
from .diagram import (
    segment_distance,
    EPS_GEOM,
    Crossing,
    Fold,
    KnotDiagram,
    TopologicalType,
    Turn,
    edge_lengths,
    edge_vectors,
    edges_adjacent,
    fold_angle,
    fold_angles,
    is_fold,
    regular_polygon,
    topological_type,
    total_length,
)
from .ribbon import build_ribbon, max_feasible_width


class UnclassifiedIntersectionWarning(UserWarning):
    """A boundary meets the diagram where no fold or crossing fixes the layers."""


@dataclass(frozen=True)
class FoldClassification:
    vertex: int
    turn: Turn
    layer: Fold
    sign: int


@dataclass(frozen=True)
class RibbonReport:
    rib: float
    lk: int
    tw: float
    wr: int
    ttype: TopologicalType
    fold_signs: tuple[FoldClassification, ...]
    width: float

    def identity_holds(self) -> bool:
        factor = 1 if self.ttype is TopologicalType.ANNULUS else 2
        return self.lk == self.tw + factor * self.wr


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def crossing_sign(c: Crossing, d: KnotDiagram, tol: float = EPS_GEOM) -> int:
    """Right-handed crossing sign: ``sign(over x under)``.

    An over strand heading +x above an under strand heading +y is +1.
    """
    ev = edge_vectors(d)
    a, b = ev[c.edge_over], ev[c.edge_under]
    z = _cross2(a, b) / (math.hypot(*a) * math.hypot(*b))
    if abs(z) <= tol:
        raise ValueError(f"edges {c.edge_over} and {c.edge_under} meet tangentially")
    return 1 if z > 0 else -1


def classify_fold(
    d: KnotDiagram, f: Sequence[Fold], i: int, tol: float = EPS_GEOM
) -> FoldClassification | None:
    """Turn, layer and sign of the fold at ``v_i``; None for angle 0 or pi."""
    a = fold_angle(d, i, tol)
    if not is_fold(a, tol) or abs(a) <= tol:
        return None
    turn = Turn.LEFT if a > 0 else Turn.RIGHT
    layer = f[i]
    sign = 1 if (turn is Turn.LEFT) == (layer is Fold.UNDER) else -1
    return FoldClassification(i, turn, layer, sign)


def fold_sign(d: KnotDiagram, f: Sequence[Fold], i: int, tol: float = EPS_GEOM) -> int | None:
    c = classify_fold(d, f, i, tol)
    return None if c is None else c.sign


def fold_classifications(
    d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM
) -> tuple[FoldClassification, ...]:
    _check_folding(d, f)
    out = (classify_fold(d, f, i, tol) for i in range(d.n))
    return tuple(c for c in out if c is not None)


def _check_folding(d: KnotDiagram, f: Sequence[Fold]) -> None:
    if len(f) != d.n:
        raise ValueError(f"folding has {len(f)} entries for {d.n} vertices")


def writhe(d: KnotDiagram, tol: float = EPS_GEOM) -> int:
    return sum(crossing_sign(c, d, tol) for c in d.crossings)


def _twist_units(d: KnotDiagram, f: Sequence[Fold], tol: float) -> tuple[int, TopologicalType]:
    """Twist in units of the per-fold weight, together with the type."""
    ttype = topological_type(d, tol)
    return sum(c.sign for c in fold_classifications(d, f, tol)), ttype


def twist(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> float:
    units, ttype = _twist_units(d, f, tol)
    return units / 2.0 if ttype is TopologicalType.ANNULUS else float(units)


def ribbon_linking_number(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> int:
    units, ttype = _twist_units(d, f, tol)
    wr = writhe(d, tol)
    if ttype is TopologicalType.MOBIUS:
        return units + 2 * wr
    if units % 2:
        raise ValueError(
            "odd fold-sign sum on an annulus: fold and crossing data are inconsistent"
        )
    return units // 2 + wr


def analyze(
    d: KnotDiagram, f: Sequence[Fold], w: float | None = None, tol: float = EPS_GEOM
) -> RibbonReport:
    """Full report; the width defaults to the largest feasible width."""
    _check_folding(d, f)
    if w is None:
        w = max_feasible_width(d, f, tol)
    return RibbonReport(
        rib=total_length(d) / w,
        lk=ribbon_linking_number(d, f, tol),
        tw=twist(d, f, tol),
        wr=writhe(d, tol),
        ttype=topological_type(d, tol),
        fold_signs=fold_classifications(d, f, tol),
        width=float(w),
    )


def rib_lower_bound(lk: int, ttype: TopologicalType) -> float:
    """Ribbonlength lower bound for writhe-zero ribbons with linking number lk."""
    return float(2 * abs(lk) if ttype is TopologicalType.ANNULUS else abs(lk))


# Planar oracle -----------------------------------------------------------


def oracle_width(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> float:
    """A width small enough that every boundary/diagram meeting is explained.

    Quarter of the smallest of: the feasible width, the shortest edge, the
    clearance between non-adjacent non-crossing edges, the room each fold
    needs on its two edges, and the room each crossing needs on its two edges.
    The shortest edge keeps the result finite when nothing else binds.
    """
    n = d.n
    p = d.points
    lengths = edge_lengths(d)
    limits = [max_feasible_width(d, f, tol), float(lengths.min())]
    crossing_pairs = {frozenset((c.edge_over, c.edge_under)) for c in d.crossings}
    for i in range(n):
        for j in range(i + 1, n):
            if edges_adjacent(n, i, j) or frozenset((i, j)) in crossing_pairs:
                continue
            limits.append(segment_distance(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]))
    for i, a in enumerate(fold_angles(d, tol)):
        if is_fold(a, tol) and abs(a) > tol:
            limits.append(2.0 * math.sin(abs(a)) * min(lengths[i - 1], lengths[i]))
    ev = edge_vectors(d)
    for c in d.crossings:
        a, b = ev[c.edge_over], ev[c.edge_under]
        s = abs(_cross2(a, b)) / (math.hypot(*a) * math.hypot(*b))
        x = np.asarray(c.point)
        room = min(
            float(np.hypot(*(x - p[e]))) for e in (c.edge_over, c.edge_under)
        )
        room = min(
            room,
            *(float(np.hypot(*(x - p[(e + 1) % n]))) for e in (c.edge_over, c.edge_under)),
        )
        limits.append(2.0 * s * room)
    w = 0.25 * min(limits)
    if not w > 0:
        raise ValueError("diagram has no width at which the planar oracle applies")
    return w


@dataclass(frozen=True)
class OracleCount:
    signed_sum: int
    segments: int
    unclassified: tuple[tuple[int, int], ...]

    @property
    def lk(self) -> int:
        if self.signed_sum % 2:
            raise ValueError(f"odd boundary crossing sum {self.signed_sum}")
        return self.signed_sum // 2


def planar_linking_count(
    d: KnotDiagram,
    f: Sequence[Fold],
    w: float,
    component: int = 0,
    tol: float = EPS_GEOM,
) -> OracleCount:
    """Signed count of boundary passes over/under the diagram.

    ``component`` 0 starts on the left of edge 0, 1 on the right; for a
    Moebius band both select the single boundary.
    """
    ribbon = build_ribbon(d, f, w, tol)
    segs = ribbon.segments[min(component, len(ribbon.segments) - 1)]
    n = d.n
    p = d.points
    ev = edge_vectors(d)
    crossing_over = {}
    for c in d.crossings:
        crossing_over[(c.edge_over, c.edge_under)] = True
        crossing_over[(c.edge_under, c.edge_over)] = False
    angles = fold_angles(d, tol)
    a0 = np.array([s.start for s in segs])
    a1 = np.array([s.end for s in segs])
    ii, kk, s_par, t_par = kernels.segment_intersections(a0, a1, p, np.roll(p, -1, axis=0), tol)
    total = 0
    unclassified = []
    for si, k, s_val, t_val in zip(ii, kk, s_par, t_par):
        j = segs[si].edge
        if k == j or not (tol < s_val < 1 - tol and tol < t_val < 1 - tol):
            continue
        boundary_over = None
        if k == (j + 1) % n and is_fold(angles[k], tol):
            boundary_over = f[k] is Fold.UNDER
        elif k == (j - 1) % n and is_fold(angles[j], tol):
            boundary_over = f[j] is Fold.OVER
        elif (j, k) in crossing_over:
            boundary_over = crossing_over[(j, k)]
        if boundary_over is None:
            unclassified.append((int(j), int(k)))
            continue
        over, under = (ev[j], ev[k]) if boundary_over else (ev[k], ev[j])
        total += 1 if _cross2(over, under) > 0 else -1
    if unclassified:
        warnings.warn(
            f"{len(unclassified)} boundary/diagram intersections without layer data were excluded",
            UnclassifiedIntersectionWarning,
            stacklevel=2,
        )
    return OracleCount(total, len(segs), tuple(unclassified))


def linking_oracle_planar(
    d: KnotDiagram,
    f: Sequence[Fold],
    w: float | None = None,
    component: int = 0,
    tol: float = EPS_GEOM,
) -> int:
    """Linking number counted directly on the ribbon boundary."""
    if w is None:
        w = oracle_width(d, f, tol)
    return planar_linking_count(d, f, w, component, tol).lk


# Space writhe ------------------------------------------------------------


def _min_segment_distance_3d(points: np.ndarray) -> float:
    n = len(points)
    p0 = points
    p1 = np.roll(points, -1, axis=0)
    ii, jj = np.triu_indices(n, k=2)
    keep = ~((ii == 0) & (jj == n - 1))
    ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return math.inf
    a, u = p0[ii], p1[ii] - p0[ii]
    b, v = p0[jj], p1[jj] - p0[jj]
    w0 = a - b
    A = np.einsum("ij,ij->i", u, u)
    B = np.einsum("ij,ij->i", u, v)
    C = np.einsum("ij,ij->i", v, v)
    D = np.einsum("ij,ij->i", u, w0)
    E = np.einsum("ij,ij->i", v, w0)
    den = A * C - B * B
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(den > 1e-300, (B * E - C * D) / den, 0.0)
    s = np.clip(s, 0.0, 1.0)
    t = np.clip((B * s + E) / C, 0.0, 1.0)
    s = np.clip((B * t - D) / A, 0.0, 1.0)
    gap = w0 + s[:, None] * u - t[:, None] * v
    return float(np.sqrt(np.einsum("ij,ij->i", gap, gap)).min())


def space_writhe(polyline, check: bool = True, tol: float = 1e-12) -> float:
    """Writhe of a closed 3D polyline (vertices only; the closing edge is implied)."""
    pts = np.asarray(polyline, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("polyline must have shape (N, 3)")
    if check and _min_segment_distance_3d(pts) <= tol:
        raise ValueError("polyline intersects itself")
    return kernels.polyline_writhe(pts)


def lift_diagram(d: KnotDiagram, heights: Sequence[float]) -> np.ndarray:
    if len(heights) != d.n:
        raise ValueError(f"need {d.n} heights, got {len(heights)}")
    return np.column_stack([d.points, np.asarray(heights, dtype=np.float64)])


def lift_with_crossings(d: KnotDiagram, height: float) -> np.ndarray:
    """3D polyline with vertices at height 0 and crossings pulled apart.

    Every crossing point is inserted on both strands, at ``+height`` on the
    over strand and ``-height`` on the under strand.
    """
    p = d.points
    n = d.n
    extra: dict[int, list[tuple[float, float]]] = {i: [] for i in range(n)}
    for c in d.crossings:
        x = np.asarray(c.point)
        for e, z in ((c.edge_over, height), (c.edge_under, -height)):
            seg = p[(e + 1) % n] - p[e]
            s = float(np.dot(x - p[e], seg) / np.dot(seg, seg))
            extra[e].append((s, z))
    out = []
    for i in range(n):
        out.append((p[i][0], p[i][1], 0.0))
        seg = p[(i + 1) % n] - p[i]
        for s, z in sorted(extra[i]):
            q = p[i] + s * seg
            out.append((q[0], q[1], z))
    return np.array(out)


# Convex enumeration ------------------------------------------------------


def enumerate_convex_linking(n: int) -> set[int]:
    """Linking numbers available on a convex n-gon (no crossings)."""
    if n < 3:
        raise ValueError("convex polygons need n >= 3")
    if n % 2:
        return {k for k in range(-n, n + 1) if k % 2}
    return set(range(-(n // 2), n // 2 + 1))


def folding_for_linking(n: int, k: int) -> tuple[int, int]:
    """Numbers of underfolds and overfolds giving linking number k.

    Counterclockwise orientation: odd n has ``Lk = #u - #o`` and even n has
    ``Lk = (#u - #o) / 2``.
    """
    if k not in enumerate_convex_linking(n):
        raise ValueError(f"linking number {k} is not achievable on a convex {n}-gon")
    under = (n + k) // 2 if n % 2 else n // 2 + k
    return under, n - under


def folding_with_counts(n: int, under: int) -> tuple[Fold, ...]:
    """Underfolds first, then overfolds."""
    return tuple([Fold.UNDER] * under + [Fold.OVER] * (n - under))


def linking_histogram(d: KnotDiagram, tol: float = EPS_GEOM) -> dict[int, dict[int, int]]:
    """Brute force over all 2^n foldings: ``{lk: {under_count: assignments}}``."""
    hist: dict[int, dict[int, int]] = {}
    for letters in product((Fold.UNDER, Fold.OVER), repeat=d.n):
        lk = ribbon_linking_number(d, letters, tol)
        u = sum(1 for x in letters if x is Fold.UNDER)
        row = hist.setdefault(lk, {})
        row[u] = row.get(u, 0) + 1
    return hist


def convex_linking_table(n: int) -> dict[int, dict[int, int]]:
    return linking_histogram(regular_polygon(n))
