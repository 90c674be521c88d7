"""Folded ribbons of width w around a diagram.

Fold line at a vertex
    The fold line passes through ``v_i`` perpendicular to the bisector of the
    interior angle, so its direction is ``d_in + d_out`` (unit edge
    directions). Reflecting across it maps the incoming edge onto the outgoing
    one. Its endpoints sit on the two offset lines at distance ``w/2``; with
    interior angle ``a`` the half-length is ``(w/2) / cos(a/2)``, which equals
    ``(w/2) / sin(turn/2)`` in terms of the turning angle ``turn = pi - a``.
    A right-angle fold of a unit-width ribbon gives ``sqrt(2)/2``, and a
    zero-angle fold (the edge doubles back) gives ``w/2`` on a line
    perpendicular to the edge.

Boundary
    Every edge contributes a left and a right offset segment cut off by the
    fold lines at its two ends. Crossing a genuine fold swaps sides, so the
    boundary closes after one lap (two components, an annulus) or two laps
    (one component, a Moebius band).

Width limits
    ``fold_line_width_limit`` is the largest width at which no two fold-line
    segments meet. ``layer_cycle_width_limit`` is the smallest width at which
    strips whose stacking order forms a cycle share a common point, which
    makes the folding information contradictory. The feasible width is the
    smaller of the two.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from . import kernels
from .diagram import (
    EPS_GEOM,
    Fold,
    KnotDiagram,
    fold_angles,
    interior_angles,
    is_convex,
    is_fold,
    total_length,
)


class InfeasibleWidthError(ValueError):
    """Raised when a width exceeds the feasible width of a diagram."""


class HeuristicWidthWarning(UserWarning):
    """The closed-form width is used outside the regime where it is proven."""


def fold_ribbonlength(theta: float) -> float:
    """Ribbonlength of a single fold with fold angle ``theta``: ``1/sin(theta)``."""
    if not 0.0 < theta < math.pi:
        raise ValueError(f"fold angle must lie in (0, pi), got {theta}")
    return 1.0 / math.sin(theta)


def extended_fold_ribbonlength(theta: float) -> float:
    """Ribbonlength of an extended fold.

    ``cot(theta/2)`` for acute folds and ``cot(pi/2 - theta/2)`` for obtuse
    ones; the branches meet at ``theta = pi/2`` with value 1.
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"fold angle must lie in (0, pi), got {theta}")
    half = theta / 2.0 if theta <= math.pi / 2 else math.pi / 2 - theta / 2.0
    return 1.0 / math.tan(half)


def ribbonlength(d: KnotDiagram, w: float) -> float:
    if not w > 0:
        raise ValueError(f"width must be positive, got {w}")
    return total_length(d) / w


@dataclass(frozen=True)
class GapVector:
    gaps: tuple[float, ...]

    @property
    def min(self) -> float:
        return min(self.gaps)


def exterior_gaps(d: KnotDiagram, w: float, tol: float = EPS_GEOM) -> GapVector:
    """Free boundary length on each edge between consecutive fold lines."""
    alphas = interior_angles(d, tol)
    lengths = np.linalg.norm(np.roll(d.points, -1, axis=0) - d.points, axis=1)
    n = d.n
    gaps = tuple(
        float(lengths[i] - (w / 2.0) * (math.tan(alphas[i] / 2) + math.tan(alphas[(i + 1) % n] / 2)))
        for i in range(n)
    )
    return GapVector(gaps)


def max_width(d: KnotDiagram, tol: float = EPS_GEOM) -> float:
    """Largest width with every exterior gap nonnegative (convex diagrams).

    The closed form is proven for triangles and for polygons whose interior
    angles all lie in ``[pi/2, pi)``. Outside that regime the value is still
    returned, with a :class:`HeuristicWidthWarning`.
    """
    alphas = interior_angles(d, tol)
    if d.n > 3 and min(alphas) < math.pi / 2 - tol:
        warnings.warn(
            "acute interior angle: the gap-formula width is heuristic for n > 3",
            HeuristicWidthWarning,
            stacklevel=2,
        )
    return float(kernels.convex_max_width_batch(d.points[None, :, :])[0])


def max_width_batch(polygons: np.ndarray) -> np.ndarray:
    """Gap-formula widths for a stack of convex polygons, shape (m, n, 2)."""
    return kernels.convex_max_width_batch(np.asarray(polygons, dtype=np.float64))


@dataclass(frozen=True)
class FoldLine:
    vertex: int
    endpoints: tuple[tuple[float, float], tuple[float, float]]
    half_length: float
    direction: tuple[float, float]
    is_fold: bool


@dataclass(frozen=True)
class BoundarySegment:
    edge: int
    side: int  # +1 left of the oriented edge, -1 right
    start: tuple[float, float]
    end: tuple[float, float]


@dataclass(frozen=True)
class RibbonGeometry:
    width: float
    fold_lines: tuple[FoldLine, ...]
    boundary: tuple[np.ndarray, ...]
    segments: tuple[tuple[BoundarySegment, ...], ...]
    layer_order: tuple[tuple[int, int] | None, ...]


def _left_normals(d: KnotDiagram) -> np.ndarray:
    v = np.roll(d.points, -1, axis=0) - d.points
    v = v / np.linalg.norm(v, axis=1)[:, None]
    return np.stack([-v[:, 1], v[:, 0]], axis=1)


def fold_frame(d: KnotDiagram, tol: float = EPS_GEOM):
    """Per-vertex fold-line direction and the half-length per unit width.

    Returns ``(directions, scale, folds)`` where the fold-line segment at
    ``v_i`` for width ``w`` is ``v_i + t * directions[i]`` with
    ``|t| <= w * scale[i]``.
    """
    angles = fold_angles(d, tol)
    normals = _left_normals(d)
    unit = np.stack([-normals[:, 1], normals[:, 0]], axis=1)  # unit edge directions
    n = d.n
    dirs = np.empty((n, 2))
    scale = np.empty(n)
    folds = np.empty(n, dtype=bool)
    for i in range(n):
        n_in = normals[i - 1]
        folds[i] = is_fold(angles[i], tol)
        if not folds[i] or abs(angles[i]) <= tol:
            u = n_in
        else:
            u = unit[i - 1] + unit[i]
            u = u / np.linalg.norm(u)
        dirs[i] = u
        scale[i] = 0.5 / abs(float(np.dot(n_in, u)))
    return dirs, scale, folds


def fold_lines(d: KnotDiagram, w: float, tol: float = EPS_GEOM) -> list[FoldLine]:
    dirs, scale, folds = fold_frame(d, tol)
    out = []
    for i in range(d.n):
        h = w * scale[i]
        v = d.points[i]
        a, b = v - h * dirs[i], v + h * dirs[i]
        out.append(
            FoldLine(
                vertex=i,
                endpoints=((float(a[0]), float(a[1])), (float(b[0]), float(b[1]))),
                half_length=float(h),
                direction=(float(dirs[i][0]), float(dirs[i][1])),
                is_fold=bool(folds[i]),
            )
        )
    return out


def fold_line_width_limit(d: KnotDiagram, tol: float = EPS_GEOM) -> float:
    """Largest width at which no two fold-line segments intersect.

    Fold lines through the same point (stacked vertices) are skipped, as are
    parallel lines that are not collinear.
    """
    dirs, scale, folds = fold_frame(d, tol)
    idx = [i for i in range(d.n) if folds[i]]
    p = d.points
    best = math.inf
    for a_pos, i in enumerate(idx):
        for j in idx[a_pos + 1:]:
            sep = p[j] - p[i]
            dist = math.hypot(*sep)
            if dist <= tol:
                continue
            ui, uj = dirs[i], dirs[j]
            den = ui[0] * uj[1] - ui[1] * uj[0]
            if abs(den) <= tol:
                if abs(ui[0] * sep[1] - ui[1] * sep[0]) <= tol:
                    best = min(best, dist / (scale[i] + scale[j]))
                continue
            ti = (sep[0] * uj[1] - sep[1] * uj[0]) / den
            tj = (sep[0] * ui[1] - sep[1] * ui[0]) / den
            best = min(best, max(abs(ti) / scale[i], abs(tj) / scale[j]))
    return float(best)


def stacking_graph(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> nx.DiGraph:
    """Directed graph on edges with ``a -> b`` whenever strip a lies over strip b."""
    angles = fold_angles(d, tol)
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    n = d.n
    for i in range(n):
        if not is_fold(angles[i], tol):
            continue
        prev = (i - 1) % n
        if f[i] is Fold.UNDER:
            g.add_edge(prev, i)
        else:
            g.add_edge(i, prev)
    for c in d.crossings:
        g.add_edge(c.edge_over, c.edge_under)
    return g


def _strip_constraints(d: KnotDiagram, edge: int, dirs: np.ndarray, normals: np.ndarray):
    """Rows ``(a, b)`` of ``a . (x, y, w) <= b`` describing one strip."""
    n = d.n
    p = d.points
    j, k = edge, (edge + 1) % n
    nv = normals[j]
    rows, rhs = [], []
    c0 = float(np.dot(nv, p[j]))
    rows.append([nv[0], nv[1], -0.5])
    rhs.append(c0)
    rows.append([-nv[0], -nv[1], -0.5])
    rhs.append(-c0)
    for vert, toward in ((j, p[k]), (k, p[j])):
        u = dirs[vert]
        m = np.array([-u[1], u[0]])
        side = np.sign(np.dot(m, toward - p[vert]))
        # side * m . (x - p_vert) >= 0
        rows.append([-side * m[0], -side * m[1], 0.0])
        rhs.append(-side * float(np.dot(m, p[vert])))
    return rows, rhs


def _cycle_onset_width(d: KnotDiagram, cycle: Sequence[int], dirs, normals) -> float:
    rows, rhs = [], []
    for e in cycle:
        r, b = _strip_constraints(d, e, dirs, normals)
        rows += r
        rhs += b
    res = linprog(
        c=[0.0, 0.0, 1.0],
        A_ub=np.array(rows),
        b_ub=np.array(rhs),
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if res.status != 0:
        return math.inf
    return float(res.x[2])


def layer_cycle_width_limit(
    d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM, max_cycles: int = 20000
) -> float:
    """Smallest width at which a cyclic stacking order becomes a contradiction.

    A cycle ``a over b over ... over a`` is harmless while the strips involved
    have no common point; once they do, no consistent layering exists at that
    point. Each directed cycle gives a small linear program in ``(x, y, w)``.
    """
    g = stacking_graph(d, f, tol)
    dirs, _, _ = fold_frame(d, tol)
    normals = _left_normals(d)
    best = math.inf
    for count, cycle in enumerate(nx.simple_cycles(g, length_bound=d.n)):
        if count >= max_cycles:
            warnings.warn("stacking-cycle enumeration truncated", RuntimeWarning, stacklevel=2)
            break
        best = min(best, _cycle_onset_width(d, cycle, dirs, normals))
    return best


@dataclass(frozen=True)
class WidthBounds:
    fold_line: float
    layer_cycle: float

    @property
    def feasible(self) -> float:
        return min(self.fold_line, self.layer_cycle)

    @property
    def binding(self) -> str:
        return "fold-line" if self.fold_line <= self.layer_cycle else "layer-cycle"


def width_bounds(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> WidthBounds:
    return WidthBounds(fold_line_width_limit(d, tol), layer_cycle_width_limit(d, f, tol))


def max_feasible_width(d: KnotDiagram, f: Sequence[Fold], tol: float = EPS_GEOM) -> float:
    return width_bounds(d, f, tol).feasible


def _boundary_components(d: KnotDiagram, w: float, dirs: np.ndarray, normals: np.ndarray):
    n = d.n
    p = d.points
    ndotu_out = np.einsum("ij,ij->i", normals, dirs)  # n_i . u_i (outgoing edge at v_i)
    ndotu_in = np.einsum("ij,ij->i", np.roll(normals, 1, axis=0), dirs)  # n_{i-1} . u_i

    def point(vertex: int, side: int, dot: float) -> tuple[float, float]:
        t = side * (w / 2.0) / dot
        q = p[vertex] + t * dirs[vertex]
        return (float(q[0]), float(q[1]))

    comps = []
    covered = set()
    for start_side in (1, -1):
        if (0, start_side) in covered:
            continue
        segs = []
        edge, side = 0, start_side
        while True:
            covered.add((edge, side))
            nxt = (edge + 1) % n
            segs.append(
                BoundarySegment(
                    edge=edge,
                    side=side,
                    start=point(edge, side, ndotu_out[edge]),
                    end=point(nxt, side, ndotu_in[nxt]),
                )
            )
            side = side * int(np.sign(ndotu_out[nxt] * ndotu_in[nxt]))
            edge = nxt
            if (edge, side) == (0, start_side):
                break
        comps.append(tuple(segs))
    return comps


def build_ribbon(
    d: KnotDiagram,
    f: Sequence[Fold],
    w: float,
    tol: float = EPS_GEOM,
    check: bool = True,
) -> RibbonGeometry:
    """Fold lines, boundary polylines and layer order of the ribbon of width w."""
    if not w > 0:
        raise InfeasibleWidthError(f"width must be positive, got {w}")
    if len(f) != d.n:
        raise ValueError(f"folding has {len(f)} entries for {d.n} vertices")
    if check:
        bounds = width_bounds(d, f, tol)
        if w > bounds.feasible * (1.0 + 1e-9) + tol:
            raise InfeasibleWidthError(
                f"width {w:.12g} exceeds the feasible width {bounds.feasible:.12g} "
                f"({bounds.binding} limit)"
            )
    dirs, _, _ = fold_frame(d, tol)
    normals = _left_normals(d)
    comps = _boundary_components(d, w, dirs, normals)
    boundary = tuple(np.array([s.start for s in comp]) for comp in comps)
    angles = fold_angles(d, tol)
    layers = []
    for i in range(d.n):
        if not is_fold(angles[i], tol):
            layers.append(None)
            continue
        prev = (i - 1) % d.n
        layers.append((prev, i) if f[i] is Fold.UNDER else (i, prev))
    return RibbonGeometry(
        width=float(w),
        fold_lines=tuple(fold_lines(d, w, tol)),
        boundary=boundary,
        segments=tuple(comps),
        layer_order=tuple(layers),
    )


def is_convex_obtuse(d: KnotDiagram, tol: float = EPS_GEOM) -> bool:
    return not d.crossings and is_convex(d, tol) and min(interior_angles(d, tol)) >= math.pi / 2 - tol
