"""Oriented polygonal knot diagrams with crossing and folding data.

A diagram is a closed polygon ``v_0 ... v_{n-1}``; edge ``i`` runs from
``v_i`` to ``v_{i+1}`` (indices mod n) and the listing order is the
orientation. Crossings are stored explicitly as ``(edge_over, edge_under)``
pairs. Folding information assigns ``Fold.UNDER`` or ``Fold.OVER`` to every
vertex: at ``v_i`` the outgoing edge ``e_i`` lies under (or over) the incoming
edge ``e_{i-1}``.

Angles follow the fold-angle convention: the signed angle at ``v_i`` has
magnitude equal to the interior angle between the two edges, in ``[0, pi]``,
and is positive for a left turn. A magnitude of ``pi`` is a straight
continuation (no fold); a magnitude of ``0`` means the edge doubles back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels

EPS_GEOM = 1e-9


class Fold(str, Enum):
    OVER = "o"
    UNDER = "u"

    def flipped(self) -> "Fold":
        return Fold.UNDER if self is Fold.OVER else Fold.OVER


class Turn(str, Enum):
    LEFT = "L"
    RIGHT = "R"


class TopologicalType(str, Enum):
    ANNULUS = "Annulus"
    MOBIUS = "MobiusBand"


FoldingInfo = tuple[Fold, ...]


def parse_folding(letters: str | Iterable[str | Fold]) -> FoldingInfo:
    """Build folding information from ``"uuo"`` or an iterable of letters."""
    try:
        return tuple(item if isinstance(item, Fold) else Fold(item) for item in letters)
    except ValueError as exc:
        raise ValueError(f"folding entries must be 'u' or 'o': {exc}") from None


def folding_string(f: Sequence[Fold]) -> str:
    return "".join(x.value for x in f)


@dataclass(frozen=True)
class Crossing:
    """A transversal crossing of two non-adjacent edges.

    ``point`` caches the intersection; it is filled in by :class:`KnotDiagram`
    when omitted.
    """

    edge_over: int
    edge_under: int
    point: tuple[float, float] | None = None


@dataclass(frozen=True)
class Violation:
    invariant: str
    indices: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.invariant} at {self.indices}: {self.message}"


@dataclass(frozen=True)
class KnotDiagram:
    vertices: tuple[tuple[float, float], ...]
    crossings: tuple[Crossing, ...] = ()
    _points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        pts = np.array(verts, dtype=np.float64).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "_points", pts)
        filled = []
        for c in self.crossings:
            c = Crossing(int(c.edge_over), int(c.edge_under), c.point)
            if c.point is None:
                p = _line_intersection(self, c.edge_over, c.edge_under)
                if p is not None:
                    c = Crossing(c.edge_over, c.edge_under, p)
            filled.append(c)
        object.__setattr__(self, "crossings", tuple(filled))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def points(self) -> np.ndarray:
        return self._points

    def edge(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        return self._points[i % n], self._points[(i + 1) % n]

    def with_crossings(self, crossings: Iterable[Crossing]) -> "KnotDiagram":
        return KnotDiagram(self.vertices, tuple(crossings))


def _line_intersection(d: KnotDiagram, i: int, j: int) -> tuple[float, float] | None:
    n = d.n
    if not (0 <= i < n and 0 <= j < n):
        return None
    p, q = d.edge(i)
    r, s = d.edge(j)
    da, db = q - p, s - r
    den = da[0] * db[1] - da[1] * db[0]
    if den == 0.0:
        return None
    e = r - p
    t = (e[0] * db[1] - e[1] * db[0]) / den
    x = p + t * da
    return (float(x[0]), float(x[1]))


def edge_vectors(d: KnotDiagram) -> np.ndarray:
    return np.roll(d.points, -1, axis=0) - d.points


def edge_lengths(d: KnotDiagram) -> np.ndarray:
    return np.linalg.norm(edge_vectors(d), axis=1)


def total_length(d: KnotDiagram) -> float:
    return float(edge_lengths(d).sum())


def edges_adjacent(n: int, i: int, j: int) -> bool:
    return (i - j) % n in (1, n - 1)


def fold_angle(d: KnotDiagram, i: int, tol: float = EPS_GEOM) -> float:
    """Signed fold angle at vertex ``i``, in ``(-pi, pi]``.

    Turns within ``tol`` of straight return ``pi``; turns within ``tol`` of a
    full reversal return ``0.0``.
    """
    n = d.n
    if not 0 <= i < n:
        raise IndexError(f"vertex index {i} out of range for {n} vertices")
    p = d.points
    d_in = p[i] - p[i - 1]
    d_out = p[(i + 1) % n] - p[i]
    l_in, l_out = math.hypot(*d_in), math.hypot(*d_out)
    if l_in <= tol or l_out <= tol:
        raise ValueError(f"zero-length edge adjacent to vertex {i}")
    cross = (d_in[0] * d_out[1] - d_in[1] * d_out[0]) / (l_in * l_out)
    dot = (d_in[0] * d_out[0] + d_in[1] * d_out[1]) / (l_in * l_out)
    turn = math.atan2(cross, dot)
    if abs(turn) <= tol:
        return math.pi
    if math.pi - abs(turn) <= tol:
        return 0.0
    return math.copysign(math.pi - abs(turn), turn)


def fold_angles(d: KnotDiagram, tol: float = EPS_GEOM) -> list[float]:
    return [fold_angle(d, i, tol) for i in range(d.n)]


def is_fold(angle: float, tol: float = EPS_GEOM) -> bool:
    """Vertices with a straight continuation are not folds."""
    return abs(abs(angle) - math.pi) > tol


def topological_type(d: KnotDiagram, tol: float = EPS_GEOM) -> TopologicalType:
    folds = sum(1 for a in fold_angles(d, tol) if is_fold(a, tol))
    return TopologicalType.ANNULUS if folds % 2 == 0 else TopologicalType.MOBIUS


def turning_number(d: KnotDiagram) -> float:
    """Total signed turning divided by 2*pi (1 for a ccw simple polygon)."""
    v = edge_vectors(d)
    w = np.roll(v, -1, axis=0)
    turns = np.arctan2(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0], np.einsum("ij,ij->i", v, w))
    return float(turns.sum() / (2.0 * math.pi))


def is_convex(d: KnotDiagram, tol: float = EPS_GEOM) -> bool:
    """True for a strictly convex, non-degenerate polygon.

    All fold angles must share one sign with magnitude in (0, pi), and the
    polygon must wind exactly once (this rejects star polygons, whose turns
    also share a sign).
    """
    if d.crossings or d.n < 3:
        return False
    angles = fold_angles(d, tol)
    if any(not is_fold(a, tol) or abs(a) <= tol for a in angles):
        return False
    if not (all(a > 0 for a in angles) or all(a < 0 for a in angles)):
        return False
    return abs(abs(turning_number(d)) - 1.0) <= 1e-6


def interior_angles(d: KnotDiagram, tol: float = EPS_GEOM) -> list[float]:
    """Interior angles of a convex diagram (``pi - |turn|`` at each vertex)."""
    if not is_convex(d, tol):
        raise ValueError("interior_angles requires a convex diagram")
    return [abs(a) for a in fold_angles(d, tol)]


def transversal_intersections(
    d: KnotDiagram, tol: float = EPS_GEOM
) -> list[tuple[int, int, tuple[float, float]]]:
    """Non-adjacent edge pairs whose open segments cross transversally.

    Each pair is reported once as ``(i, j, point)`` with ``i < j``. Contacts
    at an endpoint (within ``tol`` in segment parameter) are not crossings.
    """
    p = d.points
    q = np.roll(p, -1, axis=0)
    ii, jj, s, t = kernels.segment_intersections(p, q, p, q, tol)
    out = []
    n = d.n
    for i, j, si, tj in zip(ii, jj, s, t):
        if i >= j or edges_adjacent(n, i, j):
            continue
        if tol < si < 1.0 - tol and tol < tj < 1.0 - tol:
            x = p[i] + si * (q[i] - p[i])
            out.append((int(i), int(j), (float(x[0]), float(x[1]))))
    return out


def _collinear_overlaps(d: KnotDiagram, tol: float) -> list[tuple[int, int]]:
    n = d.n
    found = []
    for i in range(n):
        a0, a1 = d.edge(i)
        da = a1 - a0
        la = float(np.hypot(*da))
        for j in range(i + 1, n):
            b0, b1 = d.edge(j)
            db = b1 - b0
            lb = float(np.hypot(*db))
            if abs(da[0] * db[1] - da[1] * db[0]) > tol * la * lb:
                continue
            off = b0 - a0
            if abs(da[0] * off[1] - da[1] * off[0]) > tol * la:
                continue
            u = da / la
            lo, hi = sorted((float(np.dot(b0 - a0, u)), float(np.dot(b1 - a0, u))))
            if min(hi, la) - max(lo, 0.0) > tol:
                found.append((i, j))
    return found


def _vertex_contacts(d: KnotDiagram, tol: float) -> list[tuple[int, int]]:
    """Vertices lying on a non-incident edge, or stacked on another vertex."""
    p = d.points
    n = d.n
    hits = []
    for k in range(n):
        for j in range(n):
            if j == k or (j + 1) % n == k:
                continue
            a0, a1 = d.edge(j)
            da = a1 - a0
            L2 = float(np.dot(da, da))
            s = float(np.dot(p[k] - a0, da)) / L2
            if -tol <= s <= 1 + tol:
                foot = a0 + min(max(s, 0.0), 1.0) * da
                if float(np.hypot(*(p[k] - foot))) <= tol:
                    hits.append((k, j))
    return hits


def segment_distance(p0, p1, q0, q1) -> float:
    """Distance between two 2D segments (zero if they cross)."""
    p0, p1, q0, q1 = (np.asarray(x, dtype=np.float64) for x in (p0, p1, q0, q1))

    def orient(a, b, c):
        u, v = b - a, c - a
        return float(u[0] * v[1] - u[1] * v[0])

    if (
        orient(p0, p1, q0) * orient(p0, p1, q1) < 0
        and orient(q0, q1, p0) * orient(q0, q1, p1) < 0
    ):
        return 0.0

    def point_seg(x, a, b):
        ab = b - a
        t = float(np.clip(np.dot(x - a, ab) / np.dot(ab, ab), 0.0, 1.0))
        return float(np.hypot(*(x - (a + t * ab))))

    return min(point_seg(p0, q0, q1), point_seg(p1, q0, q1), point_seg(q0, p0, p1), point_seg(q1, p0, p1))


def close_approaches(d: KnotDiagram, w: float, tol: float = EPS_GEOM) -> list[tuple[int, int, float]]:
    """Non-adjacent edge pairs that do not cross but pass within ``w``.

    Their ribbons may overlap in ways the crossing data does not describe.
    These are reported, not rejected: the diagram stays valid.
    """
    n = d.n
    crossing = {(i, j) for i, j, _ in transversal_intersections(d, tol)}
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if edges_adjacent(n, i, j) or (i, j) in crossing:
                continue
            dist = segment_distance(*d.edge(i), *d.edge(j))
            if dist < w - tol:
                out.append((i, j, dist))
    return out


def validate(d: KnotDiagram, strict: bool = False, tol: float = EPS_GEOM) -> list[Violation]:
    """Check every diagram invariant; an empty list means the diagram is valid.

    Non-regular features (collinear overlapping edges, stacked vertices) are
    allowed unless ``strict`` is set.
    """
    out: list[Violation] = []
    n = d.n
    if n < 2:
        return [Violation("vertex-count", (), f"need at least 2 vertices, got {n}")]
    if not np.all(np.isfinite(d.points)):
        bad = tuple(int(i) for i in np.nonzero(~np.isfinite(d.points).all(axis=1))[0])
        out.append(Violation("finite-coordinates", bad, "non-finite vertex coordinates"))
        return out
    lengths = edge_lengths(d)
    zero = [i for i in range(n) if lengths[i] <= tol]
    for i in zero:
        out.append(Violation("zero-length-edge", (i,), f"edge {i} has length {lengths[i]:.3g}"))
    if zero:
        return out

    actual = {(i, j): pt for i, j, pt in transversal_intersections(d, tol)}
    seen: dict[tuple[int, int], int] = {}
    for k, c in enumerate(d.crossings):
        i, j = c.edge_over, c.edge_under
        if not (0 <= i < n and 0 <= j < n):
            out.append(Violation("crossing-edge-range", (k,), f"edges ({i}, {j}) out of range"))
            continue
        if i == j:
            out.append(Violation("crossing-distinct-edges", (k, i), "over and under edge coincide"))
            continue
        if edges_adjacent(n, i, j):
            out.append(Violation("crossing-non-adjacent", (k, i, j), "edges share a vertex"))
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            out.append(Violation("duplicate-crossing", (seen[key], k), f"edge pair {key} listed twice"))
            continue
        seen[key] = k
        if key not in actual:
            out.append(Violation("crossing-not-transversal", (k, i, j), "edges do not cross"))
            continue
        if c.point is not None:
            gap = math.dist(c.point, actual[key])
            if gap > max(tol, tol * float(lengths.max())) * 1e3:
                out.append(Violation("crossing-point", (k,), f"cached point off by {gap:.3g}"))
    for key in sorted(actual):
        if key not in seen:
            out.append(Violation("missing-crossing", key, f"edges {key} cross without a Crossing entry"))
    if strict:
        for i, j in _collinear_overlaps(d, tol):
            out.append(Violation("collinear-overlap", (i, j), "edges overlap along a segment"))
        for k, j in _vertex_contacts(d, tol):
            out.append(Violation("vertex-contact", (k, j), f"vertex {k} touches edge {j}"))
    return out


def crossings_from_levels(d: KnotDiagram, over: Callable[[int, int], bool], tol: float = EPS_GEOM) -> KnotDiagram:
    """Attach a Crossing for every transversal intersection.

    ``over(i, j)`` returns True when edge ``i`` passes over edge ``j``.
    """
    crossings = []
    for i, j, pt in transversal_intersections(d, tol):
        if over(i, j):
            crossings.append(Crossing(i, j, pt))
        else:
            crossings.append(Crossing(j, i, pt))
    return d.with_crossings(crossings)


def reversed_diagram(d: KnotDiagram, f: Sequence[Fold] | None = None):
    """Reverse orientation; returns ``(diagram, folding)``.

    Edge ``i`` becomes edge ``n - 2 - i`` (mod n). A fold at ``v_i`` with the
    outgoing strip under the incoming one becomes, after reversal, a fold with
    the new outgoing strip (old incoming) over: every letter flips.
    """
    n = d.n
    verts = tuple(reversed(d.vertices))

    def remap(e: int) -> int:
        return (n - 2 - e) % n

    crossings = tuple(Crossing(remap(c.edge_over), remap(c.edge_under), c.point) for c in d.crossings)
    rd = KnotDiagram(verts, crossings)
    if f is None:
        return rd, None
    rf = tuple(x.flipped() for x in reversed(f))
    return rd, rf


def rotated_diagram(d: KnotDiagram, shift: int, f: Sequence[Fold] | None = None):
    """Cyclically relabel so that old vertex ``shift`` becomes vertex 0."""
    n = d.n
    verts = d.vertices[shift:] + d.vertices[:shift]
    crossings = tuple(
        Crossing((c.edge_over - shift) % n, (c.edge_under - shift) % n, c.point) for c in d.crossings
    )
    rd = KnotDiagram(verts, crossings)
    if f is None:
        return rd, None
    return rd, tuple(f[shift:]) + tuple(f[:shift])


def regular_polygon(n: int, perimeter: float = 1.0, clockwise: bool = False) -> KnotDiagram:
    """Regular n-gon with the given perimeter, first vertex on the +x axis."""
    radius = perimeter / (2.0 * n * math.sin(math.pi / n))
    sgn = -1.0 if clockwise else 1.0
    verts = [
        (radius * math.cos(sgn * 2 * math.pi * k / n), radius * math.sin(sgn * 2 * math.pi * k / n))
        for k in range(n)
    ]
    return KnotDiagram(tuple(verts))


def polygon_from_angles(alphas: Sequence[float], lengths: Sequence[float]) -> KnotDiagram:
    """Counterclockwise polygon walked out from interior angles and edge lengths.

    Edge ``i`` has length ``lengths[i]``; the interior angle at ``v_{i+1}`` is
    ``alphas[(i+1) % n]``. Closure is the caller's responsibility.
    """
    n = len(alphas)
    heading = 0.0
    x = y = 0.0
    verts = []
    for i in range(n):
        verts.append((x, y))
        x += lengths[i] * math.cos(heading)
        y += lengths[i] * math.sin(heading)
        heading += math.pi - alphas[(i + 1) % n]
    return KnotDiagram(tuple(verts))
