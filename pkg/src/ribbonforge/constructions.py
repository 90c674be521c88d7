"""Explicit diagrams and foldings for the standard folded ribbon examples.

Each generator returns a :class:`ConstructionResult` whose ``claimed`` report
holds the expected values (ribbonlength, linking number, writhe, type). The
test suite recomputes those values from the diagram and folding alone.

Staircase unknots
    ``annulus_lk_n`` walks out a staircase of ``n`` right-angle corners from a
    cap vertex X (spur of length w/2, then edges of length w, then a final
    half edge to the far cap Y) and returns along the same path. Corners
    alternate right and left turns, so the staircase climbs diagonally and
    never meets itself. The outward corners carry sign ``sign`` and so do the
    returning ones, giving ``Lk = sign * n`` on an annulus of length ``2nw``.
    With ``delta = 0`` the return path is stacked exactly on the outward path;
    ``delta > 0`` offsets it sideways so the diagram becomes a simple polygon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .diagram import (
    EPS_GEOM,
    Crossing,
    Fold,
    KnotDiagram,
    TopologicalType,
    Turn,
    edge_vectors,
    fold_angle,
    is_fold,
    regular_polygon,
    total_length,
    transversal_intersections,
)
from .linking import (
    RibbonReport,
    classify_fold,
    fold_classifications,
    folding_for_linking,
    folding_with_counts,
)
from .ribbon import max_feasible_width


@dataclass(frozen=True)
class ConstructionResult:
    kind: str
    diagram: KnotDiagram
    folding: tuple[Fold, ...]
    claimed: RibbonReport
    width: float
    heights: tuple[float, ...] | None = None
    labels: tuple[str, ...] = ()
    opened: KnotDiagram | None = None
    rib_bound: float | None = None
    params: dict = field(default_factory=dict)


def _fold_for_sign(turn_left: bool, sign: int) -> Fold:
    """Letter that gives a fold of the requested sign for the given turn."""
    return Fold.UNDER if turn_left == (sign > 0) else Fold.OVER


def _claimed(d, f, rib, lk, tw, wr, ttype, w) -> RibbonReport:
    return RibbonReport(
        rib=float(rib),
        lk=int(lk),
        tw=float(tw),
        wr=int(wr),
        ttype=ttype,
        fold_signs=fold_classifications(d, f),
        width=float(w),
    )


def delta_L(alpha: float) -> float:
    """Extra ribbonlength allowance when a fold of angle ``alpha`` is spliced.

    Two extended folds of angle ``pi - alpha/2`` replace one of angle
    ``alpha``: ``2 cot(alpha/4)`` minus the old extended fold.
    """
    if not 0.0 < alpha < math.pi:
        raise ValueError(f"fold angle must lie in (0, pi), got {alpha}")
    old = alpha / 2.0 if alpha <= math.pi / 2 else math.pi / 2 - alpha / 2.0
    return 2.0 / math.tan(alpha / 4.0) - 1.0 / math.tan(old)


def two_stick(eps: float, w: float) -> ConstructionResult:
    if not (eps > 0 and w > 0):
        raise ValueError("two_stick needs eps > 0 and w > 0")
    d = KnotDiagram(((0.0, 0.0), (float(eps), 0.0)))
    f = (Fold.UNDER, Fold.OVER)
    claimed = _claimed(d, f, 2 * eps / w, 0, 0.0, 0, TopologicalType.ANNULUS, w)
    return ConstructionResult("two-stick", d, f, claimed, float(w), labels=("v1", "v2"))


def regular_ngon(n: int, k: int, perimeter: float = 1.0) -> ConstructionResult:
    """Counterclockwise regular n-gon folded for linking number k.

    Expected ribbonlength at the largest width: ``n cot(pi/n)``, except the
    all-same triangle (``|k| = 3``) whose width is cut by the incircle, giving
    ``3 sqrt(3)``.
    """
    under, _ = folding_for_linking(n, k)
    d = regular_polygon(n, perimeter)
    f = folding_with_counts(n, under)
    w = max_feasible_width(d, f)
    rib = 3 * math.sqrt(3) if (n == 3 and abs(k) == 3) else n / math.tan(math.pi / n)
    ttype = TopologicalType.ANNULUS if n % 2 == 0 else TopologicalType.MOBIUS
    claimed = _claimed(d, f, rib, k, float(k), 0, ttype, w)
    return ConstructionResult(
        "regular-ngon", d, f, claimed, w, labels=tuple(f"v{i + 1}" for i in range(n)),
        params={"n": n, "k": k, "perimeter": perimeter},
    )


def _staircase(n: int, w: float) -> np.ndarray:
    """Outward path ``[X, c_1, ..., c_n, Y]`` with X at the origin heading +y."""
    pts = [np.zeros(2)]
    heading = np.array([0.0, 1.0])
    pos = heading * (w / 2.0)
    pts.append(pos.copy())
    for k in range(1, n + 1):
        right = k % 2 == 1
        heading = np.array([heading[1], -heading[0]]) if right else np.array([-heading[1], heading[0]])
        step = w / 2.0 if k == n else w
        pos = pos + heading * step
        pts.append(pos.copy())
    return np.array(pts)


def _left_offset(path: np.ndarray, delta: float) -> np.ndarray:
    """Miter offset of an open polyline by ``delta`` to its left."""
    seg = np.diff(path, axis=0)
    seg = seg / np.linalg.norm(seg, axis=1)[:, None]
    normals = np.stack([-seg[:, 1], seg[:, 0]], axis=1)
    out = np.empty_like(path)
    out[0] = path[0] + delta * normals[0]
    out[-1] = path[-1] + delta * normals[-1]
    for i in range(1, len(path) - 1):
        a, b = normals[i - 1], normals[i]
        out[i] = path[i] + delta * (a + b) / (1.0 + float(np.dot(a, b)))
    return out


def _staircase_loop(n: int, w: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Outward path and the (possibly offset) return corners ``c'_n ... c'_1``."""
    out = _staircase(n, w)
    back = _left_offset(out, delta) if delta > 0 else out.copy()
    return out, back[1:-1][::-1]


def _letters_for_loop(d: KnotDiagram, sign: int, caps: dict[int, Fold]) -> tuple[Fold, ...]:
    return tuple(
        caps[i] if i in caps else _fold_for_sign(fold_angle(d, i) > 0, sign) for i in range(d.n)
    )


def annulus_lk_n(n: int, sign: int = 1, w: float = 1.0, delta: float | None = None) -> ConstructionResult:
    """Staircase unknot with ``2n + 2`` sticks, ``Lk = sign * n`` and ``Rib = 2n``.

    ``diagram`` is the exact stacked picture; ``opened`` offsets the return
    path by ``delta`` (default ``w/100``) so the two passes separate.
    Vertex labels follow the usual naming: odd n lists ``A, v_1..v_n, C,
    v_{n+1}..v_{2n}``; even n uses the cut points C and D, with the list
    starting at ``v_1``.
    """
    if n < 1:
        raise ValueError("annulus_lk_n needs n >= 1")
    sign = 1 if sign > 0 else -1
    if delta is None:
        delta = w / 100.0
    return_over = sign > 0
    cap_x = Fold.UNDER if return_over else Fold.OVER
    cap_y = cap_x.flipped()

    def build(offset: float):
        out, back = _staircase_loop(n, w, offset)
        verts = [tuple(p) for p in out] + [tuple(p) for p in back]
        d = KnotDiagram(tuple(verts))
        f = _letters_for_loop(d, sign, {0: cap_x, n + 1: cap_y})
        return d, f

    d, f = build(0.0)
    opened = build(delta)[0] if delta > 0 else None
    heights_low, heights_high = (-1.0, 1.0) if return_over else (1.0, -1.0)
    heights = (0.0,) + (heights_low,) * n + (0.0,) + (heights_high,) * n
    if n % 2:
        labels = ("A",) + tuple(f"v{i}" for i in range(1, n + 1)) + ("C",) + tuple(
            f"v{i}" for i in range(n + 1, 2 * n + 1)
        )
    else:
        # even case: the cycle read from c'_1 is v1, C, v2..v_{n+1}, D, v_{n+2}..v_{2n}
        labels = ("C",) + tuple(f"v{i}" for i in range(2, n + 2)) + ("D",) + tuple(
            f"v{i}" for i in range(n + 2, 2 * n + 1)
        ) + ("v1",)
    claimed = _claimed(d, f, 2 * n, sign * n, float(sign * n), 0, TopologicalType.ANNULUS, w)
    kind = "four-stick-lk1" if n == 1 else "annulus-lk-n"
    return ConstructionResult(
        kind, d, f, claimed, float(w), heights=heights, labels=labels, opened=opened,
        params={"n": n, "sign": sign, "delta": delta},
    )


def four_stick_lk1(sign: int = 1, w: float = 1.0, delta: float | None = None) -> ConstructionResult:
    """Four-stick unknot ``A, v1, C, v2`` with ``Lk = +-1`` and ``Rib = 2``."""
    return annulus_lk_n(1, sign, w, delta)


def pentagram_folding() -> tuple[Fold, ...]:
    """Folding of the pentagram trefoil in traversal order.

    Around the star the underfolds sit at two neighbouring tips. Traversal
    visits the tips in the order 1, 3, 5, 2, 4 of their positions, which turns
    "tips 1 and 5 under" into ``u o u o o``.
    """
    return (Fold.UNDER, Fold.OVER, Fold.UNDER, Fold.OVER, Fold.OVER)


def pentagram_trefoil(scale: float = 1.0) -> ConstructionResult:
    """Trefoil on the star pentagon with Lk = -7 and Rib = 5 cot(pi/5).

    Four crossings are negative and the one between tips 1 and 5 is positive,
    so the writhe is -3.
    """
    angles = [math.radians(-18.0 + 144.0 * k) for k in range(5)]
    bare = KnotDiagram(tuple((scale * math.cos(a), scale * math.sin(a)) for a in angles))
    ev = edge_vectors(bare)
    crossings = []
    for i, j, pt in transversal_intersections(bare):
        want = 1 if (i, j) == (2, 4) else -1
        positive_if_i_over = ev[i][0] * ev[j][1] - ev[i][1] * ev[j][0] > 0
        i_over = positive_if_i_over == (want > 0)
        crossings.append(Crossing(i, j, pt) if i_over else Crossing(j, i, pt))
    d = bare.with_crossings(crossings)
    f = pentagram_folding()
    w = max_feasible_width(d, f)
    claimed = _claimed(d, f, 5 / math.tan(math.pi / 5), -7, -1.0, -3, TopologicalType.MOBIUS, w)
    return ConstructionResult(
        "pentagram-trefoil", d, f, claimed, w, labels=("1", "3", "5", "2", "4"),
        params={"scale": scale},
    )


def _on_hull(points: np.ndarray, k: int, tol: float = EPS_GEOM) -> bool:
    from scipy.spatial import ConvexHull

    hull = ConvexHull(points)
    if k in hull.vertices:
        return True
    # collinear hull points are dropped by qhull; accept them too
    p = points[k]
    return bool(np.all(hull.equations[:, :2] @ p + hull.equations[:, 2] >= -tol))


def connected_sum(
    base: ConstructionResult, vertex: int, n: int, gap: float | None = None
) -> ConstructionResult:
    """Splice a staircase unknot with linking number ``n`` into ``base``.

    The base vertex ``w_k`` splits into ``w_k'`` and ``w_k''``, pulled apart
    by ``gap`` (default width/200) along the base fold line. From ``w_k'`` a
    spur leaves perpendicular to that fold line and the staircase climbs away
    from the base; the return path comes back to ``w_k''``. The two new folds
    have angle ``pi - alpha/2`` and the sign of the replaced fold, and the
    returning half lies over the outgoing half exactly when the replaced fold
    was an underfold.

    A base with an ``opened`` variant is spliced in that form. ``claimed.lk``
    records the target value ``m + n``; the actual linking number is what
    :func:`ribbonforge.linking.ribbon_linking_number` returns.
    """
    if n == 0:
        raise ValueError("connected_sum needs n != 0")
    # stacked bases are spliced in their opened form so every layer is separated
    d0 = base.opened if base.opened is not None else base.diagram
    f0, w = base.folding, base.width
    p = d0.points
    m = d0.n
    k = vertex % m
    alpha_signed = fold_angle(d0, k)
    alpha = abs(alpha_signed)
    if not is_fold(alpha_signed) or alpha <= EPS_GEOM:
        raise ValueError(f"vertex {k} has a degenerate fold angle")
    if not _on_hull(p, k):
        raise ValueError(f"vertex {k} is not on the convex hull of the base diagram")
    if gap is None:
        gap = w / 200.0
    base_class = classify_fold(d0, f0, k)
    d_in = p[k] - p[k - 1]
    d_out = p[(k + 1) % m] - p[k]
    d_in, d_out = d_in / np.linalg.norm(d_in), d_out / np.linalg.norm(d_out)
    u_l = d_in + d_out
    u_l /= np.linalg.norm(u_l)
    b_out = d_in - d_out
    b_out /= np.linalg.norm(b_out)

    sign = 1 if n > 0 else -1
    out, back = _staircase_loop(abs(n), w, 2.0 * gap)
    # local +y -> b_out, local -x -> u_l (towards w_{k+1}); a reflection when the base turns right
    def to_global(q: np.ndarray) -> np.ndarray:
        return p[k] - gap * u_l - np.multiply.outer(q[..., 0], u_l) + np.multiply.outer(q[..., 1], b_out)

    outer = to_global(out)
    ret = to_global(back)
    w1 = outer[0]
    w2 = to_global(_left_offset(out, 2.0 * gap)[0])
    spliced = list(outer[1:]) + list(ret) + [w2]
    verts = [tuple(v) for v in p[:k]] + [tuple(w1)] + [tuple(v) for v in spliced] + [
        tuple(v) for v in p[k + 1:]
    ]
    shift = 2 * abs(n) + 2
    i_w1, i_w2 = k, k + shift
    i_y = k + abs(n) + 1

    def base_edge(e: int) -> int | None:
        if e < k:
            return e
        if e == i_w2:
            return k
        if e > i_w2:
            return e - shift
        return None

    bare = KnotDiagram(tuple(verts))
    over_pairs = {(c.edge_over, c.edge_under) for c in d0.crossings}
    crossings = []
    for i, j, pt in transversal_intersections(bare):
        bi, bj = base_edge(i), base_edge(j)
        if bi is None or bj is None:
            raise ValueError("the spliced unknot meets the base diagram")
        if (bi, bj) in over_pairs:
            crossings.append(Crossing(i, j, pt))
        elif (bj, bi) in over_pairs:
            crossings.append(Crossing(j, i, pt))
        else:
            raise ValueError(f"new crossing between base edges {bi} and {bj}")
    d = bare.with_crossings(crossings)

    return_over = base_class.layer is Fold.UNDER
    letters = []
    for i in range(d.n):
        if i < k:
            letters.append(f0[i])
        elif i > i_w2:
            letters.append(f0[i - shift])
        elif i in (i_w1, i_w2):
            letters.append(_fold_for_sign(fold_angle(d, i) > 0, base_class.sign))
        elif i == i_y:
            letters.append(Fold.OVER if return_over else Fold.UNDER)
        else:
            letters.append(_fold_for_sign(fold_angle(d, i) > 0, sign))
    f = tuple(letters)

    m_claim = base.claimed.lk
    rib = total_length(d) / w
    claimed = RibbonReport(
        rib=rib,
        lk=m_claim + n,
        tw=float(base.claimed.tw + n),
        wr=base.claimed.wr,
        ttype=base.claimed.ttype,
        fold_signs=fold_classifications(d, f),
        width=w,
    )
    rib_bound = total_length(base.diagram) / w + 2 * abs(n) + delta_L(alpha)
    labels = list(base.labels) if base.labels else [f"w{i + 1}" for i in range(m)]
    lab_k = labels[k]
    new_labels = (
        labels[:k]
        + [lab_k + "'"]
        + [f"u{i}" for i in range(1, abs(n) + 1)]
        + ["C"]
        + [f"u{i}" for i in range(abs(n) + 1, 2 * abs(n) + 1)]
        + [lab_k + "''"]
        + labels[k + 1:]
    )
    return ConstructionResult(
        "connected-sum", d, f, claimed, w, labels=tuple(new_labels), rib_bound=rib_bound,
        params={"base": base.kind, "vertex": k, "n": n, "gap": gap},
    )


def turn_of(d: KnotDiagram, i: int) -> Turn | None:
    a = fold_angle(d, i)
    if not is_fold(a) or a == 0.0:
        return None
    return Turn.LEFT if a > 0 else Turn.RIGHT
