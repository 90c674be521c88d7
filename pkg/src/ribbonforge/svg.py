"""SVG 1.1 rendering of a folded ribbon.

Every drawn element carries a class so tests can count them:

* ``core``        diagram polygon, solid, ``CORE_COLOR``
* ``boundary``    one path per ribbon boundary component, dashed, ``BOUNDARY_COLOR``
* ``fold-line``   one line per vertex, dotted, ``FOLD_COLOR``
* ``fold-sign``   "+" or "-" next to each fold, ``LABEL_COLOR``

The view box is the bounding box of core and boundary scaled by 1.5 about
its centre. The y axis points up as in the diagram coordinates.
"""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .diagram import EPS_GEOM, Fold, KnotDiagram
from .linking import fold_classifications
from .ribbon import build_ribbon, max_feasible_width

CORE_COLOR = "#1f2937"
BOUNDARY_COLOR = "#2563eb"
FOLD_COLOR = "#dc2626"
LABEL_COLOR = "#059669"
PADDING = 1.5


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _pt(p) -> str:
    return f"{_fmt(p[0])},{_fmt(-p[1])}"


def render_svg(
    d: KnotDiagram,
    f: Sequence[Fold],
    w: float | None = None,
    title: str | None = None,
    tol: float = EPS_GEOM,
) -> str:
    if w is None:
        w = max_feasible_width(d, f, tol)
    geom = build_ribbon(d, f, w, tol, check=False)
    pts = d.points
    every = np.vstack([pts] + [np.asarray(b) for b in geom.boundary])
    lo, hi = every.min(axis=0), every.max(axis=0)
    centre = (lo + hi) / 2
    span = np.maximum(hi - lo, w) * PADDING
    x0, y0 = centre[0] - span[0] / 2, -(centre[1] + span[1] / 2)
    stroke = float(min(span)) / 300.0

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(span[0])} {_fmt(span[1])}">',
    ]
    if title:
        out.append(f"  <title>{escape(title)}</title>")
    core = " ".join(_pt(p) for p in pts)
    out.append(
        f'  <polygon class="core" points="{core}" fill="none" stroke="{CORE_COLOR}" '
        f'stroke-width="{_fmt(stroke)}"/>'
    )
    for comp in geom.boundary:
        path = "M " + " L ".join(_pt(p) for p in comp) + " Z"
        out.append(
            f'  <path class="boundary" d="{path}" fill="none" stroke="{BOUNDARY_COLOR}" '
            f'stroke-width="{_fmt(stroke)}" stroke-dasharray="{_fmt(4 * stroke)} {_fmt(2 * stroke)}"/>'
        )
    for fl in geom.fold_lines:
        (ax, ay), (bx, by) = fl.endpoints
        out.append(
            f'  <line class="fold-line" x1="{_fmt(ax)}" y1="{_fmt(-ay)}" x2="{_fmt(bx)}" '
            f'y2="{_fmt(-by)}" stroke="{FOLD_COLOR}" stroke-width="{_fmt(stroke)}" '
            f'stroke-dasharray="{_fmt(stroke)} {_fmt(stroke)}"/>'
        )
    size = stroke * 8
    for c in fold_classifications(d, f, tol):
        fl = geom.fold_lines[c.vertex]
        tip = np.array(fl.endpoints[1]) + 0.6 * size * np.array(fl.direction)
        out.append(
            f'  <text class="fold-sign" x="{_fmt(tip[0])}" y="{_fmt(-tip[1])}" '
            f'font-size="{_fmt(size)}" fill="{LABEL_COLOR}" text-anchor="middle">'
            f'{"+" if c.sign > 0 else "-"}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
