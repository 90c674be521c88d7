"""JSON documents holding a diagram, its folding and optional width/heights.

Layout::

    {
      "version": 1,
      "vertices": [[x, y], ...],
      "crossings": [{"over": i, "under": j}, ...],
      "folding": ["u", "o", ...],
      "width": 0.25,               # optional
      "heights": [0.0, ...],       # optional
      "metadata": {"kind": "..."}  # optional
    }

Edge ``i`` joins vertex ``i`` to vertex ``i + 1`` (mod n). Unknown top-level
keys are moved into ``metadata`` on parse so nothing is lost.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .diagram import Crossing, Fold, KnotDiagram, transversal_intersections

FORMAT_VERSION = 1
KNOWN_FIELDS = ("version", "vertices", "crossings", "folding", "width", "heights", "metadata")


class DocumentError(ValueError):
    """Schema violation; ``where`` names the offending field and index."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class DiagramDocument:
    vertices: list[tuple[float, float]]
    folding: list[Fold]
    crossings: list[tuple[int, int]] = field(default_factory=list)
    width: float | None = None
    heights: list[float] | None = None
    metadata: dict[str, Any] = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def diagram(self) -> KnotDiagram:
        """The knot diagram, with crossing points located geometrically."""
        bare = KnotDiagram(tuple(self.vertices))
        if not self.crossings:
            return bare
        points = {(i, j): p for i, j, p in transversal_intersections(bare)}
        out = []
        for k, (over, under) in enumerate(self.crossings):
            key = (min(over, under), max(over, under))
            if key not in points:
                raise DocumentError(
                    f"crossings[{k}]", f"edges {over} and {under} do not cross transversally"
                )
            out.append(Crossing(over, under, points[key]))
        return bare.with_crossings(out)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(where, f"expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise DocumentError(where, "must be finite")
    return x


def _index(value: Any, where: str, n: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(where, f"expected an edge index, got {value!r}")
    if not 0 <= value < n:
        raise DocumentError(where, f"edge index {value} out of range for {n} edges")
    return value


def _list(raw: dict, key: str) -> list:
    value = raw[key]
    if not isinstance(value, list):
        raise DocumentError(key, f"expected an array, got {type(value).__name__}")
    return value


def document_from_json(raw: Any) -> DiagramDocument:
    if not isinstance(raw, dict):
        raise DocumentError("document", "top level must be a JSON object")
    for key in ("vertices", "folding"):
        if key not in raw:
            raise DocumentError(key, "required field is missing")
    version = raw.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DocumentError("version", f"unsupported version {version!r}")

    vertices = []
    for i, v in enumerate(_list(raw, "vertices")):
        if not isinstance(v, list) or len(v) != 2:
            raise DocumentError(f"vertices[{i}]", "expected [x, y]")
        vertices.append((_number(v[0], f"vertices[{i}][0]"), _number(v[1], f"vertices[{i}][1]")))
    n = len(vertices)
    if n < 2:
        raise DocumentError("vertices", "need at least 2 vertices")

    letters = _list(raw, "folding")
    folding = []
    for i, c in enumerate(letters):
        try:
            folding.append(Fold(c))
        except ValueError:
            raise DocumentError(f"folding[{i}]", f"expected 'u' or 'o', got {c!r}") from None
    if len(folding) != n:
        missing = len(folding) if len(folding) < n else n
        raise DocumentError(
            f"folding[{missing}]",
            f"folding has {len(folding)} entries for {n} vertices",
        )

    crossings = []
    for k, c in enumerate(_list(raw, "crossings") if "crossings" in raw else []):
        if not isinstance(c, dict) or set(c) != {"over", "under"}:
            raise DocumentError(f"crossings[{k}]", "expected {\"over\": i, \"under\": j}")
        over = _index(c["over"], f"crossings[{k}].over", n)
        under = _index(c["under"], f"crossings[{k}].under", n)
        if over == under:
            raise DocumentError(f"crossings[{k}]", "an edge cannot cross itself")
        crossings.append((over, under))

    width = None
    if raw.get("width") is not None:
        width = _number(raw["width"], "width")
        if width <= 0:
            raise DocumentError("width", "must be positive")

    heights = None
    if raw.get("heights") is not None:
        hs = _list(raw, "heights")
        if len(hs) != n:
            raise DocumentError(f"heights[{min(len(hs), n)}]", f"{len(hs)} heights for {n} vertices")
        heights = [_number(h, f"heights[{i}]") for i, h in enumerate(hs)]

    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata", "expected an object")
    metadata = dict(metadata)
    for key in raw:
        if key not in KNOWN_FIELDS:
            metadata[key] = raw[key]
    return DiagramDocument(vertices, folding, crossings, width, heights, metadata, version)


def parse_document(text: str) -> DiagramDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return document_from_json(raw)


def document_to_json(doc: DiagramDocument) -> dict[str, Any]:
    out: dict[str, Any] = {
        "version": doc.version,
        "vertices": [[float(x), float(y)] for x, y in doc.vertices],
        "crossings": [{"over": o, "under": u} for o, u in doc.crossings],
        "folding": [f.value for f in doc.folding],
    }
    if doc.width is not None:
        out["width"] = float(doc.width)
    if doc.heights is not None:
        out["heights"] = [float(h) for h in doc.heights]
    if doc.metadata:
        out["metadata"] = dict(doc.metadata)
    return out


def serialize_document(doc: DiagramDocument) -> str:
    """Canonical text: two-space indent, keys in schema order, shortest exact floats."""
    return json.dumps(document_to_json(doc), indent=2) + "\n"


def canonical(text: str) -> str:
    return serialize_document(parse_document(text))


def make_document(
    d: KnotDiagram,
    f: Sequence[Fold],
    width: float | None = None,
    heights: Sequence[float] | None = None,
    metadata: dict[str, Any] | None = None,
) -> DiagramDocument:
    return DiagramDocument(
        vertices=[(float(x), float(y)) for x, y in d.vertices],
        folding=list(f),
        crossings=[(c.edge_over, c.edge_under) for c in d.crossings],
        width=None if width is None else float(width),
        heights=None if heights is None else [float(h) for h in heights],
        metadata=dict(metadata or {}),
    )
