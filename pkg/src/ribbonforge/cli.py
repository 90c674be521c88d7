"""Command line entry point: ``ribbonforge analyze|construct|optimize|enumerate|svg``.

Exit codes: 0 success, 1 a check failed or the width is infeasible,
2 bad arguments or an invalid document.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import constructions as cons
from .diagram import EPS_GEOM, close_approaches, folding_string, is_convex, validate
from .io import DocumentError, make_document, parse_document, serialize_document
from .linking import analyze, convex_linking_table, enumerate_convex_linking
from .optimize import ConvergenceError, minimize_tan_sum
from .ribbon import InfeasibleWidthError, max_feasible_width, max_width, width_bounds
from .svg import render_svg

CONSTRUCT_KINDS = ("two-stick", "regular-ngon", "four-stick", "annulus-lk-n", "pentagram")


def _load(path: str, tol: float):
    text = Path(path).read_text(encoding="utf-8")
    doc = parse_document(text)
    d = doc.diagram()
    problems = validate(d, tol=tol)
    if problems:
        raise DocumentError("vertices", "; ".join(p.message for p in problems))
    return doc, d


def _report_dict(rep, d, tol: float) -> dict:
    out = {
        "rib": rep.rib,
        "lk": rep.lk,
        "tw": rep.tw,
        "wr": rep.wr,
        "type": rep.ttype.value,
        "width": rep.width,
        "fold_signs": [
            {"vertex": c.vertex, "turn": c.turn.value, "layer": c.layer.value, "sign": c.sign}
            for c in rep.fold_signs
        ],
        "identity_holds": rep.identity_holds(),
        "close_approaches": [
            {"edges": [i, j], "distance": dist} for i, j, dist in close_approaches(d, rep.width, tol)
        ],
    }
    if not d.crossings and d.n >= 3 and is_convex(d, tol):
        out["max_width"] = max_width(d, tol)
    return out


def cmd_analyze(args) -> int:
    doc, d = _load(args.path, args.tolerance)
    w = args.width if args.width is not None else doc.width
    if w is not None:
        feasible = width_bounds(d, doc.folding, args.tolerance).feasible
        if w > feasible * (1 + 1e-9) + args.tolerance:
            raise InfeasibleWidthError(f"width {w:.12g} exceeds the feasible width {feasible:.12g}")
    rep = analyze(d, doc.folding, w, args.tolerance)
    data = _report_dict(rep, d, args.tolerance)
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(f"vertices     {d.n}")
        print(f"folding      {folding_string(doc.folding)}")
        print(f"type         {data['type']}")
        print(f"width        {rep.width:.12g}")
        print(f"Rib          {rep.rib:.12g}")
        print(f"Lk           {rep.lk:d}")
        print(f"Tw           {rep.tw:.1f}")
        print(f"Wr           {rep.wr:d}")
        if "max_width" in data:
            print(f"max_width    {data['max_width']:.12g}")
        signs = " ".join(f"{c.vertex}:{'+' if c.sign > 0 else '-'}" for c in rep.fold_signs)
        print(f"fold signs   {signs}")
    for item in data["close_approaches"]:
        i, j = item["edges"]
        print(
            f"warning: edges {i} and {j} pass within {item['distance']:.3g} < w without crossing",
            file=sys.stderr,
        )
    if args.check_identity and not rep.identity_holds():
        print("identity check FAILED: Lk != Tw + k*Wr", file=sys.stderr)
        return 1
    return 0


def _build(args):
    kind = args.kind
    if kind == "two-stick":
        return cons.two_stick(args.eps, args.width or 1.0)
    if kind == "regular-ngon":
        return cons.regular_ngon(args.n, args.k)
    if kind == "four-stick":
        return cons.four_stick_lk1(args.sign, args.width or 1.0)
    if kind == "annulus-lk-n":
        return cons.annulus_lk_n(args.n, args.sign, args.width or 1.0)
    return cons.pentagram_trefoil()


def cmd_construct(args) -> int:
    res = _build(args)
    if args.sum_with is not None:
        res = cons.connected_sum(res, args.vertex, args.sum_with)
    d = res.opened if (args.opened and res.opened is not None) else res.diagram
    meta = {"kind": res.kind, "labels": list(res.labels), "claimed_lk": res.claimed.lk,
            "claimed_rib": res.claimed.rib}
    if res.rib_bound is not None:
        meta["rib_bound"] = res.rib_bound
    width = res.width
    if width > width_bounds(d, res.folding, args.tolerance).feasible * (1 + 1e-9):
        # spliced diagrams keep their nominal width only as a record
        meta["nominal_width"] = width
        width = None
    doc = make_document(d, res.folding, width, res.heights, meta)
    text = serialize_document(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out} ({d.n} vertices, folding {folding_string(res.folding)})")
    else:
        sys.stdout.write(text)
    return 0


def cmd_optimize(args) -> int:
    out = minimize_tan_sum(args.n, seeds=args.seeds, rng_seed=args.rng_seed)
    expected = args.n / math.tan(math.pi / args.n)
    print(f"n                  {args.n}")
    print(f"f_min              {out.f_min:.12f}")
    print(f"n*cot(pi/n)        {expected:.12f}")
    print(f"minimizer          {' '.join(f'{a:.12f}' for a in out.minimizer)}")
    print(f"lagrange_residual  {out.lagrange_residual:.3e}")
    print(f"iterations         {out.iterations}")
    print(f"multistart_spread  {out.multistart_spread:.3e}")
    print(f"active_bounds      {list(out.active_bounds)}")
    return 0


def cmd_enumerate(args) -> int:
    ks = sorted(enumerate_convex_linking(args.n))
    print(f"linking numbers on a convex {args.n}-gon: {{{', '.join(map(str, ks))}}}")
    table = convex_linking_table(args.n)
    print("Lk    #under  #over  foldings")
    for lk in sorted(table):
        for under, count in sorted(table[lk].items()):
            print(f"{lk:>3}  {under:>7}  {args.n - under:>5}  {count:>8}")
    return 0 if set(table) == set(ks) else 1


def cmd_svg(args) -> int:
    doc, d = _load(args.path, args.tolerance)
    w = args.width if args.width is not None else doc.width
    if w is None:
        w = max_feasible_width(d, doc.folding, args.tolerance)
    text = render_svg(d, doc.folding, w, title=Path(args.path).stem, tol=args.tolerance)
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=EPS_GEOM,
                        help="geometric tolerance (default %(default)g)")
    p = argparse.ArgumentParser(prog="ribbonforge", description="Folded ribbon knot toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="report Rib, Lk, Tw, Wr for a document")
    a.add_argument("path", help="diagram document (JSON)")
    a.add_argument("--width", type=float, help="override the document width")
    a.add_argument("--json", action="store_true", help="print JSON instead of a table")
    a.add_argument("--check-identity", action="store_true",
                   help="exit 1 unless Lk = Tw + Wr (annulus) or Tw + 2Wr (Moebius)")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", parents=[common], help="write a standard construction")
    c.add_argument("kind", choices=CONSTRUCT_KINDS)
    c.add_argument("--n", type=int, default=3, help="polygon size, or |Lk| for annulus-lk-n")
    c.add_argument("--k", type=int, default=1, help="linking number for regular-ngon")
    c.add_argument("--sign", type=int, choices=(-1, 1), default=1, help="sign of Lk for four-stick and annulus-lk-n")
    c.add_argument("--eps", type=float, default=1.0, help="edge length for two-stick")
    c.add_argument("--width", type=float, help="ribbon width for two-stick, four-stick and annulus-lk-n (default 1)")
    c.add_argument("--opened", action="store_true", help="write the separated-layer variant")
    c.add_argument("--sum-with", type=int, help="splice a staircase unknot with this Lk")
    c.add_argument("--vertex", type=int, default=0, help="splice vertex for --sum-with")
    c.add_argument("--out", help="output path (default stdout)")
    c.set_defaults(func=cmd_construct)

    o = sub.add_parser("optimize", parents=[common], help="minimize the tan-sum over n angles")
    o.add_argument("--n", type=int, required=True, help="number of angles")
    o.add_argument("--seeds", type=int, default=20, help="multistart seeds (at least 20)")
    o.add_argument("--rng-seed", type=int, default=0, help="seed for the start points")
    o.set_defaults(func=cmd_optimize)

    e = sub.add_parser("enumerate", parents=[common], help="linking numbers on a convex n-gon")
    e.add_argument("--n", type=int, required=True, help="number of vertices")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("svg", parents=[common], help="render a document as SVG")
    s.add_argument("path", help="diagram document (JSON)")
    s.add_argument("out", help="SVG file to write")
    s.add_argument("--width", type=float, help="override the document width")
    s.set_defaults(func=cmd_svg)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleWidthError, ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
