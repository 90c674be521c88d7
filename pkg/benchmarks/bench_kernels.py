"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per kernel with the best-of-N time for each backend and the
speedup. Inputs are fixed-seed so runs are comparable.
"""
import argparse
import timeit

import numpy as np

from ribbonforge import _pykernels
from ribbonforge.optimize import random_triangles

try:
    from ribbonforge import _ckernels
except ImportError:
    _ckernels = None


def _cases():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0, 2 * np.pi, 120))
    curve = np.column_stack([np.cos(t), np.sin(t), 0.3 * np.sin(3 * t)])
    segs = [rng.uniform(-1, 1, (400, 2)) for _ in range(4)]
    tri = random_triangles(100_000, rng_seed=0)
    return {
        "polyline_writhe (120 pts)": ("polyline_writhe", (curve,)),
        "segment_intersections (400x400)": ("segment_intersections", (*segs, 1e-12)),
        "convex_max_width_batch (1e5 triangles)": ("convex_max_width_batch", (tri,)),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'kernel':40s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for label, (name, call_args) in _cases().items():
        py = min(timeit.repeat(lambda: getattr(_pykernels, name)(*call_args), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{label:40s} {py * 1e3:12.2f} {'-':>12s} {'-':>8s}")
            continue
        cy = min(timeit.repeat(lambda: getattr(_ckernels, name)(*call_args), number=1, repeat=args.repeat))
        print(f"{label:40s} {py * 1e3:12.2f} {cy * 1e3:12.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
