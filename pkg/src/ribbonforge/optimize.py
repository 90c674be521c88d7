"""Minimizing sum(tan(alpha_i / 2)) over the angles of a convex polygon.

For a perimeter-1 convex diagram whose gaps all close at once the largest
width is ``1 / sum(tan(alpha_i / 2))``, so minimizing the tan-sum under
``sum(alpha) = (n - 2) pi`` maximizes width. The objective is separable and
strictly convex, so a Newton step restricted to the constraint hyperplane
followed by projection onto the box converges in a handful of iterations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .diagram import polygon_from_angles
from .ribbon import max_width_batch

TOL_ANGLE = 1e-8
TOL_F = 1e-10
EPS_OPT = 1e-9
MAX_ITERS = 100_000
UPPER_MARGIN = 1e-6


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class AngleDomain:
    lower: float
    upper: float
    total: float

    def contains(self, a: Sequence[float], tol: float = EPS_OPT) -> bool:
        x = np.asarray(a, dtype=float)
        return bool(
            np.all(x >= self.lower - tol)
            and np.all(x <= self.upper + tol)
            and abs(x.sum() - self.total) <= tol * max(1.0, len(x))
        )


def default_domain(n: int) -> AngleDomain:
    """``(0, pi)`` for triangles, the obtuse face ``[pi/2, pi)`` for n >= 4."""
    if n < 3:
        raise ValueError("polygons need at least 3 angles")
    total = (n - 2) * math.pi
    if n == 3:
        return AngleDomain(1e-12, math.pi - 1e-12, total)
    return AngleDomain(math.pi / 2, math.pi - UPPER_MARGIN, total)


@dataclass(frozen=True)
class OptimizeOutcome:
    minimizer: tuple[float, ...]
    f_min: float
    lagrange_residual: float
    iterations: int
    multistart_spread: float
    active_bounds: tuple[int, ...]
    seeds: int


def tan_sum(a: Sequence[float]) -> float:
    x = np.asarray(a, dtype=float)
    if np.any(x <= 0) or np.any(x >= math.pi):
        raise ValueError("angles must lie strictly between 0 and pi")
    return float(np.tan(x / 2).sum())


def tan_sum_gradient(a: Sequence[float]) -> np.ndarray:
    x = np.asarray(a, dtype=float)
    return 0.5 / np.cos(x / 2) ** 2


def _tan_sum_curvature(x: np.ndarray) -> np.ndarray:
    c = np.cos(x / 2)
    return 0.5 * np.sin(x / 2) / c**3


def lagrange_residual(a: Sequence[float], total: float | None = None) -> float:
    """Spread of ``sec^2(alpha_i / 2)`` plus the angle-sum violation."""
    x = np.asarray(a, dtype=float)
    if total is None:
        total = (len(x) - 2) * math.pi
    sec2 = 1.0 / np.cos(x / 2) ** 2
    return float(sec2.max() - sec2.min() + abs(x.sum() - total))


def project(x: np.ndarray, dom: AngleDomain) -> np.ndarray:
    """Euclidean projection onto ``{lower <= x_i <= upper, sum x = total}``."""
    n = len(x)
    if not n * dom.lower - EPS_OPT <= dom.total <= n * dom.upper + EPS_OPT:
        raise ValueError("angle domain is empty")

    def excess(shift: float) -> float:
        return float(np.clip(x - shift, dom.lower, dom.upper).sum() - dom.total)

    lo = float(x.min() - dom.upper) - 1.0
    hi = float(x.max() - dom.lower) + 1.0
    if excess(lo) * excess(hi) > 0:
        # the domain is a single point (every angle pinned to one bound)
        return np.clip(np.full(n, dom.total / n), dom.lower, dom.upper)
    shift = brentq(excess, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return np.clip(x - shift, dom.lower, dom.upper)


def _descend(x0: np.ndarray, dom: AngleDomain, max_iters: int) -> tuple[np.ndarray, int]:
    x = project(np.asarray(x0, dtype=float), dom)
    fx = float(np.tan(x / 2).sum())
    for it in range(1, max_iters + 1):
        g = tan_sum_gradient(x)
        h = _tan_sum_curvature(x)
        at_lo = x <= dom.lower + 1e-15
        at_hi = x >= dom.upper - 1e-15
        free = ~(at_lo | at_hi)
        # release pinned coordinates whose descent direction points inward
        for _ in range(len(x) + 1):
            inv = np.where(free, 1.0 / h, 0.0)
            lam = float((g * inv).sum() / inv.sum()) if inv.sum() > 0 else float(g.mean())
            release = ~free & ((at_lo & (g < lam)) | (at_hi & (g > lam)))
            if not release.any():
                break
            free |= release
        if not free.any() or float(np.abs((g - lam)[free]).max()) < 1e-13:
            return x, it
        step = -(g - lam) * inv
        t = 1.0
        while True:
            cand = project(x + t * step, dom)
            fc = float(np.tan(cand / 2).sum())
            if fc <= fx + 1e-14 * abs(fx) or t < 1e-12:
                break
            t *= 0.5
        moved = float(np.abs(cand - x).max())
        x, fx = cand, fc
        if moved < 1e-15:
            return x, it
    raise ConvergenceError(f"no convergence after {max_iters} iterations (last step {moved:.3e})")


def _seed_points(n: int, dom: AngleDomain, seeds: int | np.ndarray, rng_seed: int) -> np.ndarray:
    if isinstance(seeds, (int, np.integer)):
        if seeds < 20:
            raise ValueError("at least 20 multistart seeds are required")
        rng = np.random.default_rng(rng_seed)
        return rng.uniform(dom.lower, dom.upper, size=(int(seeds), n))
    starts = np.atleast_2d(np.asarray(seeds, dtype=float))
    if starts.shape[1] != n:
        raise ValueError(f"seed points must have {n} angles")
    return starts


def minimize_tan_sum(
    n: int,
    domain: AngleDomain | None = None,
    seeds: int | np.ndarray = 20,
    rng_seed: int = 0,
    max_iters: int = MAX_ITERS,
) -> OptimizeOutcome:
    """Multistart minimization of the tan-sum over the angle domain.

    ``seeds`` is either a count of random starting points or an explicit
    array of them. Each run is independent; the outcome reports the best one
    and the largest coordinate-wise distance between any run and it.
    """
    dom = domain or default_domain(n)
    starts = _seed_points(n, dom, seeds, rng_seed)
    runs = [_descend(s, dom, max_iters) for s in starts]
    values = [float(np.tan(x / 2).sum()) for x, _ in runs]
    best = int(np.argmin(values))
    xb = runs[best][0]
    spread = max(float(np.abs(x - xb).max()) for x, _ in runs)
    active = tuple(
        int(i) for i in np.flatnonzero((xb <= dom.lower + EPS_OPT) | (xb >= dom.upper - EPS_OPT))
    )
    return OptimizeOutcome(
        minimizer=tuple(float(v) for v in xb),
        f_min=values[best],
        lagrange_residual=lagrange_residual(xb, dom.total),
        iterations=max(it for _, it in runs),
        multistart_spread=spread,
        active_bounds=active,
        seeds=len(starts),
    )


@dataclass(frozen=True)
class BlowupTable:
    n: int
    rows: tuple[tuple[float, float], ...]  # (eps, tan_sum)
    equiangular: float

    @property
    def strictly_increasing(self) -> bool:
        ordered = sorted(self.rows, key=lambda r: -r[0])
        return all(b[1] > a[1] for a, b in zip(ordered, ordered[1:]))


def blowup_angles(n: int, eps: float) -> np.ndarray:
    """One angle at ``pi - eps``, the remaining ones sharing what is left."""
    total = (n - 2) * math.pi
    first = math.pi - eps
    return np.array([first] + [(total - first) / (n - 1)] * (n - 1))


def boundary_blowup_check(n: int, eps_list: Iterable[float]) -> BlowupTable:
    rows = tuple((float(e), tan_sum(blowup_angles(n, e))) for e in eps_list)
    eq = n / math.tan(math.pi / n)
    return BlowupTable(n, rows, eq)


@dataclass(frozen=True)
class TriangleSearchReport:
    samples: int
    max_width: float
    argmax_angles: tuple[float, float, float]
    equilateral_width: float
    bound: float

    @property
    def bound_holds(self) -> bool:
        return self.max_width <= self.bound + EPS_OPT

    @property
    def argmax_equilateral(self) -> bool:
        return all(abs(a - math.pi / 3) <= TOL_ANGLE for a in self.argmax_angles)


def random_triangles(samples: int, rng_seed: int = 0) -> np.ndarray:
    """Counterclockwise perimeter-1 triangles, shape (samples, 3, 2)."""
    rng = np.random.default_rng(rng_seed)
    tri = rng.normal(size=(samples, 3, 2))
    e1 = tri[:, 1] - tri[:, 0]
    e2 = tri[:, 2] - tri[:, 0]
    cw = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    tri[cw] = tri[cw][:, ::-1]
    per = np.linalg.norm(np.roll(tri, -1, axis=1) - tri, axis=2).sum(axis=1)
    return tri / per[:, None, None]


def _triangle_angles(t: np.ndarray) -> tuple[float, float, float]:
    out = []
    for i in range(3):
        a = t[i - 1] - t[i]
        b = t[(i + 1) % 3] - t[i]
        c = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        out.append(math.acos(max(-1.0, min(1.0, c))))
    return tuple(out)


def triangle_width_search(samples: int = 100_000, rng_seed: int = 0) -> TriangleSearchReport:
    """Largest gap-formula width over random triangles plus the equilateral one."""
    if samples < 10_000:
        raise ValueError("use at least 10^4 random triangles")
    tri = random_triangles(samples, rng_seed)
    eq = np.asarray(polygon_from_angles([math.pi / 3] * 3, [1 / 3] * 3).points)
    batch = np.concatenate([tri, eq[None]], axis=0)
    widths = max_width_batch(batch)
    k = int(np.argmax(widths))
    return TriangleSearchReport(
        samples=samples,
        max_width=float(widths[k]),
        argmax_angles=_triangle_angles(batch[k]),
        equilateral_width=float(widths[-1]),
        bound=1 / math.sqrt(3),
    )
