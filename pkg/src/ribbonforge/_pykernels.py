"""NumPy implementations of the numerical hot loops.

These are the reference versions. ``_ckernels`` (Cython) mirrors them
function-for-function and is preferred when it has been built.
"""
from __future__ import annotations

import numpy as np


def _unit_rows(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norm = np.linalg.norm(v, axis=-1)
    ok = norm > 0.0
    out = np.zeros_like(v)
    out[ok] = v[ok] / norm[ok][:, None]
    return out, ok


def polyline_writhe(points) -> float:
    """Writhe of a closed 3D polyline by the exact segment-pair solid angle sum.

    Each non-adjacent pair of segments contributes the signed solid angle of
    the quadrilateral of connecting directions (Klenin and Langowski, 2000);
    the writhe is the sum over unordered pairs divided by 2*pi.
    """
    p = np.ascontiguousarray(points, dtype=np.float64)
    n = len(p)
    if n < 4:
        return 0.0
    ii, jj = np.triu_indices(n, k=2)
    keep = ~((ii == 0) & (jj == n - 1))
    ii, jj = ii[keep], jj[keep]
    p1, p2 = p[ii], p[(ii + 1) % n]
    p3, p4 = p[jj], p[(jj + 1) % n]
    r13, r14, r23, r24 = p3 - p1, p4 - p1, p3 - p2, p4 - p2
    n1, ok1 = _unit_rows(np.cross(r13, r14))
    n2, ok2 = _unit_rows(np.cross(r14, r24))
    n3, ok3 = _unit_rows(np.cross(r24, r23))
    n4, ok4 = _unit_rows(np.cross(r23, r13))

    def _asin_dot(a, b):
        return np.arcsin(np.clip(np.einsum("ij,ij->i", a, b), -1.0, 1.0))

    omega = _asin_dot(n1, n2) + _asin_dot(n2, n3) + _asin_dot(n3, n4) + _asin_dot(n4, n1)
    orient = np.einsum("ij,ij->i", np.cross(p4 - p3, p2 - p1), r13)
    omega = omega * np.sign(orient)
    omega[~(ok1 & ok2 & ok3 & ok4)] = 0.0
    return float(omega.sum() / (2.0 * np.pi))


def segment_intersections(a0, a1, b0, b1, tol: float):
    """All non-parallel intersecting pairs between two families of 2D segments.

    Returns index arrays ``(i, j)`` and the parameters ``(s, t)`` of the
    intersection point along segment ``a[i]`` and ``b[j]``. Parameters within
    ``tol`` of [0, 1] are kept, so the caller decides how to treat endpoint
    contacts.
    """
    a0 = np.asarray(a0, dtype=np.float64)
    b0 = np.asarray(b0, dtype=np.float64)
    da = np.asarray(a1, dtype=np.float64) - a0
    db = np.asarray(b1, dtype=np.float64) - b0
    la = np.linalg.norm(da, axis=1)[:, None]
    lb = np.linalg.norm(db, axis=1)[None, :]
    den = da[:, None, 0] * db[None, :, 1] - da[:, None, 1] * db[None, :, 0]
    ex = b0[None, :, 0] - a0[:, None, 0]
    ey = b0[None, :, 1] - a0[:, None, 1]
    transverse = np.abs(den) > tol * la * lb
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (ex * db[None, :, 1] - ey * db[None, :, 0]) / den
        t = (ex * da[:, None, 1] - ey * da[:, None, 0]) / den
    hit = transverse & (s >= -tol) & (s <= 1.0 + tol) & (t >= -tol) & (t <= 1.0 + tol)
    i, j = np.nonzero(hit)
    return i.astype(np.intp), j.astype(np.intp), s[i, j], t[i, j]


def convex_max_width_batch(polygons) -> np.ndarray:
    """Largest feasible width for each convex polygon in a stacked batch.

    ``polygons`` has shape (m, n, 2). The width on edge i is limited by
    ``2|e_i| / (tan(a_i/2) + tan(a_{i+1}/2))`` where ``a`` are the interior
    angles; the polygon's width is the minimum over its edges.
    """
    P = np.asarray(polygons, dtype=np.float64)
    prev = np.roll(P, 1, axis=1) - P
    nxt = np.roll(P, -1, axis=1) - P
    lp = np.linalg.norm(prev, axis=2)
    ln = np.linalg.norm(nxt, axis=2)
    c = np.clip(np.einsum("mij,mij->mi", prev, nxt) / (lp * ln), -1.0, 1.0)
    with np.errstate(divide="ignore"):
        tans = np.sqrt((1.0 - c) / (1.0 + c))
    limits = 2.0 * ln / (tans + np.roll(tans, -1, axis=1))
    return limits.min(axis=1)
