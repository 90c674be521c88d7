# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in :mod:`ribbonforge._pykernels`.

Signatures and return values match the NumPy fallback exactly; the test
suite runs both implementations against each other.
"""
import numpy as np
from libc.math cimport asin, sqrt, fabs, M_PI


cdef inline double _clip(double x) nogil:
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


cdef double _pair_solid_angle(const double[:, ::1] p, Py_ssize_t i, Py_ssize_t j,
                              Py_ssize_t n) nogil:
    cdef Py_ssize_t i2 = (i + 1) % n
    cdef Py_ssize_t j2 = (j + 1) % n
    cdef double r13[3]
    cdef double r14[3]
    cdef double r23[3]
    cdef double r24[3]
    cdef double r12[3]
    cdef double r34[3]
    cdef double nv[4][3]
    cdef double norm, total, orient, cx, cy, cz
    cdef int k, m
    for k in range(3):
        r13[k] = p[j, k] - p[i, k]
        r14[k] = p[j2, k] - p[i, k]
        r23[k] = p[j, k] - p[i2, k]
        r24[k] = p[j2, k] - p[i2, k]
        r12[k] = p[i2, k] - p[i, k]
        r34[k] = p[j2, k] - p[j, k]
    _cross(r13, r14, nv[0])
    _cross(r14, r24, nv[1])
    _cross(r24, r23, nv[2])
    _cross(r23, r13, nv[3])
    for m in range(4):
        norm = sqrt(nv[m][0] * nv[m][0] + nv[m][1] * nv[m][1] + nv[m][2] * nv[m][2])
        if norm == 0.0:
            return 0.0
        for k in range(3):
            nv[m][k] /= norm
    total = 0.0
    for m in range(4):
        total += asin(_clip(nv[m][0] * nv[(m + 1) % 4][0]
                            + nv[m][1] * nv[(m + 1) % 4][1]
                            + nv[m][2] * nv[(m + 1) % 4][2]))
    cx = r34[1] * r12[2] - r34[2] * r12[1]
    cy = r34[2] * r12[0] - r34[0] * r12[2]
    cz = r34[0] * r12[1] - r34[1] * r12[0]
    orient = cx * r13[0] + cy * r13[1] + cz * r13[2]
    if orient > 0.0:
        return total
    if orient < 0.0:
        return -total
    return 0.0


cdef inline void _cross(double* a, double* b, double* out) nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


def polyline_writhe(points):
    cdef const double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                acc += _pair_solid_angle(p, i, j, n)
    return acc / (2.0 * M_PI)


def segment_intersections(a0, a1, b0, b1, double tol):
    cdef const double[:, ::1] p = np.ascontiguousarray(a0, dtype=np.float64)
    cdef const double[:, ::1] q = np.ascontiguousarray(a1, dtype=np.float64)
    cdef const double[:, ::1] r = np.ascontiguousarray(b0, dtype=np.float64)
    cdef const double[:, ::1] s = np.ascontiguousarray(b1, dtype=np.float64)
    cdef Py_ssize_t na = p.shape[0], nb = r.shape[0]
    cdef Py_ssize_t i, j, k = 0
    cdef double dax, day, dbx, dby, ex, ey, den, la, lb, u, v
    # worst case every pair hits; trimmed before returning
    out_i = np.empty(na * nb, dtype=np.intp)
    out_j = np.empty(na * nb, dtype=np.intp)
    out_s = np.empty(na * nb, dtype=np.float64)
    out_t = np.empty(na * nb, dtype=np.float64)
    cdef Py_ssize_t[::1] vi = out_i
    cdef Py_ssize_t[::1] vj = out_j
    cdef double[::1] vs = out_s
    cdef double[::1] vt = out_t
    with nogil:
        for i in range(na):
            dax = q[i, 0] - p[i, 0]
            day = q[i, 1] - p[i, 1]
            la = sqrt(dax * dax + day * day)
            for j in range(nb):
                dbx = s[j, 0] - r[j, 0]
                dby = s[j, 1] - r[j, 1]
                lb = sqrt(dbx * dbx + dby * dby)
                den = dax * dby - day * dbx
                if fabs(den) <= tol * la * lb:
                    continue
                ex = r[j, 0] - p[i, 0]
                ey = r[j, 1] - p[i, 1]
                u = (ex * dby - ey * dbx) / den
                v = (ex * day - ey * dax) / den
                if u < -tol or u > 1.0 + tol or v < -tol or v > 1.0 + tol:
                    continue
                vi[k] = i
                vj[k] = j
                vs[k] = u
                vt[k] = v
                k += 1
    return out_i[:k].copy(), out_j[:k].copy(), out_s[:k].copy(), out_t[:k].copy()


def convex_max_width_batch(polygons):
    cdef const double[:, :, ::1] P = np.ascontiguousarray(polygons, dtype=np.float64)
    cdef Py_ssize_t m = P.shape[0], n = P.shape[1]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, i, ip, inx
    cdef double best, ax, ay, bx, by, la, lb, c, edge, w
    cdef double[64] tans
    if n > 64:
        raise ValueError("convex_max_width_batch supports at most 64 vertices")
    with nogil:
        for k in range(m):
            for i in range(n):
                ip = (i + n - 1) % n
                inx = (i + 1) % n
                ax = P[k, ip, 0] - P[k, i, 0]
                ay = P[k, ip, 1] - P[k, i, 1]
                bx = P[k, inx, 0] - P[k, i, 0]
                by = P[k, inx, 1] - P[k, i, 1]
                la = sqrt(ax * ax + ay * ay)
                lb = sqrt(bx * bx + by * by)
                c = _clip((ax * bx + ay * by) / (la * lb))
                # tan(alpha/2) from cos(alpha) without calling acos
                tans[i] = sqrt((1.0 - c) / (1.0 + c)) if c > -1.0 else 1e300
            best = 1e300
            for i in range(n):
                inx = (i + 1) % n
                bx = P[k, inx, 0] - P[k, i, 0]
                by = P[k, inx, 1] - P[k, i, 1]
                edge = sqrt(bx * bx + by * by)
                w = 2.0 * edge / (tans[i] + tans[inx])
                if w < best:
                    best = w
            out[k] = best
    return out_arr
