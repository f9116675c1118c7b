# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel loops for depth sampling and disk rendering."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cpdef int disk_min(const cnp.uint16_t[:, ::1] data, int u, int v, int radius):
    """Minimum nonzero value within the integer disk; 0 when none."""
    cdef Py_ssize_t h = data.shape[0], w = data.shape[1]
    cdef int r2 = radius * radius
    cdef int y0 = v - radius if v - radius > 0 else 0
    cdef int y1 = v + radius if v + radius < h - 1 else <int>(h - 1)
    cdef int x0, x1, x, y, dy, dx
    cdef int best = 65536
    cdef int val
    for y in range(y0, y1 + 1):
        dy = y - v
        x0 = u - radius if u - radius > 0 else 0
        x1 = u + radius if u + radius < w - 1 else <int>(w - 1)
        for x in range(x0, x1 + 1):
            dx = x - u
            if dx * dx + dy * dy > r2:
                continue
            val = data[y, x]
            if val != 0 and val < best:
                best = val
    return 0 if best == 65536 else best


def disk_min_many(const cnp.uint16_t[:, ::1] data, us, vs, int radius):
    cdef cnp.int64_t[::1] uu = np.ascontiguousarray(us, dtype=np.int64)
    cdef cnp.int64_t[::1] vv = np.ascontiguousarray(vs, dtype=np.int64)
    cdef Py_ssize_t n = uu.shape[0], i
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    for i in range(n):
        o[i] = disk_min(data, <int>uu[i], <int>vv[i], radius)
    return out


def render_disks(cnp.uint16_t[:, ::1] out, us, vs, depths, double radius):
    """Composite flat disks into ``out`` keeping the nearest (smallest) value."""
    cdef double[::1] uu = np.ascontiguousarray(us, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(vs, dtype=np.float64)
    cdef cnp.uint16_t[::1] dd = np.ascontiguousarray(depths, dtype=np.uint16)
    cdef Py_ssize_t h = out.shape[0], w = out.shape[1]
    cdef Py_ssize_t n = uu.shape[0], i
    cdef double r2 = radius * radius, cu, cv, ddx, ddy
    cdef long x0, x1, y0, y1, x, y
    cdef cnp.uint16_t d
    for i in range(n):
        cu = uu[i]
        cv = vv[i]
        d = dd[i]
        if d == 0:
            continue
        x0 = <long>(cu - radius) - 1
        x1 = <long>(cu + radius) + 1
        y0 = <long>(cv - radius) - 1
        y1 = <long>(cv + radius) + 1
        if x0 < 0:
            x0 = 0
        if y0 < 0:
            y0 = 0
        if x1 > w - 1:
            x1 = w - 1
        if y1 > h - 1:
            y1 = h - 1
        for y in range(y0, y1 + 1):
            ddy = y - cv
            for x in range(x0, x1 + 1):
                ddx = x - cu
                if ddx * ddx + ddy * ddy <= r2:
                    if out[y, x] == 0 or d < out[y, x]:
                        out[y, x] = d
