# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels; hot loops of freeze-frame feature extraction.

Same contracts as ``shotspeak._kernels_py``.
"""

from libc.math cimport sqrt, INFINITY

BACKEND = "compiled"


def count_in_triangle(double ax, double ay, double bx, double by,
                      double cx, double cy,
                      double[::1] xs, double[::1] ys, double eps):
    cdef double area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    cdef double orient = 1.0 if area2 > 0 else -1.0
    cdef double len_ab = sqrt((bx - ax) ** 2 + (by - ay) ** 2)
    cdef double len_bc = sqrt((cx - bx) ** 2 + (cy - by) ** 2)
    cdef double len_ca = sqrt((ax - cx) ** 2 + (ay - cy) ** 2)
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef int count = 0
    cdef double px, py, d_ab, d_bc, d_ca
    for i in range(n):
        px = xs[i]
        py = ys[i]
        d_ab = orient * ((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / len_ab
        if d_ab < -eps:
            continue
        d_bc = orient * ((cx - bx) * (py - by) - (cy - by) * (px - bx)) / len_bc
        if d_bc < -eps:
            continue
        d_ca = orient * ((ax - cx) * (py - cy) - (ay - cy) * (px - cx)) / len_ca
        if d_ca < -eps:
            continue
        count += 1
    return count


def count_on_segment(double px, double py, double qx, double qy,
                     double[::1] xs, double[::1] ys, double eps):
    cdef double dx = qx - px
    cdef double dy = qy - py
    cdef double seg_sq = dx * dx + dy * dy
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef int count = 0
    cdef double t, ex, ey
    for i in range(n):
        if seg_sq == 0.0:
            t = 0.0
        else:
            t = ((xs[i] - px) * dx + (ys[i] - py) * dy) / seg_sq
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        ex = xs[i] - (px + t * dx)
        ey = ys[i] - (py + t * dy)
        if sqrt(ex * ex + ey * ey) <= eps:
            count += 1
    return count


def count_within(double sx, double sy, double[::1] xs, double[::1] ys,
                 double radius, double eps):
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef int count = 0
    cdef double dx, dy, limit = radius + eps
    for i in range(n):
        dx = xs[i] - sx
        dy = ys[i] - sy
        if sqrt(dx * dx + dy * dy) <= limit:
            count += 1
    return count


def min_distance(double sx, double sy, double[::1] xs, double[::1] ys):
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double best = INFINITY
    cdef double dx, dy, d
    for i in range(n):
        dx = xs[i] - sx
        dy = ys[i] - sy
        d = sqrt(dx * dx + dy * dy)
        if d < best:
            best = d
    return best
