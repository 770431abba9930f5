# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pure.py``."""

from libc.math cimport sqrt, fabs
from libc.stdlib cimport malloc, calloc, free

cdef int DROW[8]
cdef int DCOL[8]
DROW[:] = [0, -1, -1, -1, 0, 1, 1, 1]
DCOL[:] = [-1, -1, 0, 1, 1, 1, 0, -1]


def bresenham(int x0, int y0, int x1, int y1):
    cdef int dx = abs(x1 - x0)
    cdef int dy = -abs(y1 - y0)
    cdef int sx = 1 if x0 < x1 else -1
    cdef int sy = 1 if y0 < y1 else -1
    cdef int err = dx + dy
    cdef int e2
    cdef int x = x0, y = y0
    points = []
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return points


cdef int _onward(const unsigned char[:] cells, int width, int height,
                 unsigned char[:] visited, int r, int c, int r1, int c1, int r2, int c2):
    cdef int n = 0, d, rr, cc, pos
    for d in range(8):
        rr = r + DROW[d]
        cc = c + DCOL[d]
        if (rr == r1 and cc == c1) or (rr == r2 and cc == c2):
            continue
        if 0 <= rr < height and 0 <= cc < width:
            pos = rr * width + cc
            if cells[pos] and not visited[pos]:
                n += 1
    return n


def moore_walk(const unsigned char[:] cells, int width, int height,
               int start_row, int start_col, int backtrack,
               unsigned char[:] visited):
    cdef int r = start_row, c = start_col, back = backtrack
    cdef int k, d, rr, cc, pos, nxt, fr, fc, tr, tc
    path = [(start_row, start_col)]
    visited[start_row * width + start_col] = 1
    while True:
        nxt = -1
        for k in range(1, 9):
            d = (back + k) % 8
            rr = r + DROW[d]
            cc = c + DCOL[d]
            if 0 <= rr < height and 0 <= cc < width:
                pos = rr * width + cc
                if cells[pos] and not visited[pos]:
                    nxt = d
                    break
        if nxt < 0:
            return path
        if nxt % 2:
            d = (nxt + 1) % 8
            fr = r + DROW[d]
            fc = c + DCOL[d]
            if 0 <= fr < height and 0 <= fc < width and cells[fr * width + fc] \
                    and not visited[fr * width + fc]:
                tr = r + DROW[nxt]
                tc = c + DCOL[nxt]
                if _onward(cells, width, height, visited, fr, fc, r, c, tr, tc) == 0 \
                        and _onward(cells, width, height, visited, tr, tc, r, c, fr, fc) > 0:
                    nxt = d
        r += DROW[nxt]
        c += DCOL[nxt]
        visited[r * width + c] = 1
        path.append((r, c))
        back = (nxt + 4) % 8


def longest_common_substring(a, b):
    cdef Py_ssize_t n = len(a), m = len(b)
    cdef Py_ssize_t i, j, si, sj
    cdef long v, best = 0
    cdef Py_ssize_t best_i = 0, best_j = 0
    if n == 0 or m == 0:
        return 0, 0, 0
    cdef long *aa = <long *> malloc(n * sizeof(long))
    cdef long *bb = <long *> malloc(m * sizeof(long))
    cdef long *prev = <long *> calloc(m + 1, sizeof(long))
    cdef long *cur = <long *> calloc(m + 1, sizeof(long))
    cdef long *tmp
    try:
        for i in range(n):
            aa[i] = a[i]
        for j in range(m):
            bb[j] = b[j]
        for i in range(1, n + 1):
            cur[0] = 0
            for j in range(1, m + 1):
                if aa[i - 1] == bb[j - 1]:
                    v = prev[j - 1] + 1
                    cur[j] = v
                    si = i - v
                    sj = j - v
                    if v > best or (v == best and (si < best_i or (si == best_i and sj < best_j))):
                        best = v
                        best_i = si
                        best_j = sj
                else:
                    cur[j] = 0
            tmp = prev
            prev = cur
            cur = tmp
    finally:
        free(aa)
        free(bb)
        free(prev)
        free(cur)
    return best, best_i, best_j


cdef double _distance(double py, double px, double ay, double ax, double by, double bx):
    cdef double dx = bx - ax, dy = by - ay
    if dx == 0 and dy == 0:
        return sqrt((px - ax) ** 2 + (py - ay) ** 2)
    return fabs(dy * (px - ax) - dx * (py - ay)) / sqrt(dx * dx + dy * dy)


def douglas_peucker(points, double epsilon):
    cdef Py_ssize_t n = len(points)
    cdef Py_ssize_t lo, hi, k, far
    cdef double far_d, d
    if n < 3:
        return list(range(n))
    cdef double *ys = <double *> malloc(n * sizeof(double))
    cdef double *xs = <double *> malloc(n * sizeof(double))
    cdef unsigned char *keep = <unsigned char *> calloc(n, 1)
    try:
        for k in range(n):
            ys[k] = points[k][0]
            xs[k] = points[k][1]
        keep[0] = 1
        keep[n - 1] = 1
        stack = [(0, n - 1)]
        while stack:
            lo, hi = stack.pop()
            if hi - lo < 2:
                continue
            far = -1
            far_d = -1.0
            for k in range(lo + 1, hi):
                d = _distance(ys[k], xs[k], ys[lo], xs[lo], ys[hi], xs[hi])
                if d > far_d:
                    far = k
                    far_d = d
            if far_d > epsilon:
                keep[far] = 1
                stack.append((lo, far))
                stack.append((far, hi))
        return [k for k in range(n) if keep[k]]
    finally:
        free(ys)
        free(xs)
        free(keep)
