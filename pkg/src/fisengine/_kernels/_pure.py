"""Pure-Python reference versions of the hot kernels.

Every function here has a twin in ``_core.pyx`` with the same signature and
the same results; the compiled one is preferred when it is importable.
"""

# Moore neighbourhood in clockwise order for y-down images, as (drow, dcol),
# starting at west.
NEIGHBOURS = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))


def bresenham(x0, y0, x1, y1):
    """Integer line from (x0, y0) to (x1, y1) inclusive, 8-connected."""
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
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


def _onward(cells, width, height, visited, r, c, r1, c1, r2, c2):
    """Unvisited 1-neighbours of (r, c) other than (r1, c1) and (r2, c2)."""
    n = 0
    for dr, dc in NEIGHBOURS:
        rr, cc = r + dr, c + dc
        if (rr == r1 and cc == c1) or (rr == r2 and cc == c2):
            continue
        if 0 <= rr < height and 0 <= cc < width:
            pos = rr * width + cc
            if cells[pos] and not visited[pos]:
                n += 1
    return n


def moore_walk(cells, width, height, start_row, start_col, backtrack, visited):
    """Follow a thin chain from a start cell.

    At every cell the 8 neighbours are scanned clockwise beginning just after
    the backtrack direction (the direction pointing at the previous cell), and
    the first unvisited 1-cell is taken.  At a corner clump a diagonal move
    yields to the 4-neighbour after it when that cell would otherwise be
    stranded, so corner cells are not skipped.  ``visited`` is a bytearray the size
    of the grid and is updated in place.  Returns the list of (row, col)
    visited, start included.
    """
    path = [(start_row, start_col)]
    visited[start_row * width + start_col] = 1
    r, c = start_row, start_col
    back = backtrack
    while True:
        nxt = -1
        for k in range(1, 9):
            d = (back + k) % 8
            dr, dc = NEIGHBOURS[d]
            rr, cc = r + dr, c + dc
            if 0 <= rr < height and 0 <= cc < width:
                pos = rr * width + cc
                if cells[pos] and not visited[pos]:
                    nxt = d
                    break
        if nxt < 0:
            return path
        if nxt % 2:
            # corner clump: the diagonal target and the 4-neighbour after it
            # touch each other; enter the one that would otherwise be a dead end
            d2 = (nxt + 1) % 8
            fr, fc = r + NEIGHBOURS[d2][0], c + NEIGHBOURS[d2][1]
            if 0 <= fr < height and 0 <= fc < width and cells[fr * width + fc] \
                    and not visited[fr * width + fc]:
                tr, tc = r + NEIGHBOURS[nxt][0], c + NEIGHBOURS[nxt][1]
                if _onward(cells, width, height, visited, fr, fc, r, c, tr, tc) == 0 \
                        and _onward(cells, width, height, visited, tr, tc, r, c, fr, fc) > 0:
                    nxt = d2
        dr, dc = NEIGHBOURS[nxt]
        r, c = r + dr, c + dc
        visited[r * width + c] = 1
        path.append((r, c))
        back = (nxt + 4) % 8


def longest_common_substring(a, b):
    """Longest common contiguous run of two integer sequences.

    Returns ``(length, start_in_a, start_in_b)``.  Ties go to the earliest
    start in ``a``, then the earliest start in ``b``.  Length 0 means no
    common element.
    """
    n, m = len(a), len(b)
    best = 0
    best_i = 0
    best_j = 0
    prev = [0] * (m + 1)
    for i in range(1, n + 1):
        cur = [0] * (m + 1)
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                v = prev[j - 1] + 1
                cur[j] = v
                si, sj = i - v, j - v
                if v > best or (v == best and (si < best_i or (si == best_i and sj < best_j))):
                    best, best_i, best_j = v, si, sj
        prev = cur
    return best, best_i, best_j


def _distance(p, a, b):
    (py, px), (ay, ax), (by, bx) = p, a, b
    dx, dy = bx - ax, by - ay
    if dx == 0 and dy == 0:
        return ((px - ax) ** 2 + (py - ay) ** 2) ** 0.5
    return abs(dy * (px - ax) - dx * (py - ay)) / (dx * dx + dy * dy) ** 0.5


def douglas_peucker(points, epsilon):
    """Indices of the points kept by Douglas-Peucker simplification.

    First and last indices are always kept; the result is sorted.
    """
    n = len(points)
    if n < 3:
        return list(range(n))
    keep = [False] * n
    keep[0] = keep[n - 1] = True
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        far, far_d = -1, -1.0
        a, b = points[lo], points[hi]
        for k in range(lo + 1, hi):
            d = _distance(points[k], a, b)
            if d > far_d:
                far, far_d = k, d
        if far_d > epsilon:
            keep[far] = True
            stack.append((lo, far))
            stack.append((far, hi))
    return [k for k in range(n) if keep[k]]
