"""Slow, independent reference computations used as test oracles."""

from itertools import combinations, permutations, product

import numpy as np


def point_rows(f, A):
    """Rows of f_A as tuples, computed point by point from f's call interface."""
    n = f.n
    B = [i for i in range(n) if i not in A]
    rows = []
    for alpha in product(range(f.d), repeat=len(A)):
        row = []
        for beta in product(range(f.d), repeat=len(B)):
            x = [0] * n
            for i, v in zip(A, alpha):
                x[i] = v
            for i, v in zip(B, beta):
                x[i] = v
            row.append(f(x))
        rows.append(tuple(row))
    return rows


def nrows_mult(f, A):
    rows = point_rows(f, A)
    counts = {}
    for r in rows:
        counts[r] = counts.get(r, 0) + 1
    return len(counts), max(counts.values())


def s_oracle(f):
    return max(min(nrows_mult(f, A)[0] for A in combinations(range(f.n), k)) for k in range(f.n + 1))


def s_star_oracle(f):
    best = None
    for order in permutations(range(f.n)):
        worst = max(nrows_mult(f, order[:k])[0] for k in range(f.n + 1))
        best = worst if best is None else min(best, worst)
    return best


def all_rectangles(mat):
    """Every nonempty 1-rectangle R x C of a 0/1 matrix as a frozenset of cells."""
    r, c = mat.shape
    out = set()
    for rmask in range(1, 1 << r):
        rows = [i for i in range(r) if rmask >> i & 1]
        cols = [j for j in range(c) if all(mat[i, j] for i in rows)]
        for cmask in range(1, 1 << len(cols)):
            cs = [cols[t] for t in range(len(cols)) if cmask >> t & 1]
            out.add(frozenset((i, j) for i in rows for j in cs))
    return list(out)


def min_cover_brute(mat):
    ones = frozenset(zip(*np.nonzero(mat)))
    if not ones:
        return 0
    rects = all_rectangles(mat)
    for size in range(1, len(ones) + 1):
        for combo in combinations(rects, size):
            if frozenset().union(*combo) == ones:
                return size


def min_partition_brute(mat):
    ones = frozenset(zip(*np.nonzero(mat)))
    if not ones:
        return 0
    rects = all_rectangles(mat)
    for size in range(1, len(ones) + 1):
        for combo in combinations(rects, size):
            if sum(len(r) for r in combo) == len(ones) and frozenset().union(*combo) == ones:
                return size


def protocol_depth_one_exists(mat):
    """Some single bit, sent by either side, splits the matrix into two constant parts."""
    r, c = mat.shape
    for rmask in range(1, (1 << r) - 1):
        top = mat[[i for i in range(r) if rmask >> i & 1]]
        bot = mat[[i for i in range(r) if not rmask >> i & 1]]
        if (top == top.flat[0]).all() and (bot == bot.flat[0]).all():
            return True
    for cmask in range(1, (1 << c) - 1):
        left = mat[:, [j for j in range(c) if cmask >> j & 1]]
        right = mat[:, [j for j in range(c) if not cmask >> j & 1]]
        if (left == left.flat[0]).all() and (right == right.flat[0]).all():
            return True
    return False


def protocol_depth(mat):
    """Deterministic communication complexity by trying every one-bit split."""
    memo = {}

    def go(m):
        key = (m.shape, m.tobytes())
        if key in memo:
            return memo[key]
        if m.size == 0 or (m == m.flat[0]).all():
            memo[key] = 0
            return 0
        best = None
        r, c = m.shape
        for axis, size in ((0, r), (1, c)):
            for mask in range(1, 1 << (size - 1)):
                part = [i for i in range(size) if mask >> i & 1]
                rest = [i for i in range(size) if not mask >> i & 1]
                a, b = np.take(m, part, axis), np.take(m, rest, axis)
                cost = 1 + max(go(a), go(b))
                if best is None or cost < best:
                    best = cost
        memo[key] = best
        return best

    return go(np.asarray(mat))


def implicant_cubes(f):
    """Every implicant of f as a set of table indices, by trying all 3^n cubes."""
    n = f.n
    out = []
    for pattern in product((0, 1, None), repeat=n):
        pts = []
        for idx in range(1 << n):
            bits = [(idx >> (n - 1 - i)) & 1 for i in range(n)]
            if all(s is None or s == b for s, b in zip(pattern, bits)):
                pts.append(idx)
        if all(f.values[p] for p in pts):
            out.append(frozenset(pts))
    return out


def dnf_brute(f):
    ones = frozenset(int(i) for i in np.flatnonzero(f.values))
    if not ones:
        return 0
    cubes = implicant_cubes(f)
    for size in range(1, len(ones) + 1):
        for combo in combinations(cubes, size):
            if frozenset().union(*combo) == ones:
                return size


def k_rectangles(f, k):
    """Point sets of all 1-rectangles of f over every A with |A| = k."""
    from bpmeasures import split

    rects = set()
    for A in combinations(range(f.n), k):
        view = split(f, A)
        mat = view.matrix()
        B = [i for i in range(f.n) if i not in A]
        for cells in all_rectangles(mat):
            pts = set()
            for i, j in cells:
                x = [0] * f.n
                for t, v in enumerate(A):
                    x[v] = (i >> (len(A) - 1 - t)) & 1
                for t, v in enumerate(B):
                    x[v] = (j >> (len(B) - 1 - t)) & 1
                pts.add(int("".join(map(str, x)) or "0", 2))
            rects.add(frozenset(pts))
    return list(rects)


def cover_k_brute(f, k):
    ones = frozenset(int(i) for i in np.flatnonzero(f.values))
    if not ones:
        return 0
    rects = k_rectangles(f, k)
    for size in range(1, len(ones) + 1):
        for combo in combinations(rects, size):
            if frozenset().union(*combo) == ones:
                return size
