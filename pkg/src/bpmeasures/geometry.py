"""The affine plane F_p^2, blocking sets and the GAL / BW incidence functions.

Point (a, b) is bit a*p + b.  The non-vertical line l(i, j) = {(t, i + j t)}
has index i*p + j; these p^2 lines are the only ones a blocking set must
meet.  Vertical lines {(a, t)} exist as geometry (constructors, the
colinearity lemma) but never enter the blocking predicate.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

import numpy as np

from .boolfn import TruthTable, split_matrix, row_keys
from .errors import BudgetExceeded, InvariantViolation


def is_prime(p):
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Line:
    """slope None means vertical x = c; otherwise y = c + slope * x."""

    p: int
    c: int
    slope: int = None

    @property
    def vertical(self):
        return self.slope is None

    def points(self):
        p = self.p
        if self.vertical:
            return [(self.c, t) for t in range(p)]
        return [(t, (self.c + self.slope * t) % p) for t in range(p)]

    def contains(self, pt):
        a, b = pt
        if self.vertical:
            return a == self.c
        return (self.c + self.slope * a - b) % self.p == 0

    def parallel_through(self, pt):
        a, b = pt
        if self.vertical:
            return Line(self.p, a)
        return Line(self.p, (b - self.slope * a) % self.p, self.slope)

    def index(self):
        if self.vertical:
            raise ValueError("vertical lines have no non-vertical index")
        return self.c * self.p + self.slope

    def meet(self, other):
        """The single common point of two non-parallel lines."""
        if self.slope == other.slope:
            raise ValueError("parallel lines do not meet in one point")
        p = self.p
        if self.vertical or other.vertical:
            v, w = (self, other) if self.vertical else (other, self)
            return (v.c, (w.c + w.slope * v.c) % p)
        t = (other.c - self.c) * pow(self.slope - other.slope, -1, p) % p
        return (t, (self.c + self.slope * t) % p)


def line_through(p, u, v):
    if u == v:
        raise ValueError("two distinct points determine a line")
    if u[0] == v[0]:
        return Line(p, u[0])
    slope = (v[1] - u[1]) * pow(v[0] - u[0], -1, p) % p
    return Line(p, (u[1] - slope * u[0]) % p, slope)


def nonvertical(p, i, j):
    return Line(p, i % p, j % p)


class Plane:
    MAX_P = 13

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p > self.MAX_P:
            raise BudgetExceeded(f"planes limited to p <= {self.MAX_P}")
        self.p = p
        self.N = p * p
        inc = np.zeros((self.N, self.N), dtype=bool)  # inc[point, line]
        for i in range(p):
            for j in range(p):
                for a, b in nonvertical(p, i, j).points():
                    inc[a * p + b, i * p + j] = True
        self.incidence = inc
        deg_pts, deg_lines = inc.sum(axis=1), inc.sum(axis=0)
        if not ((deg_pts == p).all() and (deg_lines == p).all()):
            raise InvariantViolation("incidence graph is not p-regular")
        common = inc.T.astype(np.int64) @ inc.astype(np.int64)
        np.fill_diagonal(common, 0)
        if common.max() > 1:
            raise InvariantViolation("two lines share two points (K22 found)")

    def point(self, a, b):
        return (a % self.p) * self.p + (b % self.p)

    def coords(self, idx):
        return divmod(idx, self.p)

    def mask_of(self, pts):
        m = 0
        for a, b in pts:
            m |= 1 << self.point(a, b)
        return m

    def points_of(self, mask):
        return [self.coords(i) for i in range(self.N) if mask >> i & 1]

    def line_mask(self, line: Line):
        return self.mask_of(line.points())

    @cached_property
    def point_lines(self):
        """Bitmask (over line indices) of the lines through each point."""
        out = []
        for pt in range(self.N):
            m = 0
            for ln in np.nonzero(self.incidence[pt])[0]:
                m |= 1 << int(ln)
            out.append(m)
        return out

    @property
    def all_lines(self):
        return (1 << self.N) - 1

    def neighbours(self, mask):
        m = 0
        for i in range(self.N):
            if mask >> i & 1:
                m |= self.point_lines[i]
        return m

    def is_blocking(self, mask):
        return self.neighbours(mask) == self.all_lines

    def is_blocking_poly(self, mask):
        """P_S(x, y) = prod over (a, b) in S of (x + a y - b) vanishes on all of F_p^2."""
        p = self.p
        X, Y = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
        acc = np.ones((p, p), dtype=np.int64)
        for a, b in self.points_of(mask):
            acc = acc * ((X + a * Y - b) % p) % p
        return not acc.any()

    def is_minimal_blocking(self, mask):
        if not self.is_blocking(mask):
            return False
        return not any(self.is_blocking(mask & ~(1 << i)) for i in range(self.N) if mask >> i & 1)

    # vectorised kernels ------------------------------------------------------

    @cached_property
    def _line_bits(self):
        if self.N > 64:
            raise BudgetExceeded("vectorised scans need p^2 <= 64")
        return np.array(self.point_lines, dtype=np.uint64)

    def blocking_of_combos(self, combos):
        """For an (N, k) array of point indices: (blocking, minimal blocking)."""
        bits = self._line_bits[combos]
        full = np.uint64(self.all_lines)
        k = combos.shape[1]
        if k == 0:
            z = np.zeros(combos.shape[0], dtype=bool)
            return z, z
        pre = np.zeros_like(bits)
        suf = np.zeros_like(bits)
        for i in range(1, k):
            pre[:, i] = pre[:, i - 1] | bits[:, i - 1]
            suf[:, k - 1 - i] = suf[:, k - i] | bits[:, k - i]
        covered = pre[:, k - 1] | bits[:, k - 1]
        blocking = covered == full
        drop_ok = (pre | suf) == full
        minimal = blocking & ~drop_ok.any(axis=1)
        return blocking, minimal

    def blocking_table(self, points=None, chunk=1 << 20):
        """Blocking flag for every subset of ``points`` in table order (first point = MSB)."""
        points = list(range(self.N)) if points is None else list(points)
        k = len(points)
        if k > 26:
            raise BudgetExceeded(f"2^{k} subsets exceed the exhaustive scan limit")
        bits = self._line_bits[points]
        full = np.uint64(self.all_lines)
        out = np.empty(1 << k, dtype=bool)
        for start in range(0, 1 << k, chunk):
            idx = np.arange(start, min(start + chunk, 1 << k), dtype=np.int64)
            cov = np.zeros(idx.size, dtype=np.uint64)
            for pos, b in enumerate(bits):
                sel = (idx >> (k - 1 - pos)) & 1
                cov |= np.where(sel == 1, b, np.uint64(0))
            out[start : start + idx.size] = cov == full
        return out


def plane(p):
    return Plane(p)


# -- enumeration -----------------------------------------------------------------


def enumerate_mbs(pl: Plane, max_size, min_size=0, chunk=200_000):
    """All minimal blocking sets with min_size <= |S| <= max_size, by size."""
    found = {}
    pts = np.arange(pl.N)
    for k in range(min_size, max_size + 1):
        hits = []
        it = combinations(range(pl.N), k)
        while True:
            block = list(_take(it, chunk))
            if not block:
                break
            arr = np.array(block, dtype=np.int64).reshape(len(block), k)
            _, minimal = pl.blocking_of_combos(arr)
            for row in arr[minimal]:
                hits.append(int(sum(1 << int(i) for i in row)))
        found[k] = hits
    return found


def _take(it, n):
    for _ in range(n):
        try:
            yield next(it)
        except StopIteration:
            return


def mbs_histogram(pl: Plane, max_size):
    return {k: len(v) for k, v in enumerate_mbs(pl, max_size).items()}


def count_blocking_within(pl: Plane, M, mode="exact", samples=100_000, seed=0):
    """Blocking subsets of the point set M (a mask)."""
    pts = [i for i in range(pl.N) if M >> i & 1]
    if mode == "exact":
        if len(pts) > 25:
            raise BudgetExceeded("exact counting needs |M| <= 25")
        if not pts:
            return 0
        return int(pl.blocking_table(pts).sum())
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    if not pts:
        return {"estimate": 0.0, "low": 0.0, "high": 0.0, "samples": 0}
    pick = rng.integers(0, 2, size=(samples, len(pts)), dtype=np.uint8).astype(bool)
    bits = pl._line_bits[pts]
    cov = np.bitwise_or.reduce(np.where(pick, bits[None, :], np.uint64(0)), axis=1)
    frac = float((cov == np.uint64(pl.all_lines)).mean())
    half = 1.96 * (frac * (1 - frac) / samples) ** 0.5
    total = 2.0 ** len(pts)
    return {
        "estimate": frac * total,
        "low": max(frac - half, 0.0) * total,
        "high": min(frac + half, 1.0) * total,
        "samples": samples,
    }


def nonblocking_bound_check(pl: Plane):
    """Exact count of non-blocking sets against p^2 2^(p^2 - p)."""
    blocking = int(pl.blocking_table().sum())
    nonblocking = (1 << pl.N) - blocking
    bound = pl.N * 2 ** (pl.N - pl.p)
    return {"blocking": blocking, "nonblocking": nonblocking, "bound": bound, "ok": nonblocking <= bound}


# -- constructors ----------------------------------------------------------------


def _need(cond, message):
    if not cond:
        raise ValueError(message)


def _nonvertical_line(line, name):
    _need(isinstance(line, Line) and not line.vertical, f"{name} must be a non-vertical line")


def _finish(pl, pts, size, case):
    mask = pl.mask_of(pts)
    got = bin(mask).count("1")
    if got != size:
        raise InvariantViolation(f"case {case}: size {got}, expected {size}")
    if not pl.is_minimal_blocking(mask):
        raise InvariantViolation(f"case {case}: result is not a minimal blocking set")
    return mask


def mbs_two_lines_shifted(pl: Plane, l1: Line, l2: Line, x):
    """l1 and l2 with x, y removed and phi(x) added (x on l1 only, y below/above x on l2)."""
    p = pl.p
    _nonvertical_line(l1, "l"), _nonvertical_line(l2, "l'")
    _need(l1.slope != l2.slope, "l and l' must intersect")
    _need(l1.contains(x) and not l2.contains(x), "x must lie on l and not on l'")
    y = Line(p, x[0]).meet(l2)
    phi = l1.parallel_through(y).meet(l2.parallel_through(x))
    pts = (set(l1.points()) | set(l2.points()) | {phi}) - {x, y}
    return _finish(pl, pts, 2 * p - 2, 3)


def mbs_two_lines(pl: Plane, l1: Line, l2: Line):
    _nonvertical_line(l1, "l"), _nonvertical_line(l2, "l'")
    _need(l1.slope != l2.slope, "the two lines must intersect")
    return _finish(pl, set(l1.points()) | set(l2.points()), 2 * pl.p - 1, 4)


def mbs_line_plus_points(pl: Plane, line: Line, extra):
    """line plus p-1 off-line points on distinct verticals meeting every parallel of line."""
    p = pl.p
    _nonvertical_line(line, "l")
    extra = [tuple(a) for a in extra]
    _need(len(extra) == p - 1, f"need exactly {p - 1} extra points")
    _need(not any(line.contains(a) for a in extra), "extra points must avoid the line")
    _need(len({a[0] for a in extra}) == p - 1, "no two extra points on one vertical line")
    hit = {line.parallel_through(a).c for a in extra}
    _need(len(hit) == p - 1, "every parallel of the line must pass through an extra point")
    return _finish(pl, set(line.points()) | set(extra), 2 * p - 1, 5)


def default_line_plus_points(p):
    """y = 0 with the points (c - 1, c), c = 1..p-1."""
    return Line(p, 0, 0), [(c - 1, c) for c in range(1, p)]


def mbs_two_lines_three_points(pl: Plane, l1: Line, l2: Line, x, y, a, b, c):
    p = pl.p
    _nonvertical_line(l1, "l"), _nonvertical_line(l2, "l'")
    _need(l1.slope != l2.slope, "l and l' must intersect")
    _need(l1.contains(x) and not l2.contains(x), "x must lie on l and not on l'")
    _need(l2.contains(y) and not l1.contains(y), "y must lie on l' and not on l")
    xy = line_through(p, x, y)
    _need(not xy.vertical, "the line through x and y must not be vertical")
    _need(xy.contains(a) and a not in (x, y), "a must lie on line xy, distinct from x and y")
    ly, lx = l1.parallel_through(y), l2.parallel_through(x)
    corner = ly.meet(lx)
    _need(ly.contains(b) and b != y and b != corner, "b must lie on l_y, avoiding y and l_y meet l'_x")
    _need(lx.contains(c) and c != x and c != corner, "c must lie on l'_x, avoiding x and l_y meet l'_x")
    pts = (set(l1.points()) | set(l2.points()) | {a, b, c}) - {x, y}
    return _finish(pl, pts, 2 * p, 6)


def mbs_three_lines(pl: Plane, vertical: Line, l2: Line, l3: Line):
    p = pl.p
    _need(isinstance(vertical, Line) and vertical.vertical, "l1 must be vertical")
    _nonvertical_line(l2, "l2"), _nonvertical_line(l3, "l3")
    _need(l2.slope == l3.slope and l2.c != l3.c, "l2 and l3 must be distinct parallels")
    a, b = vertical.meet(l2), vertical.meet(l3)
    pts = (set(vertical.points()) | set(l2.points()) | set(l3.points())) - {a, b}
    return _finish(pl, pts, 3 * p - 4, 7)


MBS_SIZES = {3: lambda p: 2 * p - 2, 4: lambda p: 2 * p - 1, 5: lambda p: 2 * p - 1, 6: lambda p: 2 * p, 7: lambda p: 3 * p - 4}


def mbs_constructor(pl: Plane, case, params=None):
    """Build the case-(3..7) minimal blocking set; params default to a canonical choice."""
    p = pl.p
    l = Line(p, 0, 0)
    lp = Line(p, 0, 1)
    if case == 3:
        params = params or {"l1": l, "l2": lp, "x": (1, 0)}
        return mbs_two_lines_shifted(pl, **params)
    if case == 4:
        params = params or {"l1": l, "l2": lp}
        return mbs_two_lines(pl, **params)
    if case == 5:
        if params is None:
            line, extra = default_line_plus_points(p)
            params = {"line": line, "extra": extra}
        return mbs_line_plus_points(pl, **params)
    if case == 6:
        if params is not None:
            return mbs_two_lines_three_points(pl, **params)
        # the stated side conditions admit many choices that are not minimal;
        # take the first admissible choice that verifies
        for params in admissible_params(pl, 6, l, lp):
            try:
                return mbs_two_lines_three_points(pl, **params)
            except InvariantViolation:
                continue
        raise InvariantViolation(f"case 6: no admissible choice is a minimal blocking set at p={p}")
    if case == 7:
        params = params or {"vertical": Line(p, 0), "l2": Line(p, 0, 1), "l3": Line(p, 1, 1)}
        return mbs_three_lines(pl, **params)
    raise ValueError(f"unknown constructor case {case}")


def admissible_params(pl: Plane, case, l1=None, l2=None):
    """Every parameter choice meeting the side conditions of case 3 or 6 for fixed l, l'."""
    p = pl.p
    l1 = Line(p, 0, 0) if l1 is None else l1
    l2 = Line(p, 0, 1) if l2 is None else l2
    xs = [x for x in l1.points() if not l2.contains(x)]
    if case == 3:
        for x in xs:
            yield {"l1": l1, "l2": l2, "x": x}
        return
    if case != 6:
        raise ValueError("admissible parameter lists exist for cases 3 and 6")
    for x in xs:
        for y in l2.points():
            if l1.contains(y) or y[0] == x[0]:
                continue
            ly, lx = l1.parallel_through(y), l2.parallel_through(x)
            corner = ly.meet(lx)
            for a in line_through(p, x, y).points():
                if a in (x, y):
                    continue
                for b in ly.points():
                    if b in (y, corner):
                        continue
                    for c in lx.points():
                        if c not in (x, corner):
                            yield {"l1": l1, "l2": l2, "x": x, "y": y, "a": a, "b": b, "c": c}


def admissible_census(pl: Plane, case):
    """(verified, total) over the admissible parameter choices of case 3 or 6."""
    ok = total = 0
    for params in admissible_params(pl, case):
        total += 1
        try:
            mbs_constructor(pl, case, params)
            ok += 1
        except InvariantViolation:
            pass
    return ok, total


# -- lemmas ----------------------------------------------------------------------


def permutation_array(m):
    """All permutations of range(m) as rows, built by insertion."""
    perms = np.zeros((1, 0), dtype=np.int8)
    for v in range(m):
        rows = []
        for pos in range(v + 1):
            rows.append(np.insert(perms, pos, v, axis=1))
        perms = np.concatenate(rows)
    return perms


def lemma_identity_check(p):
    """prod_{i<j} (i x_j - j x_i) = 0 mod p for every arrangement x of 1..p-1."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p > 11:
        raise BudgetExceeded("(p-1)! arrangements limited to p <= 11")
    # at p = 2 the product over pairs is empty, hence 1, and the check fails
    x = permutation_array(p - 1).astype(np.int64) + 1
    hit = np.zeros(x.shape[0], dtype=bool)
    for i, j in combinations(range(1, p), 2):
        hit |= ((i * x[:, j - 1] - j * x[:, i - 1]) % p) == 0
    return bool(hit.all())


def directions(p):
    """Vertical (None) then the slopes 0..p-1."""
    return [None] + list(range(p))


def parallel_class(p, slope):
    return [Line(p, c, slope) for c in range(p)]


def _slope_class(p, u, v):
    dx, dy = (v[0] - u[0]) % p, (v[1] - u[1]) % p
    return p if dx == 0 else dy * pow(dx, -1, p) % p


def colinear_triples_ok(p, pts):
    """Every point has two others on a common line with it."""
    for i, u in enumerate(pts):
        seen = set()
        for j, v in enumerate(pts):
            if j != i:
                s = _slope_class(p, u, v)
                if s in seen:
                    break
                seen.add(s)
        else:
            return False
    return True


def intersecting_points_check(p, dir_pairs=None, pairings=None):
    """Every ordered pair of directions and every pairing of their parallel classes."""
    if p < 3:
        raise ValueError("colinear triples need at least three points, so p >= 3")
    if p > 5 and pairings is None:
        raise BudgetExceeded("exhaustive pairings limited to p <= 5")
    dirs = directions(p)
    dir_pairs = [(d1, d2) for d1 in dirs for d2 in dirs if d1 != d2] if dir_pairs is None else dir_pairs
    checked = 0
    for d1, d2 in dir_pairs:
        c1, c2 = parallel_class(p, d1), parallel_class(p, d2)
        for sigma in permutations(range(p)) if pairings is None else pairings:
            pts = [c1[i].meet(c2[sigma[i]]) for i in range(p)]
            checked += 1
            if not colinear_triples_ok(p, pts):
                return False, {"directions": (d1, d2), "pairing": sigma, "checked": checked}
    return True, {"checked": checked}


# -- GAL / BW --------------------------------------------------------------------


def gal_table(pl: Plane) -> TruthTable:
    """GAL(x) = 1 iff the point set x meets every non-vertical line."""
    if pl.N > 25:
        raise BudgetExceeded("GAL table limited to p <= 5")
    return TruthTable(pl.N, 2, pl.blocking_table().astype(np.uint8))


def bw_table(pl: Plane) -> TruthTable:
    """BW(x, y) = 1 iff some line in y passes through a point of x; x first."""
    n = 2 * pl.N
    if n > 24:
        raise BudgetExceeded("BW table limited to p <= 3")
    bits = pl._line_bits
    idx = np.arange(1 << n, dtype=np.int64)
    xs = idx >> pl.N
    ys = idx & ((1 << pl.N) - 1)
    # y's bit for line j sits at position N-1-j; convert to the line-bit convention
    ymask = np.zeros(idx.size, dtype=np.uint64)
    for j in range(pl.N):
        ymask |= (((ys >> (pl.N - 1 - j)) & 1).astype(np.uint64)) << np.uint64(j)
    nb_all = np.zeros(1 << pl.N, dtype=np.uint64)
    sub = np.arange(1 << pl.N, dtype=np.int64)
    for i in range(pl.N):
        nb_all |= np.where((sub >> (pl.N - 1 - i)) & 1 == 1, bits[i], np.uint64(0))
    return TruthTable(n, 2, ((nb_all[xs] & ymask) != 0).astype(np.uint8))


def gal_bw_bridge(pl: Plane):
    """GAL(x) = 1 iff BW(x, {b}) = 1 for every single line b, over all x."""
    gal = gal_table(pl).values.astype(bool)
    bw = bw_table(pl).cube().reshape(1 << pl.N, 1 << pl.N)
    singles = [1 << (pl.N - 1 - j) for j in range(pl.N)]
    return bool((bw[:, singles].all(axis=1) == gal).all())


def bw_witness_sets(pl: Plane, t):
    """T = first t points of the vertical line x = 0, S = T with its lines (BW variable numbers)."""
    if not 1 <= t <= pl.p:
        raise ValueError(f"t must lie in 1..{pl.p}")
    T = [pl.point(0, b) for b in range(t)]
    lines = sorted({int(j) for i in T for j in np.nonzero(pl.incidence[i])[0]})
    return T, [pl.N + j for j in lines]


def bw_mult_witness(pl: Plane, t, f=None):
    """Exact mult((BW)_S) and the count of constant-one rows, against (3/8) 2^|S|."""
    from fractions import Fraction

    f = bw_table(pl) if f is None else f
    T, L = bw_witness_sets(pl, t)
    S = T + L
    mat = split_matrix(f, S)
    _, counts = np.unique(row_keys(mat, boolean=True), return_counts=True)
    mult = int(counts.max())
    ones = int(mat.all(axis=1).sum())
    k = len(S)
    predicted = Fraction(2**k) * (1 - (Fraction(1, 2) + Fraction(1, 2 ** (pl.p + 1))) ** t)
    return {
        "p": pl.p,
        "t": t,
        "size": k,
        "mult": mult,
        "constant_one_rows": ones,
        "predicted_one_rows": predicted,
        "threshold": Fraction(3, 8) * 2**k,
        "ok": 8 * mult >= 3 * 2**k,
    }
