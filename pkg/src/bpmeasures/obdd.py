"""Reduced OBDDs for a fixed order, level profiles and exact minimisation.

Size counts every node including sinks; a constant function is a single
sink of size 1.  Node identity is the subfunction itself: the subfunction
reached after reading a prefix of the order gets a node labelled with the
next variable exactly when it depends on that variable.
"""

import time
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .boolfn import TruthTable, mask_indices, row_keys, split
from .errors import BudgetExceeded, InvariantViolation
from .measures.subfun import measure_S, measure_S_star

MAX_BUILD_N = 20


def _ordered_values(f, order):
    order = tuple(order)
    if sorted(order) != list(range(f.n)):
        raise ValueError(f"order must be a permutation of 0..{f.n - 1}, got {order}")
    return np.ascontiguousarray(f.cube().transpose(order)).reshape(-1) if f.n else f.values


@dataclass
class Obdd:
    """Nodes are ``(level, low, high)`` with level i testing ``order[i]``.

    Ids ``0 .. len(sinks)-1`` are sinks (``sinks[id]`` is the value);
    internal nodes follow.
    """

    n: int
    order: tuple
    sinks: list
    nodes: list
    root: int
    level_counts: list = field(default_factory=list)

    @property
    def size(self):
        return len(self.sinks) + len(self.nodes)

    def evaluate(self, x):
        v = self.root
        s = len(self.sinks)
        while v >= s:
            level, low, high = self.nodes[v - s]
            v = high if x[self.order[level]] else low
        return self.sinks[v]

    def to_dot(self):
        s = len(self.sinks)
        lines = ["digraph obdd {"]
        for i, val in enumerate(self.sinks):
            lines.append(f'  n{i} [shape=box,label="{val}"];')
        for j, (level, low, high) in enumerate(self.nodes):
            lines.append(f'  n{j + s} [label="x{self.order[level] + 1}"];')
            lines.append(f"  n{j + s} -> n{low} [style=dashed];")
            lines.append(f"  n{j + s} -> n{high};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "order": [i + 1 for i in self.order],
            "size": self.size,
            "level_counts": self.level_counts,
        }


def build_obdd(f: TruthTable, order=None) -> Obdd:
    """The reduced OBDD of a Boolean f for the given order (default identity)."""
    if not f.is_boolean or f.d != 2:
        raise ValueError("OBDDs need a Boolean function on bits")
    if f.n > MAX_BUILD_N:
        raise BudgetExceeded(f"OBDD construction limited to n <= {MAX_BUILD_N}")
    order = tuple(range(f.n)) if order is None else tuple(order)
    g = _ordered_values(f, order)
    n = f.n
    sinks = sorted(set(g.tolist()))
    sink_id = {v: i for i, v in enumerate(sinks)}
    # ids of the subfunction at every row of the deepest level (single values)
    ids = np.array([sink_id[v] for v in g.tolist()], dtype=np.int64)
    nodes_by_level = [[] for _ in range(n)]
    next_id = len(sinks)
    for level in range(n - 1, -1, -1):
        mat = g.reshape(1 << level, -1)
        keys = row_keys(mat, True)
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        low = ids[0::2]
        high = ids[1::2]
        class_id = np.empty(len(first), dtype=np.int64)
        for c, rep in enumerate(first.tolist()):
            lo, hi = int(low[rep]), int(high[rep])
            if lo == hi:
                class_id[c] = lo
            else:
                class_id[c] = next_id
                nodes_by_level[level].append((next_id, level, lo, hi))
                next_id += 1
        ids = class_id[inverse.reshape(-1)]
    root = int(ids[0])
    # renumber so internal ids run level by level from the root
    remap = {i: i for i in range(len(sinks))}
    nodes = []
    for level in range(n):
        for old, lv, lo, hi in nodes_by_level[level]:
            remap[old] = len(sinks) + len(nodes)
            nodes.append((lv, lo, hi))
    nodes = [(lv, remap[lo], remap[hi]) for lv, lo, hi in nodes]
    counts = [len(nodes_by_level[level]) for level in range(n)]
    return Obdd(n, order, sinks, nodes, remap[root], counts)


@dataclass
class LevelProfile:
    """Per prefix B_i (i = 0..n): nrows, u (depend on the next variable), w = nrows - u.

    For i = n there is no next variable; ``u[n]`` is the number of sinks.
    """

    order: tuple
    nrows: list
    u: list
    w: list

    def size_formula(self):
        """1 + sum_{i=1}^{n} u(B_i), the textbook size expression."""
        return 1 + sum(self.u[1:])

    def exact_size(self):
        """u(B_0) + sum_{i=1}^{n-1} u(B_i) + #sinks, equal to the node count."""
        return sum(self.u)

    def to_dict(self):
        return {"order": [i + 1 for i in self.order], "nrows": self.nrows, "u": self.u, "w": self.w}


def level_profile(f: TruthTable, order=None) -> LevelProfile:
    order = tuple(range(f.n)) if order is None else tuple(order)
    g = _ordered_values(f, order)
    n = f.n
    nrows, u, w = [], [], []
    for i in range(n + 1):
        mat = g.reshape(1 << i, -1)
        keys = row_keys(mat, True)
        _, first = np.unique(keys, return_index=True)
        uniq = mat[first]
        r = len(first)
        if i < n:
            half = mat.shape[1] // 2
            dep = int(np.any(uniq[:, :half] != uniq[:, half:], axis=1).sum())
        else:
            dep = r
        nrows.append(r)
        u.append(dep)
        w.append(r - dep)
    return LevelProfile(order, nrows, u, w)


# -- minimisation -------------------------------------------------------------


def dependence_counts(f: TruthTable):
    """cost[T][v]: distinct subfunctions of f_T that depend on v (v not in T)."""
    n = f.n
    cost = np.zeros((1 << n, n), dtype=np.int64)
    for T in range(1 << n):
        mat = split(f, mask_indices(T, n)).matrix()
        _, first = np.unique(row_keys(mat, True), return_index=True)
        uniq = mat[first]
        comp = [v for v in range(n) if not T >> v & 1]
        m = len(comp)
        for p, v in enumerate(comp):
            cube = uniq.reshape(len(first), 1 << p, 2, 1 << (m - p - 1))
            cost[T, v] = int(np.any(cube[:, :, 0, :] != cube[:, :, 1, :], axis=(1, 2)).sum())
    return cost


def min_obdd_size(f: TruthTable):
    """(minimum size, optimal order) by dynamic programming over read sets."""
    if not f.is_boolean or f.d != 2:
        raise ValueError("OBDDs need a Boolean function on bits")
    n = f.n
    sinks = len(set(f.values.tolist()))
    if n == 0:
        return sinks, ()
    cost = dependence_counts(f).tolist()
    best = [0] * (1 << n)
    last = [-1] * (1 << n)
    for T in range(1, 1 << n):
        b, arg = None, -1
        for v in range(n):
            if T >> v & 1:
                c = best[T ^ (1 << v)] + cost[T ^ (1 << v)][v]
                if b is None or c < b:
                    b, arg = c, v
        best[T] = b
        last[T] = arg
    order = []
    T = (1 << n) - 1
    while T:
        order.append(last[T])
        T ^= 1 << last[T]
    order.reverse()
    return best[(1 << n) - 1] + sinks, tuple(order)


def min_obdd_size_enum(f: TruthTable):
    """(minimum size, first optimal order) by building the OBDD for all n! orders."""
    best = None
    for order in permutations(range(f.n)):
        size = build_obdd(f, order).size
        if best is None or size < best[0]:
            best = (size, order)
    return best


# -- batched kernels over many functions at once -------------------------------


def _count_distinct(keys, keep):
    """Per row of ``keys``: number of distinct values among entries with ``keep``."""
    masked = np.where(keep, keys, -1)
    s = np.sort(masked, axis=1)
    fresh = np.concatenate([s[:, :1] >= 0, (s[:, 1:] != s[:, :-1]) & (s[:, 1:] >= 0)], axis=1)
    return fresh.sum(axis=1)


def _row_ints(rows):
    """(N, r, c) 0/1 rows -> (N, r) integer keys (c <= 62)."""
    c = rows.shape[-1]
    weights = (1 << np.arange(c - 1, -1, -1, dtype=np.int64))
    return rows.astype(np.int64) @ weights


def _sinks(F):
    return np.where(np.all(F == F[:, :1], axis=1), 1, 2)


def batch_min_obdd_dp(F, n):
    """Minimum OBDD sizes of every row of F (shape (N, 2^n)) by subset DP."""
    F = np.asarray(F, dtype=np.uint8)
    if n > 5:
        raise BudgetExceeded("batched kernels support n <= 5")
    N = F.shape[0]
    base = np.arange(1 << n).reshape((2,) * n)
    best = np.zeros((1 << n, N), dtype=np.int64)
    best[1:] = np.iinfo(np.int64).max
    for T in range(1 << n):
        A = mask_indices(T, n)
        comp = [v for v in range(n) if not T >> v & 1]
        idx = base.transpose(A + tuple(comp)).reshape(-1)
        rows = F[:, idx].reshape(N, 1 << len(A), -1)
        keys = _row_ints(rows)
        m = len(comp)
        for p, v in enumerate(comp):
            cube = rows.reshape(N, rows.shape[1], 1 << p, 2, 1 << (m - p - 1))
            dep = np.any(cube[:, :, :, 0, :] != cube[:, :, :, 1, :], axis=(2, 3))
            c = _count_distinct(keys, dep)
            U = T | (1 << v)
            np.minimum(best[U], best[T] + c, out=best[U])
    return best[(1 << n) - 1] + _sinks(F)


def batch_min_obdd_enum(F, n):
    """Minimum OBDD sizes of every row of F by counting levels for all n! orders."""
    F = np.asarray(F, dtype=np.uint8)
    if n > 5:
        raise BudgetExceeded("batched kernels support n <= 5")
    N = F.shape[0]
    base = np.arange(1 << n).reshape((2,) * n)
    best = np.full(N, np.iinfo(np.int64).max)
    for order in permutations(range(n)):
        G = F[:, base.transpose(order).reshape(-1)]
        size = _sinks(F).astype(np.int64)
        for i in range(n):
            rows = G.reshape(N, 1 << i, -1)
            half = rows.shape[2] // 2
            dep = np.any(rows[:, :, :half] != rows[:, :, half:], axis=2)
            size += _count_distinct(_row_ints(rows), dep)
        np.minimum(best, size, out=best)
    return best


def compare_min_methods(n, budget_secs=None, chunk=4096):
    """DP against order enumeration on every Boolean function of n variables.

    Works through the 2^(2^n) functions in chunks.  With a budget, the time
    of the first chunk is extrapolated and BudgetExceeded is raised up front
    when the whole scan cannot fit; ``bounds`` then holds the projection.
    """
    N = 1 << n
    total = 1 << N
    start = time.monotonic()
    checked = mismatches = 0
    first_bad = None
    lanes = np.arange(N - 1, -1, -1, dtype=np.int64)
    for lo in range(0, total, chunk):
        v = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        F = ((v[:, None] >> lanes) & 1).astype(np.uint8)
        bad = np.flatnonzero(batch_min_obdd_dp(F, n) != batch_min_obdd_enum(F, n))
        if bad.size and first_bad is None:
            first_bad = int(v[bad[0]])
        mismatches += int(bad.size)
        checked += v.size
        if budget_secs is not None and checked < total:
            spent = time.monotonic() - start
            projected = spent * total / checked
            if projected > budget_secs:
                raise BudgetExceeded(
                    f"all {total} functions at n={n} need about {projected / 3600:.1f} h",
                    bounds={"checked": checked, "mismatches": mismatches, "projected_secs": projected},
                )
    return {"n": n, "functions": total, "checked": checked, "mismatches": mismatches, "first_mismatch": first_bad}


# -- the sandwich ---------------------------------------------------------------


def check_sandwich(f: TruthTable, strict=True):
    """S <= S* <= OBDD <= 1 + n S*, with OBDD the exact minimum."""
    s = measure_S(f).value
    s_star = measure_S_star(f).value
    size, order = min_obdd_size(f)
    ok = s <= s_star <= size <= 1 + f.n * s_star
    report = {
        "S": s,
        "S_star": s_star,
        "OBDD": size,
        "upper": 1 + f.n * s_star,
        "order": [i + 1 for i in order],
        "ok": ok,
    }
    if strict and not ok:
        raise InvariantViolation(f"OBDD sandwich fails: {report}", report)
    return report
