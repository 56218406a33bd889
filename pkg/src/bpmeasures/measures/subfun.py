"""Subfunction-counting measures S, S-hat, S* and m-mixedness."""

from fractions import Fraction

import numpy as np

from ..boolfn import TruthTable, mask_indices, subset_stats, subsets_of_size
from ..errors import InvariantViolation
from .maxmin import max_min_array
from .report import MeasureReport


def _masks_by_k(n):
    return {k: np.fromiter(subsets_of_size(n, k), dtype=np.int64) for k in range(n + 1)}


def measure_S(f: TruthTable) -> MeasureReport:
    """max_k min_{|A|=k} nrows(f_A)."""
    nrows, _ = subset_stats(f)
    value, k, mask = max_min_array(f.n, nrows, _masks_by_k(f.n))
    return MeasureReport("S", int(value), k, mask_indices(mask, f.n))


def measure_S_hat(f: TruthTable) -> MeasureReport:
    """max_k min_{|A|=k} d^k / mult(f_A), as an exact fraction."""
    _, mult = subset_stats(f)
    n, d = f.n, f.d
    if n == 0:
        return MeasureReport("S_hat", Fraction(1), 0, ())
    best = None
    for k, masks in _masks_by_k(n).items():
        if k == 0:
            continue
        m = mult[masks]
        # min of d^k/mult is at the largest mult; argmax keeps the first A
        j = int(np.argmax(m))
        v = Fraction(d**k, int(m[j]))
        if best is None or v > best[0]:
            best = (v, k, int(masks[j]))
    value, k, mask = best
    return MeasureReport("S_hat", value, k, mask_indices(mask, n))


def measure_S_star(f: TruthTable) -> MeasureReport:
    """min over orders of the max prefix nrows, by dynamic programming over subsets.

    The objective only sees the chain of prefix sets, so
    g(T) = max(nrows(f_T), min_{x in T} g(T - x)) is exact.
    ``order`` holds an optimal variable order (0-based).
    """
    nrows, _ = subset_stats(f)
    n = f.n
    full = (1 << n) - 1
    g = np.zeros(1 << n, dtype=np.int64)
    came_from = np.zeros(1 << n, dtype=np.int64)
    g[0] = 1
    nr = nrows.tolist()
    gl = g.tolist()
    for T in range(1, full + 1):
        best, arg = None, -1
        rest = T
        while rest:
            low = rest & -rest
            v = gl[T ^ low]
            if best is None or v < best:
                best, arg = v, low.bit_length() - 1
            rest ^= low
        gl[T] = max(nr[T], best)
        came_from[T] = arg
    order = []
    T = full
    while T:
        x = int(came_from[T])
        order.append(x)
        T ^= 1 << x
    order.reverse()
    value = gl[full]
    return MeasureReport("S_star", int(value), order=tuple(order))


def prefix_profile(f: TruthTable, order):
    """nrows(f_{sigma([k])}) for k = 1..n along a given order."""
    nrows, _ = subset_stats(f)
    out, mask = [], 0
    for x in order:
        mask |= 1 << x
        out.append(int(nrows[mask]))
    return out


def is_m_mixed(f: TruthTable, m: int) -> bool:
    """True iff every split with |A| = m has pairwise distinct rows."""
    if not 0 <= m <= f.n:
        raise ValueError(f"m must lie in 0..{f.n}, got {m}")
    _, mult = subset_stats(f)
    masks = np.fromiter(subsets_of_size(f.n, m), dtype=np.int64)
    mixed = bool(np.all(mult[masks] == 1))
    if mixed and m >= 1:
        s_hat = measure_S_hat(f).value
        if s_hat < f.d**m:
            raise InvariantViolation(
                f"{m}-mixed function with S_hat = {s_hat} < {f.d}^{m}"
            )
    return mixed
