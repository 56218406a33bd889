"""Rectangle cover numbers C and partition numbers P+, P, P-hat.

Fixed-A quantities work on the split matrix with duplicate rows and
columns removed, which changes none of C^1, P+ or C^D: any solution on the
reduced matrix expands back by copying rows and columns.
"""

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

from ..boolfn import (
    TruthTable,
    VarSet,
    cell_index_matrix,
    combine,
    mask_indices,
    split,
    subsets_of_size,
)
from ..errors import BudgetExceeded, InvariantViolation
from .maxmin import max_min
from .report import MeasureReport, RectCertificate
from .setcover import DEFAULT_NODE_BUDGET, min_exact_cover, min_set_cover

CANDIDATE_BUDGET = 300_000


def _require_boolean(f, what):
    if not f.is_boolean:
        raise ValueError(f"{what} needs a Boolean function")


def reduce_matrix(mat):
    """Distinct rows/columns of ``mat`` plus the class of every original row/column."""
    mat = np.asarray(mat)
    rows, row_class = np.unique(mat, axis=0, return_inverse=True)
    red, col_class = np.unique(rows, axis=1, return_inverse=True)
    return red, row_class.reshape(-1), col_class.reshape(-1)


def _bool_to_int(arr):
    arr = np.asarray(arr, dtype=bool).reshape(-1)
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _int_to_bool(mask, size):
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def maximal_one_rectangles(mat):
    """All maximal all-ones combinatorial rectangles as (row mask, col mask)."""
    mat = np.asarray(mat)
    row_sets = [_bool_to_int(row != 0) for row in mat]
    intents = set()
    for r in row_sets:
        if not r:
            continue
        new = {r}
        for c in intents:
            x = c & r
            if x:
                new.add(x)
        intents |= new
    out = []
    for C in sorted(intents):
        R = 0
        for i, r in enumerate(row_sets):
            if r & C == C:
                R |= 1 << i
        out.append((R, C))
    return out


def row_constant_rectangles(mat, budget=CANDIDATE_BUDGET):
    """Every rectangle R x C on which all rows agree and are nonzero.

    These are exactly the supports of the parts g_i * h_j (g Boolean,
    h natural) that fit inside a matrix with disjoint support.
    """
    mat = np.asarray(mat)
    nr, nc = mat.shape
    if nc > 24:
        raise BudgetExceeded(f"{nc} columns is too many for rectangle enumeration")
    nonzero = mat != 0
    out = []
    for C in range(1, 1 << nc):
        cols = [j for j in range(nc) if C >> j & 1]
        ok = nonzero[:, cols].all(axis=1)
        if not ok.any():
            continue
        groups = {}
        for i in np.flatnonzero(ok):
            groups.setdefault(mat[i, cols].tobytes(), []).append(int(i))
        for members in groups.values():
            m = len(members)
            if len(out) + (1 << m) > budget:
                raise BudgetExceeded(
                    f"more than {budget} candidate rectangles", bounds=None
                )
            for sub in range(1, 1 << m):
                R = 0
                for t in range(m):
                    if sub >> t & 1:
                        R |= 1 << members[t]
                out.append((R, C))
    return out


def _cells(R, C, ncols):
    mask = 0
    i = 0
    while R:
        if R & 1:
            mask |= C << (i * ncols)
        R >>= 1
        i += 1
    return mask


def _part(f, A, row_sel, col_vals):
    A = VarSet.of(f.n, A) if not isinstance(A, VarSet) else A
    g = TruthTable(len(A), f.d, np.asarray(row_sel, dtype=np.uint8))
    h = TruthTable(f.n - len(A), f.d, np.asarray(col_vals, dtype=np.int64))
    return (A, g, h)


def _expand_part(f, A, red, row_class, col_class, R, C):
    rsel = np.array([R >> c & 1 for c in row_class], dtype=np.uint8)
    csel = np.array([C >> c & 1 for c in col_class], dtype=bool)
    # h carries the common row values on the chosen columns
    some_row = int(np.flatnonzero(np.array([R >> c & 1 for c in range(red.shape[0])]))[0])
    hvals = np.where(csel, red[some_row][col_class], 0)
    return _part(f, A, rsel, hvals)


# -- fixed A ----------------------------------------------------------------


def cover_number_fixed(f: TruthTable, A, budget=DEFAULT_NODE_BUDGET, certificate=True):
    """C(f, A): fewest A-rectangles whose OR is f (= C^1 of the split matrix)."""
    _require_boolean(f, "cover number")
    view = split(f, A)
    red, row_class, col_class = reduce_matrix(view.matrix())
    nc = red.shape[1]
    rects = maximal_one_rectangles(red)
    target = _bool_to_int(red != 0)
    chosen = min_set_cover(target, [_cells(R, C, nc) for R, C in rects], budget)
    cert = None
    if certificate:
        parts = [_expand_part(f, view.A, red, row_class, col_class, *rects[i]) for i in chosen]
        cert = RectCertificate("cover", parts, f)
    return len(chosen), cert


def partition_plus_fixed(f: TruthTable, A, budget=DEFAULT_NODE_BUDGET, certificate=True):
    """P+(f, A): fewest pairwise orthogonal A-rectangles summing to f."""
    view = split(f, A)
    red, row_class, col_class = reduce_matrix(view.matrix())
    nc = red.shape[1]
    rects = row_constant_rectangles(red)
    target = _bool_to_int(red != 0)
    chosen = min_exact_cover(target, [_cells(R, C, nc) for R, C in rects], budget)
    cert = None
    if certificate:
        parts = [_expand_part(f, view.A, red, row_class, col_class, *rects[i]) for i in chosen]
        cert = RectCertificate("partition", parts, f)
    return len(chosen), cert


def monochromatic_partition_ilp(mat, budget=CANDIDATE_BUDGET):
    """C^D(M) by integer programming over all monochromatic rectangles.

    Kept separate from the branch-and-bound code on purpose: it is the
    independent check of P+(f,A) + P+(not f,A) = C^D(f_A).
    """
    red, _, _ = reduce_matrix(np.asarray(mat))
    nr, nc = red.shape
    rects = []
    for colour in (0, 1):
        rects += row_constant_rectangles((red == colour).astype(np.uint8), budget)
    rows, cols = [], []
    for r, (R, C) in enumerate(rects):
        for i in range(nr):
            if R >> i & 1:
                for j in range(nc):
                    if C >> j & 1:
                        rows.append(i * nc + j)
                        cols.append(r)
    A = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(nr * nc, len(rects)))
    res = milp(
        c=np.ones(len(rects)),
        constraints=LinearConstraint(A.tocsr(), 1, 1),
        integrality=np.ones(len(rects)),
        bounds=Bounds(0, 1),
    )
    if not res.success:
        raise RuntimeError(f"partition ILP failed: {res.message}")
    return int(round(res.fun))


# -- rectangles of size k over varying A -------------------------------------


def _k_candidates(f, k, maximal):
    """Point-set candidates for k-rectangles over every A with |A| = k."""
    seen = {}
    N = f.d**f.n
    for mask in subsets_of_size(f.n, k):
        A = VarSet(f.n, mask)
        mat = split(f, A).matrix()
        idx = cell_index_matrix(f.n, f.d, A)
        if maximal:
            red, row_class, col_class = reduce_matrix(mat)
            rects = maximal_one_rectangles(red)
        else:
            red = np.asarray(mat)
            row_class = np.arange(red.shape[0])
            col_class = np.arange(red.shape[1])
            rects = row_constant_rectangles(red, CANDIDATE_BUDGET - len(seen))
        for R, C in rects:
            rsel = np.array([R >> c & 1 for c in row_class], dtype=bool)
            csel = np.array([C >> c & 1 for c in col_class], dtype=bool)
            pts = np.zeros(N, dtype=bool)
            pts[idx[np.ix_(rsel, csel)].reshape(-1)] = True
            key = _bool_to_int(pts)
            if key not in seen:
                seen[key] = (A, red, row_class, col_class, R, C)
        if len(seen) > CANDIDATE_BUDGET:
            raise BudgetExceeded(f"more than {CANDIDATE_BUDGET} candidate rectangles")
    return seen


def _drop_dominated(masks):
    masks = sorted(masks, key=lambda m: -bin(m).count("1"))
    kept = []
    for m in masks:
        if not any(m & ~big == 0 for big in kept):
            kept.append(m)
    return kept


def cover_number_k(f: TruthTable, k, budget=DEFAULT_NODE_BUDGET, certificate=True):
    """C(f, k): fewest k-rectangles (each with its own A) whose OR is f."""
    _require_boolean(f, "cover number")
    if not 1 <= k <= max(f.n, 1):
        raise ValueError(f"k must lie in 1..{f.n}, got {k}")
    target = _bool_to_int(f.values != 0)
    if not target:
        return 0, RectCertificate("cover", [], f) if certificate else None
    cands = _k_candidates(f, k, maximal=True)
    masks = _drop_dominated(list(cands)) if len(cands) <= 4000 else list(cands)
    chosen = min_set_cover(target, masks, budget)
    cert = None
    if certificate:
        parts = [_expand_part(f, *cands[masks[i]]) for i in chosen]
        cert = RectCertificate("cover", parts, f)
    return len(chosen), cert


def partition_plus_k(f: TruthTable, k, budget=DEFAULT_NODE_BUDGET, certificate=True):
    """P+(f, k): fewest pairwise orthogonal k-rectangles summing to f."""
    if not 1 <= k <= max(f.n, 1):
        raise ValueError(f"k must lie in 1..{f.n}, got {k}")
    target = _bool_to_int(f.values != 0)
    if not target:
        return 0, RectCertificate("partition", [], f) if certificate else None
    cands = _k_candidates(f, k, maximal=False)
    masks = list(cands)
    chosen = min_exact_cover(target, masks, budget)
    cert = None
    if certificate:
        parts = [_expand_part(f, *cands[masks[i]]) for i in chosen]
        cert = RectCertificate("partition", parts, f)
    return len(chosen), cert


# -- max-min measures -------------------------------------------------------


def _cached(f, key, compute):
    if key not in f._cache:
        f._cache[key] = compute()
    return f._cache[key]


def cover_value(f, mask):
    return _cached(f, ("C", mask), lambda: cover_number_fixed(f, VarSet(f.n, mask), certificate=False)[0])


def partition_value(f, mask):
    return _cached(
        f, ("P+", mask), lambda: partition_plus_fixed(f, VarSet(f.n, mask), certificate=False)[0]
    )


def _maxmin_report(name, f, inner, cert_fn=None):
    value, k, mask = max_min(f.n, inner)
    rep = MeasureReport(name, int(value), k, mask_indices(mask, f.n))
    if cert_fn is not None:
        rep.certificate = cert_fn(VarSet(f.n, mask))
    return rep


def measure_C(f: TruthTable) -> MeasureReport:
    _require_boolean(f, "C")
    return _maxmin_report(
        "C", f, lambda m: cover_value(f, m), lambda A: cover_number_fixed(f, A)[1]
    )


def cover_k_value(f, k):
    return _cached(f, ("Ck", k), lambda: cover_number_k(f, k, certificate=False)[0])


def measure_C_hat(f: TruthTable, check=True) -> MeasureReport:
    """max_k C(f, k); also checks C-hat <= C."""
    _require_boolean(f, "C_hat")
    if f.n == 0:
        return MeasureReport("C_hat", int(f.values[0]), 0, ())
    best_k = max(range(1, f.n + 1), key=lambda k: (cover_k_value(f, k), -k))
    value = cover_k_value(f, best_k)
    rep = MeasureReport("C_hat", value, best_k, None)
    rep.certificate = cover_number_k(f, best_k)[1]
    if check:
        c = measure_C(f).value
        if value > c:
            raise InvariantViolation(f"C_hat = {value} exceeds C = {c}")
    return rep


def measure_P_plus(f: TruthTable) -> MeasureReport:
    return _maxmin_report(
        "P_plus", f, lambda m: partition_value(f, m), lambda A: partition_plus_fixed(f, A)[1]
    )


def cd_value(f, mask, check=True):
    """P+(f,A) + P+(not f,A), optionally checked against the ILP for C^D."""
    g = _cached(f, "negation", lambda: combine("negate", f))
    total = partition_value(f, mask) + partition_value(g, mask)
    if check:
        oracle = _cached(
            f, ("CD-ilp", mask), lambda: monochromatic_partition_ilp(split(f, VarSet(f.n, mask)).matrix())
        )
        if oracle != total:
            raise InvariantViolation(
                f"P+(f,A) + P+(not f,A) = {total} but C^D(f_A) = {oracle} "
                f"for A = {[i + 1 for i in mask_indices(mask, f.n)]}"
            )
    return total


def measure_P(f: TruthTable, check=True) -> MeasureReport:
    """max_k min_A P+(f,A) + P+(not f,A)."""
    _require_boolean(f, "P")
    rep = _maxmin_report("P", f, lambda m: cd_value(f, m, check))
    A = VarSet(f.n, 0) if rep.witness_A is None else VarSet.of(f.n, rep.witness_A)
    g = combine("negate", f)
    rep.extra["parts"] = {
        "f": partition_plus_fixed(f, A)[1].to_dict(),
        "not_f": partition_plus_fixed(g, A)[1].to_dict(),
    }
    return rep


def partition_k_value(f, k):
    return _cached(f, ("Pk", k), lambda: partition_plus_k(f, k, certificate=False)[0])


def measure_P_plus_hat(f: TruthTable) -> MeasureReport:
    if f.n == 0:
        return MeasureReport("P_plus_hat", int(f.values[0] != 0), 0, ())
    best_k = max(range(1, f.n + 1), key=lambda k: (partition_k_value(f, k), -k))
    rep = MeasureReport("P_plus_hat", partition_k_value(f, best_k), best_k, None)
    rep.certificate = partition_plus_k(f, best_k)[1]
    return rep


def measure_P_hat(f: TruthTable) -> MeasureReport:
    """max(P+-hat(f), P+-hat(not f))."""
    _require_boolean(f, "P_hat")
    a = measure_P_plus_hat(f)
    b = measure_P_plus_hat(combine("negate", f))
    side, pick = ("f", a) if a.value >= b.value else ("not_f", b)
    rep = MeasureReport("P_hat", pick.value, pick.witness_k, None, pick.certificate)
    rep.extra["side"] = side
    return rep
