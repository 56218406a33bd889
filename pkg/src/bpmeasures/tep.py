"""Tree evaluation: layout, evaluation, tables, subfunction profiles.

Layout of (TEP, h) over alphabet [k]: the root matrix row-major (k^2
variables, entry (i, j) at position i*k + j), then the left subtree, then
the right subtree, each laid out the same way.  (TEP, 1) is a single leaf.
Internally digits 0..k-1 stand for the symbols 1..k; tables store 1..k.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .boolfn import TruthTable, VarSet, mask_indices, row_keys, split_matrix, subset_stats
from .errors import BudgetExceeded, InvariantViolation, check_cells


def tep_size(h, k):
    """n_h = 2 n_{h-1} + k^2 with n_1 = 1."""
    if h < 1:
        raise ValueError("height must be at least 1")
    return 1 if h == 1 else 2 * tep_size(h - 1, k) + k * k


@dataclass(frozen=True)
class TepLayout:
    h: int
    k: int

    def __post_init__(self):
        if self.h < 1 or self.k < 2:
            raise ValueError(f"need h >= 1 and k >= 2, got h={self.h}, k={self.k}")

    @property
    def n(self):
        return tep_size(self.h, self.k)

    @property
    def child(self):
        return TepLayout(self.h - 1, self.k)

    @property
    def M(self):
        return range(0, self.k**2) if self.h > 1 else range(0)

    @property
    def L(self):
        if self.h == 1:
            return range(0)
        return range(self.k**2, self.k**2 + self.child.n)

    @property
    def R(self):
        if self.h == 1:
            return range(0)
        return range(self.k**2 + self.child.n, self.n)

    def position(self, v):
        """('leaf', path) or ('matrix', path, i, j), path a string over 'LR'."""
        if not 0 <= v < self.n:
            raise ValueError(f"variable {v} outside 0..{self.n - 1}")
        path = ""
        lay = self
        while lay.h > 1:
            if v < lay.k**2:
                return ("matrix", path, v // lay.k, v % lay.k)
            v -= lay.k**2
            if v < lay.child.n:
                path += "L"
            else:
                v -= lay.child.n
                path += "R"
            lay = lay.child
        return ("leaf", path)

    def parts(self, A):
        """(A_M, A_L, A_R); A_L and A_R are re-indexed relative to their subtree."""
        A = sorted(A)
        m = self.k**2
        c = self.child.n if self.h > 1 else 0
        AM = tuple(v for v in A if v < m) if self.h > 1 else ()
        AL = tuple(v - m for v in A if m <= v < m + c)
        AR = tuple(v - m - c for v in A if v >= m + c)
        return AM, AL, AR

    def join(self, AM, AL, AR):
        m, c = self.k**2, self.child.n
        return tuple(sorted(AM)) + tuple(v + m for v in AL) + tuple(v + m + c for v in AR)

    def mirror(self, v):
        """Image of variable v under (swap subtrees, transpose root matrix)."""
        if self.h == 1:
            return v
        m, c = self.k**2, self.child.n
        if v < m:
            i, j = divmod(v, self.k)
            return j * self.k + i
        if v < m + c:
            return v + c
        return v - c


def tep_eval(h, k, x):
    """Bottom-up evaluation with symbols 1..k in and out."""
    lay = TepLayout(h, k)
    x = list(x)
    if len(x) != lay.n:
        raise ValueError(f"(TEP,{h}) with k={k} takes {lay.n} symbols, got {len(x)}")
    for s in x:
        if not 1 <= s <= k:
            raise ValueError(f"symbol {s} outside 1..{k}")

    def go(lay, xs):
        if lay.h == 1:
            return xs[0]
        m, c = lay.k**2, lay.child.n
        left = go(lay.child, xs[m : m + c])
        right = go(lay.child, xs[m + c :])
        return xs[(left - 1) * lay.k + (right - 1)]

    return go(lay, x)


def _digits(n, k, v):
    idx = np.arange(k**n, dtype=np.int64)
    return (idx // k ** (n - 1 - v)) % k


def tep_table(h, k) -> TruthTable:
    """Full table of (TEP, h) over [k]^{n_h}, values 1..k."""
    lay = TepLayout(h, k)
    n = lay.n
    check_cells(n, k)

    def go(lay, offset):
        if lay.h == 1:
            return _digits(n, k, offset)
        m, c = lay.k**2, lay.child.n
        left = go(lay.child, offset + m)
        right = go(lay.child, offset + m + c)
        entries = np.stack([_digits(n, k, offset + e) for e in range(m)])
        pick = (left * k + right)[None, :]
        return np.take_along_axis(entries, pick, axis=0)[0]

    return TruthTable(n, k, go(lay, 0) + 1)


@lru_cache(maxsize=None)
def cached_table(h, k):
    return tep_table(h, k)


def nrows_of(f: TruthTable, A):
    mat = split_matrix(f, A)
    return int(np.unique(row_keys(mat), return_counts=False).size)


# -- S profile -----------------------------------------------------------------


def min_rows_closed_form(k, ell):
    """Closed form for min_{|A| = ell} nrows((TEP,2)_A)."""
    if ell <= k + 1:
        return k * k - (k - 1) * (k + 1 - ell)
    return k * k + k + 2 - ell


def validate_mirror_symmetry(h=2, k=2):
    """Exhaustively check nrows(A) = nrows(mirror(A)) for every A."""
    lay = TepLayout(h, k)
    f = cached_table(h, k)
    nrows, _ = subset_stats(f)
    for mask in range(1 << lay.n):
        image = 0
        for v in mask_indices(mask, lay.n):
            image |= 1 << lay.mirror(v)
        if nrows[mask] != nrows[image]:
            return False
    return True


def s_tep_profile(h, k, ells=None, budget_secs=None, symmetry=False):
    """Per ell: exact min over |A| = ell of nrows((TEP,h)_A), with a witness.

    Returns a list of dicts {ell, S_value, witness_A (1-based), complete}.
    When the time budget runs out, the current ell is reported with
    ``complete = False`` (its value is then only an upper bound on the min)
    and later ells are not attempted.
    """
    lay = TepLayout(h, k)
    n = lay.n
    f = cached_table(h, k)
    if symmetry and not validate_mirror_symmetry(2, 2):
        raise InvariantViolation("mirror symmetry failed its exhaustive validation")
    ells = list(range(1, n + 1)) if ells is None else list(ells)
    start = time.monotonic()
    out = []
    for ell in ells:
        if not 1 <= ell <= n:
            raise ValueError(f"ell must lie in 1..{n}, got {ell}")
        best = None
        complete = True
        for A in combinations(range(n), ell):
            if symmetry:
                image = tuple(sorted(lay.mirror(v) for v in A))
                if image < A:
                    continue
            if budget_secs is not None and time.monotonic() - start > budget_secs:
                complete = False
                break
            v = nrows_of(f, A)
            if best is None or v < best[0]:
                best = (v, A)
        entry = {"ell": ell, "S_value": None, "witness_A": None, "complete": complete}
        if best is not None:
            entry["S_value"] = best[0]
            entry["witness_A"] = [i + 1 for i in best[1]]
        out.append(entry)
        if not complete:
            break
    return out


def s_tep(h, k, budget_secs=None):
    """(S(TEP,h), argmax ells, full profile)."""
    prof = s_tep_profile(h, k, budget_secs=budget_secs)
    if not all(p["complete"] for p in prof) or len(prof) < tep_size(h, k):
        raise BudgetExceeded("S(TEP) profile incomplete", bounds=prof)
    top = max(p["S_value"] for p in prof)
    return top, [p["ell"] for p in prof if p["S_value"] == top], prof


def s_upper_bound(h, k):
    """k^h - k^(h-2) (k-2), the ceiling for h >= 3."""
    return k**h - k ** (h - 2) * (k - 2)


# -- S-hat ---------------------------------------------------------------------


def s_hat_tep(h, k):
    """Exact S-hat of (TEP,h) with numerator k^ell, plus the reported bounds."""
    f = cached_table(h, k)
    n = f.n
    _, mult = subset_stats(f)
    best = None
    for ell in range(1, n + 1):
        masks = np.fromiter(
            (sum(1 << i for i in c) for c in combinations(range(n), ell)), dtype=np.int64
        )
        j = int(np.argmax(mult[masks]))
        v = Fraction(k**ell, int(mult[masks][j]))
        if best is None or v > best[0]:
            best = (v, ell, int(masks[j]))
    value, ell, mask = best
    if value < k:
        raise InvariantViolation(f"S_hat(TEP,{h}) = {value} < k = {k}")
    upper = Fraction(2 ** (2 ** (h - 1) + 1) * k, 3)
    return {
        "h": h,
        "k": k,
        "value": value,
        "witness_ell": ell,
        "witness_A": [i + 1 for i in mask_indices(mask, n)],
        "lower": k,
        "upper_reported": upper,
        "upper_hypothesis_holds": 2**h <= k,
        "within_upper": value <= upper,
    }


# -- structural lemmas as checks -------------------------------------------------


def _classes(f, A):
    mat = split_matrix(f, A)
    _, inv = np.unique(row_keys(mat), return_inverse=True)
    return inv.reshape(-1), mat


def check_full_range(h, k, A):
    """Some row of the split is a full-range subfunction (needs |A| <= n_h - 1)."""
    f = cached_table(h, k)
    mat = split_matrix(f, A)
    hits = np.ones(mat.shape[0], dtype=bool)
    for r in range(1, k + 1):
        hits &= (mat == r).any(axis=1)
    return bool(hits.any())


def check_equivalence(h, k, AL, AR):
    """A = (empty, A_L, A_R): row classes equal the pairs of child row classes."""
    lay = TepLayout(h, k)
    f = cached_table(h, k)
    g = cached_table(h - 1, k)
    cls, _ = _classes(f, lay.join((), AL, AR))
    cl, _ = _classes(g, AL)
    cr, _ = _classes(g, AR)
    pair = (cl[:, None] * (cr.max() + 1) + cr[None, :]).reshape(-1)
    # the two labelings define the same partition iff the joint labeling has
    # as many classes as each one alone
    joint = np.unique(cls * (pair.max() + 1) + pair).size
    return joint == np.unique(cls).size == np.unique(pair).size


def check_easy_case(h, k, A):
    lay = TepLayout(h, k)
    AM, AL, AR = lay.parts(A)
    if len(AL) > lay.child.n - 1 or len(AR) > lay.child.n - 1:
        raise ValueError("easy case needs |A_L|, |A_R| <= n_{h-1} - 1")
    return nrows_of(cached_table(h, k), A) >= k ** len(AM)


def check_one_row(h, k, A):
    lay = TepLayout(h, k)
    AM, AL, AR = lay.parts(A)
    if len(AL) != lay.child.n or len(AR) > lay.child.n - 1:
        raise ValueError("one-row lemma needs A_L = L and |A_R| <= n_{h-1} - 1")
    r = [sum(1 for v in AM if v // k == i) for i in range(k)]
    value = nrows_of(cached_table(h, k), A)
    bound = k**k if k in r else sum(k**ri for ri in r)
    return value >= bound


def check_am_small(h, k, A):
    """|A_M| <= k: nrows(A) >= nrows_L(A_L) nrows_R(A_R), with equality if A_M is empty."""
    lay = TepLayout(h, k)
    AM, AL, AR = lay.parts(A)
    if len(AM) > k:
        raise ValueError("lemma needs |A_M| <= k")
    g = cached_table(h - 1, k)
    whole = nrows_of(cached_table(h, k), A)
    prod = nrows_of(g, AL) * nrows_of(g, AR)
    return whole == prod if not AM else whole >= prod


def half_size_set(h, k, ell):
    """A set of size ell with every leaf and >= half of every matrix, then padded."""
    lay = TepLayout(h, k)
    need = []
    rest = []
    half = (k * k + 1) // 2
    for v in range(lay.n):
        pos = lay.position(v)
        if pos[0] == "leaf" or pos[2] * k + pos[3] < half:
            need.append(v)
        else:
            rest.append(v)
    if ell < len(need):
        raise ValueError(f"ell = {ell} is below the {len(need)} forced variables")
    return tuple(sorted(need + rest[: ell - len(need)]))


def check_half_size(h, k, ell, A=None):
    """Every symbol i is the constant subfunction with probability >= 1/(2^(2^(h-1)-1) k)."""
    A = half_size_set(h, k, ell) if A is None else tuple(A)
    mat = split_matrix(cached_table(h, k), A)
    const = (mat == mat[:, :1]).all(axis=1)
    threshold = Fraction(1, 2 ** (2 ** (h - 1) - 1) * k)
    probs = [Fraction(int((const & (mat[:, 0] == i)).sum()), mat.shape[0]) for i in range(1, k + 1)]
    return all(p >= threshold for p in probs), probs


def pattern_checks(k):
    """Per-pattern nrows values of (TEP,2)_A, each verified exhaustively over its pattern."""
    lay = TepLayout(2, k)
    f = cached_table(2, k)
    x, y = k * k, k * k + 1
    M = list(range(k * k))
    rows = []
    for ell in range(1, k * k + 1):
        vals = {nrows_of(f, AM) for AM in combinations(M, ell)}
        rows.append(("(A_M,-,-)", ell, vals == {k**ell}))
    for ell in range(2, k * k + 2):
        t = ell - 1
        if t <= (k - 1) * k:
            p, q = divmod(t, k)
            AM = [i * k + j for j in range(p) for i in range(k)] + [i * k + p for i in range(q)]
            ok = nrows_of(f, tuple(sorted(AM)) + (x,)) == q * k ** (p + 1) + (k - q) * k**p
            rows.append(("(A_M,x,-) greedy", ell, ok))
        else:
            ok = all(nrows_of(f, AM + (x,)) >= k**k for AM in combinations(M, t))
            rows.append(("(A_M,x,-) dense", ell, ok))
    rows.append(("(-,x,y)", 2, nrows_of(f, (x, y)) == k * k))
    for ell in range(3, lay.n + 1):
        vals = {nrows_of(f, AM + (x, y)) for AM in combinations(M, ell - 2)}
        rows.append(("(A_M,x,y)", ell, vals == {k * k + k + 2 - ell}))
    return rows


def tep_lemma_suite(h, k, samples=300, seed=0, am_small_max=None):
    """Run the subfunction lemmas on (h, k); exhaustive where cheap, seeded samples otherwise."""
    lay = TepLayout(h, k)
    n = lay.n
    rng = np.random.default_rng(seed)
    exhaustive = n <= 12
    report = {}

    def subsets(pred_sizes):
        if exhaustive:
            for ell in pred_sizes:
                yield from combinations(range(n), ell)
        else:
            sizes = list(pred_sizes)
            for _ in range(samples):
                ell = int(rng.choice(sizes))
                yield tuple(sorted(rng.choice(n, ell, replace=False).tolist()))

    report["non_constant_subfunc"] = all(check_full_range(h, k, A) for A in subsets(range(0, n)))

    c = lay.child.n
    ok_eq, ok_small, count_small = True, True, 0
    limit = n if am_small_max is None else am_small_max
    for a in range(0, c + 1):
        for b in range(0, c + 1):
            if a + b > limit:
                continue
            for AL in combinations(range(c), a):
                for AR in combinations(range(c), b):
                    if not exhaustive and am_small_max is None and rng.random() > 0.05:
                        continue
                    ok_eq &= check_equivalence(h, k, AL, AR)
                    ok_small &= check_am_small(h, k, lay.join((), AL, AR))
                    count_small += 1
    report["equivalence"] = ok_eq
    report["am_small_equality"] = ok_small
    report["am_small_checked"] = count_small

    easy = [
        A
        for A in subsets(range(1, n))
        if all(len(p) <= c - 1 for p in lay.parts(A)[1:])
    ]
    report["easy_case"] = all(check_easy_case(h, k, A) for A in easy)

    ok_one = True
    L = tuple(lay.L)
    others = [v for v in range(n) if v not in L]
    for extra in range(0, len(others) + 1):
        for B in combinations(others, extra):
            A = tuple(sorted(L + B))
            if len(lay.parts(A)[2]) <= c - 1:
                ok_one &= check_one_row(h, k, A)
            if not exhaustive and extra > 3:
                break
    report["one_row"] = ok_one

    ells = [ell for ell in range(1, n + 1) if 2 * ell >= n + 2 ** (h - 1)]
    results = []
    for ell in ells:
        try:
            ok, _ = check_half_size(h, k, ell)
        except ValueError:
            ok = None
        results.append((ell, ok))
    report["half_size"] = results
    return report
