"""Deterministic and nondeterministic communication cost of split matrices."""

import math
from dataclasses import dataclass, field

import numpy as np

from ..boolfn import SplitView, TruthTable, VarSet, mask_indices, split
from ..errors import BudgetExceeded, InvariantViolation
from .maxmin import max_min
from .rectangles import cover_value, reduce_matrix
from .report import MeasureReport

ROWS, COLS = "rows", "cols"
MAX_SIDE = 1 << 8


@dataclass
class ProtocolNode:
    """A node of a protocol tree over original row/column indices.

    Internal nodes: ``owner`` sends one bit; rows (or columns) listed in
    ``zero_side`` go to ``children[0]``, the rest to ``children[1]``.
    Leaves have ``owner = None`` and carry the common ``value``.
    """

    rows: tuple
    cols: tuple
    owner: str | None = None
    zero_side: tuple = ()
    children: list = field(default_factory=list)
    value: int | None = None

    def depth(self):
        if self.owner is None:
            return 0
        return 1 + max(c.depth() for c in self.children)

    def leaves(self):
        if self.owner is None:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()

    def check(self, mat):
        """True iff the leaves are monochromatic and tile the matrix exactly."""
        mat = np.asarray(mat)
        seen = np.zeros(mat.shape, dtype=np.int64)
        for leaf in self.leaves():
            block = mat[np.ix_(leaf.rows, leaf.cols)]
            if block.size and not np.all(block == leaf.value):
                return False
            seen[np.ix_(leaf.rows, leaf.cols)] += 1
        return bool(np.all(seen == 1))


def _ceil_log2(x):
    return 0 if x <= 1 else (x - 1).bit_length()


def _key(red):
    return red.shape, red.tobytes()


class ProtocolSearch:
    """Exact optimal protocol depth by memoised search over sub-rectangles.

    Sub-rectangles are canonicalised by removing duplicate rows/columns, which
    leaves the optimal cost unchanged.
    """

    def __init__(self, budget=2_000_000):
        self.memo = {}
        self.budget = budget
        self.calls = 0

    def feasible(self, red, d):
        if red.min() == red.max():
            return True
        if d == 0:
            return False
        nr, nc = red.shape
        if 1 + _ceil_log2(min(nr, nc)) <= d:
            return True
        key = (_key(red), d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded(f"protocol search exceeded {self.budget} states")
        # every leaf is a rectangle of rank <= 1, so rank <= #leaves <= 2^d
        ok = np.linalg.matrix_rank(red.astype(float)) <= 1 << d
        ok = ok and self._split(red, d) is not None
        self.memo[key] = ok
        return ok

    def _split(self, red, d):
        for owner in (ROWS, COLS):
            mat = red if owner == ROWS else red.T
            m = mat.shape[0]
            if m < 2:
                continue
            for sub in range(1, 1 << (m - 1)):
                # the last class always goes to the one side, so each split is tried once
                pick = np.array([(sub >> i & 1) == 1 for i in range(m)])
                a, b = mat[pick], mat[~pick]
                if owner == COLS:
                    a, b = a.T, b.T
                if self.feasible(reduce_matrix(a)[0], d - 1) and self.feasible(
                    reduce_matrix(b)[0], d - 1
                ):
                    return owner, sub
        return None

    def cost(self, mat):
        mat = np.asarray(mat)
        red = reduce_matrix(mat)[0]
        if red.min() == red.max():
            return 0
        d = max(1, _ceil_log2(int(np.linalg.matrix_rank(red.astype(float)))))
        while not self.feasible(red, d):
            d += 1
        return d

    def protocol(self, mat, d=None):
        """A protocol tree of depth ``d`` (default: optimal) for ``mat``."""
        mat = np.asarray(mat)
        if d is None:
            d = self.cost(mat)
        return self._build(mat, tuple(range(mat.shape[0])), tuple(range(mat.shape[1])), d)

    def _build(self, mat, rows, cols, d):
        sub = mat[np.ix_(rows, cols)]
        if sub.min() == sub.max():
            return ProtocolNode(rows, cols, value=int(sub.flat[0]))
        red, rc, cc = reduce_matrix(sub)
        nr, nc = red.shape
        if 1 + _ceil_log2(min(nr, nc)) <= d:
            # announce the class on the side with fewer classes, halving each time
            owner, classes, members = (ROWS, rc, rows) if nr <= nc else (COLS, cc, cols)
            count = nr if owner == ROWS else nc
            if count == 1:
                # one class on the owner's side: the other side splits by value
                owner = COLS if owner == ROWS else ROWS
                line = red[0] if owner == COLS else red[:, 0]
                classes = cc if owner == COLS else rc
                members = cols if owner == COLS else rows
                zero = tuple(m for m, c in zip(members, classes) if line[c] == 0)
            else:
                half = (count + 1) // 2
                zero = tuple(m for m, c in zip(members, classes) if c < half)
        else:
            found = self._split(red, d)
            if found is None:
                raise InvariantViolation("protocol search lost a feasible split")
            owner, subset = found
            classes, members, m = (rc, rows, nr) if owner == ROWS else (cc, cols, nc)
            zero = tuple(
                x for x, c in zip(members, classes) if (subset >> c & 1) == 1 and c != m - 1
            )
        zero_set = set(zero)
        if owner == ROWS:
            one = tuple(r for r in rows if r not in zero_set)
            kids = [self._build(mat, zero, cols, d - 1), self._build(mat, one, cols, d - 1)]
        else:
            one = tuple(c for c in cols if c not in zero_set)
            kids = [self._build(mat, rows, zero, d - 1), self._build(mat, rows, one, d - 1)]
        return ProtocolNode(rows, cols, owner, zero, kids)


def _view_matrix(view):
    mat = view.matrix() if isinstance(view, SplitView) else np.asarray(view)
    if mat.size and mat.max() > 1:
        raise ValueError("communication measures need a Boolean matrix")
    if mat.shape[0] > MAX_SIDE or mat.shape[1] > MAX_SIDE:
        raise BudgetExceeded(f"matrix {mat.shape} exceeds {MAX_SIDE} per side")
    return mat


def ccm(view, search=None):
    """(cost, protocol tree) of an optimal deterministic protocol."""
    mat = _view_matrix(view)
    search = search or ProtocolSearch()
    d = search.cost(mat)
    return d, search.protocol(mat, d)


def nccm(view):
    """log2 of the number of 1-rectangles needed to cover the ones."""
    from .rectangles import maximal_one_rectangles, _bool_to_int, _cells
    from .setcover import min_set_cover

    mat = _view_matrix(view)
    red = reduce_matrix(mat)[0]
    nc = red.shape[1]
    rects = maximal_one_rectangles(red)
    count = len(min_set_cover(_bool_to_int(red != 0), [_cells(R, C, nc) for R, C in rects]))
    return math.log2(count) if count else float("-inf")


def ccm_value(f, mask, search):
    key = ("ccm", mask)
    if key not in f._cache:
        f._cache[key] = ccm_cost(split(f, VarSet(f.n, mask)), search)
    return f._cache[key]


def ccm_cost(view, search=None):
    return (search or ProtocolSearch()).cost(_view_matrix(view))


def measure_CC(f: TruthTable) -> MeasureReport:
    """max_k min_A ccm(f_A); checks CC <= n/2 + 1."""
    if not f.is_boolean:
        raise ValueError("CC needs a Boolean function")
    search = ProtocolSearch()
    value, k, mask = max_min(f.n, lambda m: ccm_value(f, m, search))
    if 2 * value > f.n + 2:
        raise InvariantViolation(f"CC = {value} exceeds n/2 + 1 for n = {f.n}")
    rep = MeasureReport("CC", int(value), k, mask_indices(mask, f.n))
    rep.extra["protocol_depth"] = value
    return rep


def measure_NCC(f: TruthTable) -> MeasureReport:
    """max_k min_A log2 C(f, A), reported as a real; ``extra['log2_of']`` is exact."""
    if not f.is_boolean:
        raise ValueError("NCC needs a Boolean function")
    value, k, mask = max_min(f.n, lambda m: cover_value(f, m))
    rep = MeasureReport(
        "NCC", math.log2(value) if value else float("-inf"), k, mask_indices(mask, f.n)
    )
    rep.extra["log2_of"] = int(value)
    return rep
