"""Total functions ``f: D^n -> N`` stored as full value tables.

Index convention: the value of ``f(x_1, ..., x_n)`` sits at position
``sum_i x_i * d**(n - i)``, so ``x_1`` is the most significant digit.  The
same convention orders the rows (assignments ``alpha`` to ``A``) and the
columns (assignments ``beta`` to the complement) of a split matrix.

Variables are addressed by 0-based index in the Python API; reports and
files print them 1-based.
"""

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable

import numpy as np

from .errors import check_cells

BOOLEAN = "bool"
NATURAL = "nat"


def _compact(values):
    values = np.asarray(values)
    if values.size and values.min() < 0:
        raise ValueError("function values must be natural numbers")
    top = int(values.max()) if values.size else 0
    if top < 1 << 8:
        dtype = np.uint8
    elif top < 1 << 16:
        dtype = np.uint16
    elif top < 1 << 32:
        dtype = np.uint32
    else:
        dtype = np.uint64
    out = np.array(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class TruthTable:
    """A total function on ``D^n`` with ``|D| = d``, as a flat value table."""

    n: int
    d: int
    values: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.d < 2:
            raise ValueError(f"need n >= 0 and d >= 2, got n={self.n}, d={self.d}")
        values = _compact(self.values).reshape(-1)
        if values.size != self.d**self.n:
            raise ValueError(
                f"expected {self.d**self.n} values for n={self.n}, d={self.d}, "
                f"got {values.size}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, n=None, d=2):
        values = np.asarray(values).reshape(-1)
        if n is None:
            n = round(np.log(values.size) / np.log(d)) if values.size > 1 else 0
        return cls(n, d, values)

    @property
    def range_kind(self):
        return BOOLEAN if self.is_boolean else NATURAL

    @property
    def is_boolean(self):
        return bool(self.values.size == 0 or self.values.max() <= 1)

    @property
    def is_constant(self):
        return bool(np.all(self.values == self.values[0]))

    def cube(self):
        """Values as an n-dimensional array, axis i holding variable x_{i+1}."""
        return self.values.reshape((self.d,) * self.n)

    def __call__(self, *x):
        if len(x) == 1 and not np.isscalar(x[0]):
            x = tuple(x[0])
        if len(x) != self.n:
            raise ValueError(f"expected {self.n} arguments, got {len(x)}")
        return int(self.values[index_of(x, self.d)])

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.n, self.d, self.values.tobytes()))

    def __invert__(self):
        return combine("negate", self)

    def __and__(self, other):
        return combine("and", self, other)

    def __or__(self, other):
        return combine("or", self, other)

    def __repr__(self):
        body = " ".join(map(str, self.values[:16].tolist()))
        more = " ..." if self.values.size > 16 else ""
        return f"TruthTable(n={self.n}, d={self.d}, [{body}{more}])"


def index_of(x, d=2):
    idx = 0
    for xi in x:
        if not 0 <= xi < d:
            raise ValueError(f"digit {xi} outside 0..{d - 1}")
        idx = idx * d + int(xi)
    return idx


def digits_of(index, n, d=2):
    out = [0] * n
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, d)
    return tuple(out)


def build_table(n: int, d: int, fn: Callable[[tuple], int]) -> TruthTable:
    """Tabulate ``fn`` over ``D^n`` in canonical index order."""
    if n < 0 or d < 2:
        raise ValueError(f"need n >= 0 and d >= 2, got n={n}, d={d}")
    check_cells(n, d)
    values = [fn(x) for x in product(range(d), repeat=n)]
    return TruthTable(n, d, np.array(values, dtype=np.int64))


def constant(n, value=1, d=2):
    return TruthTable(n, d, np.full(d**n, value))


def variable(n, i):
    """The projection ``x -> x_{i+1}`` on n Boolean variables."""
    return TruthTable(n, 2, (np.arange(2**n) >> (n - 1 - i)) & 1)


# -- variable sets ----------------------------------------------------------


@dataclass(frozen=True)
class VarSet:
    """A subset ``A`` of the variable positions ``0..n-1``."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#b} out of range for n={self.n}")

    @classmethod
    def of(cls, n, indices: Iterable[int]):
        mask = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"variable index {i} out of range for n={n}")
            mask |= 1 << i
        return cls(n, mask)

    @property
    def indices(self):
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    @property
    def complement(self):
        return tuple(i for i in range(self.n) if not self.mask >> i & 1)

    @property
    def one_based(self):
        return [i + 1 for i in self.indices]

    @property
    def perm(self):
        """pi_A: the members of A ascending, then the complement ascending."""
        return self.indices + self.complement

    def __len__(self):
        return bin(self.mask).count("1")


def as_varset(n, A) -> VarSet:
    if isinstance(A, VarSet):
        if A.n != n:
            raise ValueError(f"VarSet over {A.n} variables used with n={n}")
        return A
    return VarSet.of(n, A)


def mask_indices(mask, n):
    return tuple(i for i in range(n) if mask >> i & 1)


def subsets_of_size(n, k):
    """Masks of all k-subsets of range(n), in lexicographic order of index tuples."""
    for combo in combinations(range(n), k):
        m = 0
        for i in combo:
            m |= 1 << i
        yield m


# -- split matrices ---------------------------------------------------------


def split_matrix(f: TruthTable, A) -> np.ndarray:
    """The matrix ``f_A`` as a ``d^|A| x d^(n-|A|)`` array (a fresh copy)."""
    A = as_varset(f.n, A)
    rows = f.d ** len(A)
    return np.ascontiguousarray(f.cube().transpose(A.perm)).reshape(rows, -1)


@dataclass(frozen=True)
class SplitView:
    table: TruthTable
    A: VarSet

    @property
    def rows(self):
        return self.table.d ** len(self.A)

    @property
    def cols(self):
        return self.table.d ** (self.table.n - len(self.A))

    def matrix(self):
        key = ("split", self.A.mask)
        cache = self.table._cache
        if key not in cache:
            mat = split_matrix(self.table, self.A)
            mat.flags.writeable = False
            cache[key] = mat
        return cache[key]

    def entry(self, alpha, beta):
        if not 0 <= alpha < self.rows or not 0 <= beta < self.cols:
            raise IndexError(f"entry ({alpha}, {beta}) outside {self.rows}x{self.cols}")
        A = self.A
        d = self.table.d
        x = [0] * self.table.n
        for pos, digit in zip(A.indices, digits_of(alpha, len(A), d)):
            x[pos] = digit
        for pos, digit in zip(A.complement, digits_of(beta, self.table.n - len(A), d)):
            x[pos] = digit
        return int(self.table.values[index_of(x, d)])


def split(f: TruthTable, A) -> SplitView:
    return SplitView(f, as_varset(f.n, A))


def subfunction(f: TruthTable, A, alpha: int) -> TruthTable:
    """The restriction ``f_{A, alpha}`` as a table over the complement of A."""
    view = split(f, A)
    if not 0 <= alpha < view.rows:
        raise ValueError(f"row index {alpha} outside 0..{view.rows - 1}")
    return TruthTable(f.n - len(view.A), f.d, view.matrix()[alpha])


# -- row statistics ---------------------------------------------------------


@dataclass(frozen=True)
class RowStats:
    nrows: int
    mult: int


def row_keys(mat: np.ndarray, boolean=None) -> np.ndarray:
    """One exact, hashable key per matrix row (bytes of the packed row).

    Equal keys iff equal rows; no hashing is involved, so there is nothing
    to confirm on collision.
    """
    mat = np.ascontiguousarray(mat)
    if boolean is None:
        boolean = mat.size == 0 or mat.max() <= 1
    if boolean:
        mat = np.packbits(mat.astype(np.uint8, copy=False), axis=1)
    elif mat.dtype != np.uint8 and (mat.size == 0 or mat.max() < 256):
        mat = mat.astype(np.uint8)
    raw = mat.view(np.uint8).reshape(mat.shape[0], -1)
    width = raw.shape[1]
    if width <= 8:
        padded = np.zeros((raw.shape[0], 8), dtype=np.uint8)
        padded[:, :width] = raw
        return padded.view(np.uint64).reshape(-1)
    return np.ascontiguousarray(raw).view(np.dtype((np.void, width))).reshape(-1)


def matrix_row_stats(mat: np.ndarray, boolean=None) -> RowStats:
    _, counts = np.unique(row_keys(mat, boolean), return_counts=True)
    return RowStats(int(counts.size), int(counts.max()))


def row_stats(f: TruthTable, A) -> RowStats:
    return matrix_row_stats(split(f, A).matrix(), f.is_boolean)


def subset_stats(f: TruthTable):
    """``(nrows, mult)`` arrays indexed by mask, over all ``2^n`` subsets.

    Cached on the table; this is the kernel behind S, S-hat, S* and the
    OBDD level counts.
    """
    cache = f._cache
    if "subset_stats" not in cache:
        n = f.n
        nrows = np.zeros(1 << n, dtype=np.int64)
        mult = np.zeros(1 << n, dtype=np.int64)
        cube = f.cube()
        boolean = f.is_boolean
        low = int(f.values.min()) if f.values.size else 0
        if not boolean and int(f.values.max()) - low <= 1:
            # two values: shifting to {0,1} is a bijection, and bits pack tighter
            cube = (f.values - low).astype(np.uint8).reshape(cube.shape)
            boolean = True
        for mask in range(1 << n):
            A = mask_indices(mask, n)
            comp = tuple(i for i in range(n) if not mask >> i & 1)
            mat = np.ascontiguousarray(cube.transpose(A + comp)).reshape(
                f.d ** len(A), -1
            )
            _, counts = np.unique(row_keys(mat, boolean), return_counts=True)
            nrows[mask] = counts.size
            mult[mask] = counts.max()
        nrows.flags.writeable = False
        mult.flags.writeable = False
        cache["subset_stats"] = (nrows, mult)
    return cache["subset_stats"]


# -- rectangles -------------------------------------------------------------


def matrix_rectangle_witness(mat: np.ndarray):
    """``(g, h)`` with ``mat[i, j] == g[i] * h[j]`` and boolean g, or None."""
    nonzero = np.flatnonzero(mat.any(axis=1))
    if nonzero.size == 0:
        return np.zeros(mat.shape[0], dtype=np.uint8), np.zeros(mat.shape[1], dtype=np.int64)
    h = mat[nonzero[0]]
    g = np.zeros(mat.shape[0], dtype=np.uint8)
    for i, row in enumerate(mat):
        if np.array_equal(row, h):
            g[i] = 1
        elif row.any():
            return None
    return g, h.astype(np.int64)


def rectangle_witness(f: TruthTable, A):
    """Witness ``(g, h)`` that f is an A-rectangle, or None if it is not."""
    return matrix_rectangle_witness(split(f, A).matrix())


def is_rectangle(f: TruthTable, A) -> bool:
    return rectangle_witness(f, A) is not None


# -- pointwise operations ---------------------------------------------------

_OPS = {
    "negate": 1,
    "and": 2,
    "or": 2,
    "product": 2,
    "sum": 2,
}


def combine(op: str, *args: TruthTable) -> TruthTable:
    """Pointwise ``negate``, ``and``, ``or``, ``product`` or ``sum``."""
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if op == "negate" and len(args) != 1:
        raise ValueError("negate takes exactly one table")
    if len(args) < _OPS[op]:
        raise ValueError(f"{op} takes at least two tables")
    first = args[0]
    for other in args[1:]:
        if (other.n, other.d) != (first.n, first.d):
            raise ValueError(
                f"arity/radix mismatch: ({first.n}, {first.d}) vs ({other.n}, {other.d})"
            )
    if op in ("negate", "and", "or") and not all(t.is_boolean for t in args):
        raise ValueError(f"{op} needs Boolean-valued tables")
    vals = [t.values.astype(np.int64) for t in args]
    if op == "negate":
        out = 1 - vals[0]
    elif op == "and" or op == "product":
        out = np.prod(vals, axis=0)
    elif op == "or":
        out = np.max(vals, axis=0)
    else:
        out = np.sum(vals, axis=0)
    return TruthTable(first.n, first.d, out)


def is_orthogonal(f: TruthTable, g: TruthTable) -> bool:
    """True iff ``f * g`` is the zero function."""
    return not combine("product", f, g).values.any()


# -- text file format -------------------------------------------------------


def format_tt(f: TruthTable, per_line=32) -> str:
    vals = f.values.tolist()
    lines = [f"TT {f.n} {f.d} {f.range_kind}"]
    for i in range(0, len(vals), per_line):
        lines.append(" ".join(map(str, vals[i : i + per_line])))
    return "\n".join(lines) + "\n"


def parse_tt(text: str) -> TruthTable:
    tokens = text.split()
    if len(tokens) < 4 or tokens[0] != "TT":
        raise ValueError("not a TT file: expected header 'TT <n> <d> <bool|nat>'")
    try:
        n, d = int(tokens[1]), int(tokens[2])
        values = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise ValueError(f"malformed TT file: {exc}") from None
    kind = tokens[3]
    if kind not in (BOOLEAN, NATURAL):
        raise ValueError(f"range kind must be 'bool' or 'nat', got {kind!r}")
    if len(values) != d**n:
        raise ValueError(f"TT header promises {d**n} values, found {len(values)}")
    f = TruthTable(n, d, np.array(values, dtype=np.int64))
    if kind == BOOLEAN and not f.is_boolean:
        raise ValueError("TT file declared bool but has values outside {0,1}")
    return f


def read_tt(path) -> TruthTable:
    with open(path) as fh:
        return parse_tt(fh.read())


def write_tt(f: TruthTable, path):
    with open(path, "w") as fh:
        fh.write(format_tt(f))


def unsplit(mat, n, d, A) -> np.ndarray:
    """Inverse of :func:`split_matrix`: flat values from a matrix in f_A layout."""
    A = as_varset(n, A)
    perm = A.perm
    inverse = np.argsort(perm)
    return np.asarray(mat).reshape((d,) * n).transpose(inverse).reshape(-1)


def cell_index_matrix(n, d, A) -> np.ndarray:
    """Global table index of every cell of the f_A matrix."""
    A = as_varset(n, A)
    cube = np.arange(d**n).reshape((d,) * n)
    return np.ascontiguousarray(cube.transpose(A.perm)).reshape(d ** len(A), -1)
