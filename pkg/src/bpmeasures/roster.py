"""Generators for the standard function families.

Every family comes as a vectorised table builder ``gen_*`` and a slow,
literal reference evaluator ``ref_*`` taking a 0/1 tuple; tests compare
the two on every input.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .boolfn import TruthTable
from .errors import check_cells


def bit_matrix(N):
    """All inputs of N bits as rows of a (2^N, N) array, x_1 first (MSB)."""
    check_cells(N, 2)
    idx = np.arange(1 << N, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def bits_to_int(bits):
    out = 0
    for b in bits:
        out = 2 * out + int(b)
    return out


def _log2_exact(n, what):
    if n < 1 or n & (n - 1):
        raise ValueError(f"{what} needs n to be a power of two, got {n}")
    return n.bit_length() - 1


def _ceil_log2(n):
    return (n - 1).bit_length()


# -- EQ, SEQ, PARITY ----------------------------------------------------------


def gen_eq(n):
    if n < 1:
        raise ValueError("EQ needs n >= 1")
    B = bit_matrix(2 * n)
    return TruthTable(2 * n, 2, np.all(B[:, :n] == B[:, n:], axis=1))


def ref_eq(n, x):
    return int(tuple(x[:n]) == tuple(x[n:]))


def gen_seq(n):
    """SEQ_n on x (n bits), y (n bits), then ceil(log2 n) bits holding i - 1.

    Index encodings >= n are outside [n] and map to 0.
    """
    if n < 2:
        raise ValueError("SEQ needs n >= 2")
    L = _ceil_log2(n)
    B = bit_matrix(2 * n + L)
    X, Y = B[:, :n], B[:, n : 2 * n]
    shift = np.zeros(len(B), dtype=np.int64)
    for b in range(L):
        shift = 2 * shift + B[:, 2 * n + b]
    out = np.zeros(len(B), dtype=np.uint8)
    for s in range(n):
        rows = shift == s
        # y shifted left by s: position j reads y_{(j + s) mod n}
        out[rows] = np.all(X[rows] == np.roll(Y[rows], -s, axis=1), axis=1)
    return TruthTable(2 * n + L, 2, out)


def ref_seq(n, x):
    L = _ceil_log2(n)
    xs, ys = x[:n], x[n : 2 * n]
    i = bits_to_int(x[2 * n : 2 * n + L]) + 1
    if i > n:
        return 0
    for j in range(1, n + 1):
        t = (j + i - 1) % n or n
        if xs[j - 1] != ys[t - 1]:
            return 0
    return 1


def gen_parity(n):
    idx = np.arange(1 << n)
    par = np.zeros(1 << n, dtype=np.uint8)
    for b in range(n):
        par ^= ((idx >> b) & 1).astype(np.uint8)
    return TruthTable(n, 2, par)


def ref_parity(n, x):
    return sum(x) % 2


# -- clique -------------------------------------------------------------------


def clique_edges(n):
    """Edge variables (i, j), i < j, 0-based vertices, lexicographic order."""
    return list(combinations(range(n), 2))


def gen_clique(n):
    """clique_{n,n/2}: the graph is exactly a ceil(n/2)-clique plus isolated vertices."""
    if n < 2:
        raise ValueError("clique needs at least 2 vertices")
    edges = clique_edges(n)
    m = len(edges)
    check_cells(m, 2)
    out = np.zeros(1 << m, dtype=np.uint8)
    pos = {e: m - 1 - t for t, e in enumerate(edges)}
    for K in combinations(range(n), (n + 1) // 2):
        idx = 0
        for e in combinations(K, 2):
            idx |= 1 << pos[e]
        out[idx] = 1
    return TruthTable(m, 2, out)


def ref_clique(n, x):
    present = [e for e, b in zip(clique_edges(n), x) if b]
    touched = sorted({v for e in present for v in e})
    size = (n + 1) // 2
    if size == 1:
        return int(not present)
    if len(touched) != size:
        return 0
    return int(len(present) == size * (size - 1) // 2)


# -- pointer ------------------------------------------------------------------


def _pointer_shape(n):
    L = _log2_exact(n, "pointer function")
    if L == 0 or n % L:
        raise ValueError(f"pointer function needs log n to divide n, got n={n}")
    block = n // L
    m = int(round(block**0.5))
    if m * m != block:
        raise ValueError(
            f"pointer function needs n/log n to be a perfect square, got n={n}"
        )
    return L, block, m


def gen_pointer(n):
    """pi_n(x) = x_{z+1}, z_i = OR of ANDs over block i, z_1 most significant."""
    L, block, m = _pointer_shape(n)
    B = bit_matrix(n)
    z = np.zeros(len(B), dtype=np.int64)
    for i in range(L):
        blk = B[:, i * block : (i + 1) * block].reshape(len(B), m, m)
        zi = blk.all(axis=2).any(axis=1)
        z = 2 * z + zi
    return TruthTable(n, 2, B[np.arange(len(B)), z])


def ref_pointer(n, x):
    L, block, m = _pointer_shape(n)
    z = 0
    for i in range(L):
        y = x[i * block : (i + 1) * block]
        zi = any(all(y[r * m + c] for c in range(m)) for r in range(m))
        z = 2 * z + int(zi)
    return x[z]


# -- ISA ----------------------------------------------------------------------


def gen_isa(n):
    """ISA_n on log n index bits (holding i - 1) followed by x_1..x_n.

    p is read from x_i .. x_{i+log n-1} (indices mod n) and the output is
    x_{p+1}, so that p = 0 selects the first bit.
    """
    L = _log2_exact(n, "ISA")
    if L == 0:
        raise ValueError("ISA needs n >= 2")
    B = bit_matrix(L + n)
    i = np.zeros(len(B), dtype=np.int64)
    for b in range(L):
        i = 2 * i + B[:, b]
    X = B[:, L:]
    rows = np.arange(len(B))
    p = np.zeros(len(B), dtype=np.int64)
    for t in range(L):
        p = 2 * p + X[rows, (i + t) % n]
    return TruthTable(L + n, 2, X[rows, p])


def ref_isa(n, x):
    L = _log2_exact(n, "ISA")
    i = bits_to_int(x[:L])
    xs = x[L:]
    p = bits_to_int([xs[(i + t) % n] for t in range(L)])
    return xs[p]


# -- NAND tree ----------------------------------------------------------------


def gen_nand(n):
    """Balanced read-once formula of NAND_2 gates on n = 2^h inputs."""
    _log2_exact(n, "iterated NAND")
    level = bit_matrix(n).astype(bool)
    while level.shape[1] > 1:
        level = ~(level[:, 0::2] & level[:, 1::2])
    return TruthTable(n, 2, level[:, 0])


def ref_nand(n, x):
    level = list(x)
    while len(level) > 1:
        level = [int(not (a and b)) for a, b in zip(level[0::2], level[1::2])]
    return level[0]


# -- BRS ----------------------------------------------------------------------


def _hadamard_signs(d):
    n = 1 << d
    a = np.arange(n)
    dots = np.zeros((n, n), dtype=np.int64)
    for b in range(d):
        dots ^= ((a[:, None] >> b) & 1) & ((a[None, :] >> b) & 1)
    return 1 - 2 * dots


def brs_value(d, x, y):
    """Point evaluator: 1 iff sum_{a,b} (-1)^<a,b> (x_a1+x_a2)(y_b1+y_b2) = 0 mod 3."""
    n = 1 << d
    if len(x) != 2 * n or len(y) != 2 * n:
        raise ValueError(f"BRS with d={d} needs x and y of {2 * n} bits")
    total = 0
    for a in range(n):
        for b in range(n):
            sign = -1 if bin(a & b).count("1") % 2 else 1
            total += sign * (x[2 * a] + x[2 * a + 1]) * (y[2 * b] + y[2 * b + 1])
    return int(total % 3 == 0)


def gen_brs(d):
    """BRS on x then y, each 2*2^d bits laid out as pairs (z_a1, z_a2), a ascending."""
    n = 1 << d
    N = 4 * n
    B = bit_matrix(N).astype(np.int64)
    u = B[:, 0 : 2 * n : 2] + B[:, 1 : 2 * n : 2]
    v = B[:, 2 * n :: 2] + B[:, 2 * n + 1 :: 2]
    s = np.einsum("ta,ab,tb->t", u, _hadamard_signs(d), v)
    return TruthTable(N, 2, (s % 3 == 0).astype(np.uint8))


def ref_brs(d, x):
    n = 1 << d
    return brs_value(d, x[: 2 * n], x[2 * n :])


# -- combinators --------------------------------------------------------------


def product_with_parity(g: TruthTable) -> TruthTable:
    """f(x, y) = g(x) AND PARITY(y), with y as long as x."""
    if not g.is_boolean or g.d != 2:
        raise ValueError("product_with_parity needs a Boolean g")
    m = g.n
    check_cells(2 * m, 2)
    vals = np.outer(g.values, gen_parity(m).values).reshape(-1)
    return TruthTable(2 * m, 2, vals)


def gen_and(n):
    vals = np.zeros(1 << n, dtype=np.uint8)
    vals[-1] = 1
    return TruthTable(n, 2, vals)


def gen_and_parity(m):
    """AND_m(x) AND PARITY_m(y)."""
    return product_with_parity(gen_and(m))


# -- registry -----------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    family: str
    params: dict = field(default_factory=dict)

    def table(self) -> TruthTable:
        gen, _, _ = FAMILIES[self.family]
        check_cells(self.arity, 2, f"{self.family} table")
        return gen(**self.params)

    def evaluate(self, x):
        _, ref, _ = FAMILIES[self.family]
        return ref(*self.params.values(), tuple(x))

    @property
    def arity(self):
        _, _, arity = FAMILIES[self.family]
        return arity(**self.params)


def _ref_and_parity(m, x):
    return int(all(x[:m])) & ref_parity(m, x[m:])


FAMILIES = {
    "eq": (gen_eq, ref_eq, lambda n: 2 * n),
    "seq": (gen_seq, ref_seq, lambda n: 2 * n + _ceil_log2(n)),
    "parity": (gen_parity, ref_parity, lambda n: n),
    "clique": (gen_clique, ref_clique, lambda n: n * (n - 1) // 2),
    "pointer": (gen_pointer, ref_pointer, lambda n: n),
    "isa": (gen_isa, ref_isa, lambda n: n + _log2_exact(n, "ISA")),
    "nand": (gen_nand, ref_nand, lambda n: n),
    "brs": (gen_brs, ref_brs, lambda d: 4 << d),
    "and-parity": (gen_and_parity, _ref_and_parity, lambda m: 2 * m),
}

PARAM_NAME = {"brs": "d", "and-parity": "m"}


def spec_for(family, value):
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    return FunctionSpec(family, {PARAM_NAME.get(family, "n"): int(value)})
