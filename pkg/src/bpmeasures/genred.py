"""GEN by closure, De Morgan circuits, and the read-once projection of circuits into GEN.

A GEN instance over [m] is a commutative table X_ij, 1 <= i <= j <= m-1.
GEN(X) = 1 iff m lies in the least set that contains X_11 and is closed
under taking X_ij for i, j drawn from the set together with 1.

The projection uses the elements $_0..$_n, (X_i, 0/1) and (g, 0/1) per
non-input gate.  $_0 is element 1 and (output, 1) is element m; the rest
follow in that listing order.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, InvariantViolation


# -- GEN -------------------------------------------------------------------------


@dataclass
class GenTable:
    m: int
    X: np.ndarray  # (m-1) x (m-1), symmetric, entries in 1..m

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("GEN needs m >= 2")
        X = np.asarray(self.X, dtype=np.int64)
        if X.shape != (self.m - 1, self.m - 1):
            raise ValueError(f"table must be {self.m - 1}x{self.m - 1}")
        if X.min() < 1 or X.max() > self.m:
            raise ValueError(f"entries must lie in 1..{self.m}")
        if not (X == X.T).all():
            raise ValueError("table must be commutative")
        self.X = X

    @classmethod
    def from_cells(cls, m, cells, default=1):
        """cells maps (i, j) with i <= j (1-based) to an element."""
        X = np.full((m - 1, m - 1), default, dtype=np.int64)
        for (i, j), v in cells.items():
            if not 1 <= i <= j <= m - 1:
                raise ValueError(f"cell ({i},{j}) outside the table")
            X[i - 1, j - 1] = X[j - 1, i - 1] = v
        return cls(m, X)

    @property
    def n(self):
        return self.m * (self.m - 1) // 2

    def flat(self):
        """Entries in the order (1,1), (1,2), ..., (1,m-1), (2,2), ..."""
        iu = np.triu_indices(self.m - 1)
        return self.X[iu]

    def __getitem__(self, ij):
        i, j = ij
        return int(self.X[i - 1, j - 1])


def gen_closure(X: GenTable):
    m = X.m
    inside = np.zeros(m + 1, dtype=bool)
    avail = [1]  # operands: 1 plus every generated element below m
    seen_op = np.zeros(m + 1, dtype=bool)
    seen_op[1] = True
    todo = [X[1, 1]]
    while todo:
        e = todo.pop()
        if inside[e]:
            continue
        inside[e] = True
        if e <= m - 1 and not seen_op[e]:
            seen_op[e] = True
            avail.append(e)
            for a in avail:
                v = X[min(a, e), max(a, e)]
                if not inside[v]:
                    todo.append(v)
        elif e == 1:
            pass
    # 1 * 1 was seeded; products among operands already in place are covered
    return {int(e) for e in np.nonzero(inside)[0]}


def gen_eval(X: GenTable) -> int:
    return int(X.m in gen_closure(X))


def gen_eval_naive(X: GenTable) -> int:
    """Fixpoint by rescanning every pair until nothing changes."""
    m = X.m
    C = {X[1, 1]}
    while True:
        ops = sorted(e for e in C | {1} if e <= m - 1)
        new = {X[a, b] for a in ops for b in ops if a <= b} - C
        if not new:
            return int(m in C)
        C |= new


# -- circuits --------------------------------------------------------------------

OPS = ("INPUT", "CONST", "NOT", "AND", "OR")


@dataclass
class Circuit:
    gates: list  # (name, op, args) in topological order
    output: str

    def __post_init__(self):
        names = {}
        for pos, (name, op, args) in enumerate(self.gates):
            if name in names:
                raise ValueError(f"gate {name} defined twice")
            if op not in OPS:
                raise ValueError(f"unknown gate type {op}")
            arity = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2}[op]
            if len(args) != arity:
                raise ValueError(f"{op} gate {name} takes {arity} argument(s)")
            if op == "INPUT" and (not isinstance(args[0], int) or args[0] < 1):
                raise ValueError(f"INPUT gate {name} needs an index >= 1")
            if op == "CONST" and args[0] not in (0, 1):
                raise ValueError(f"CONST gate {name} needs 0 or 1")
            if op in ("NOT", "AND", "OR"):
                for a in args:
                    if a not in names:
                        raise ValueError(f"gate {name} reads {a} before it is defined")
            names[name] = pos
        if self.output not in names:
            raise ValueError(f"output gate {self.output} is not defined")
        self._pos = names

    @property
    def n(self):
        return max((args[0] for _, op, args in self.gates if op == "INPUT"), default=0)

    @property
    def size(self):
        """Gates other than inputs."""
        return sum(1 for _, op, _ in self.gates if op != "INPUT")

    def op_of(self, name):
        return self.gates[self._pos[name]][1]

    def input_pairs(self):
        """Unordered operand pairs, with INPUT gates resolved to their variable."""
        out = []
        for name, op, args in self.gates:
            if op == "NOT":
                r = self.resolve(args[0])
                out.append((name, (r, r)))
            elif op in ("AND", "OR"):
                a, b = sorted((self.resolve(args[0]), self.resolve(args[1])))
                out.append((name, (a, b)))
        return out

    def resolve(self, name):
        _, op, args = self.gates[self._pos[name]]
        return ("X", args[0]) if op == "INPUT" else ("g", name)

    def has_distinct_pairs(self):
        pairs = [p for _, p in self.input_pairs()]
        return len(pairs) == len(set(pairs))


def circuit_eval(C: Circuit, x):
    x = list(x)
    if len(x) < C.n:
        raise ValueError(f"circuit reads {C.n} inputs, got {len(x)}")
    val = {}
    for name, op, args in C.gates:
        if op == "INPUT":
            v = int(x[args[0] - 1])
        elif op == "CONST":
            v = args[0]
        elif op == "NOT":
            v = 1 - val[args[0]]
        elif op == "AND":
            v = val[args[0]] & val[args[1]]
        else:
            v = val[args[0]] | val[args[1]]
        val[name] = v
    return val[C.output]


def circuit_table(C: Circuit, n=None):
    """Output on all 2^n inputs, x_1 most significant."""
    n = C.n if n is None else n
    if n > 24:
        raise BudgetExceeded(f"2^{n} inputs exceed the table limit")
    idx = np.arange(1 << n, dtype=np.int64)
    val = {}
    for name, op, args in C.gates:
        if op == "INPUT":
            v = ((idx >> (n - args[0])) & 1).astype(bool)
        elif op == "CONST":
            v = np.full(idx.size, bool(args[0]))
        elif op == "NOT":
            v = ~val[args[0]]
        elif op == "AND":
            v = val[args[0]] & val[args[1]]
        else:
            v = val[args[0]] | val[args[1]]
        val[name] = v
    return val[C.output].astype(np.uint8)


def parse_circuit(text):
    gates = []
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty circuit file")
    *body, last = lines
    for ln in body:
        tok = ln.split()
        if len(tok) < 3:
            raise ValueError(f"malformed gate line: {ln!r}")
        name, op, rest = tok[0], tok[1].upper(), tok[2:]
        if op in ("INPUT", "CONST"):
            try:
                rest = [int(rest[0])] + rest[1:]
            except ValueError:
                raise ValueError(f"{op} needs an integer: {ln!r}") from None
        gates.append((name, op, tuple(rest)))
    out = last.split()
    if len(out) == 2 and out[0].upper() == "OUTPUT":
        out = out[1:]
    if len(out) != 1:
        raise ValueError(f"last line must name the output gate, got {last!r}")
    return Circuit(gates, out[0])


def format_circuit(C: Circuit):
    lines = [" ".join([name, op] + [str(a) for a in args]) for name, op, args in C.gates]
    return "\n".join(lines + [C.output]) + "\n"


class CircuitBuilder:
    """Builds circuits that keep every operand pair distinct."""

    def __init__(self, n):
        self.gates = []
        self.inputs = []
        self._pairs = {}
        self._nots = {}
        self._count = 0
        for i in range(1, n + 1):
            self.inputs.append(self._add("INPUT", (i,)))

    def _add(self, op, args):
        self._count += 1
        name = f"g{self._count}"
        self.gates.append((name, op, tuple(args)))
        return name

    def const(self, b):
        return self._add("CONST", (int(b),))

    def NOT(self, a):
        if a not in self._nots:
            self._nots[a] = self._add("NOT", (a,))
        return self._nots[a]

    def _copy(self, a):
        # a OR 0 through a fresh constant gives a new gate equal to a
        return self._binary_raw("OR", a, self.const(0))

    def _binary_raw(self, op, a, b):
        key = tuple(sorted((a, b)))
        name = self._add(op, (a, b))
        self._pairs[key] = (op, name)
        return name

    def binary(self, op, a, b):
        if a == b:
            a = self._copy(a)
        key = tuple(sorted((a, b)))
        hit = self._pairs.get(key)
        if hit is None:
            return self._binary_raw(op, a, b)
        if hit[0] == op:
            return hit[1]
        # the pair already feeds the other operation: use De Morgan on the negations
        dual = "OR" if op == "AND" else "AND"
        na, nb = self.NOT(a), self.NOT(b)
        key2 = tuple(sorted((na, nb)))
        hit2 = self._pairs.get(key2)
        if hit2 is None:
            return self.NOT(self._binary_raw(dual, na, nb))
        if hit2[0] == dual:
            return self.NOT(hit2[1])
        return self.binary(op, self._copy(a), b)

    def AND(self, a, b):
        return self.binary("AND", a, b)

    def OR(self, a, b):
        return self.binary("OR", a, b)

    def XOR(self, a, b):
        return self.AND(self.OR(a, b), self.NOT(self.AND(a, b)))

    def circuit(self, output):
        return Circuit(list(self.gates), output)


def nand_tree(height):
    """Balanced NAND_2 formula on 2^height inputs."""
    b = CircuitBuilder(1 << height)
    level = list(b.inputs)
    while len(level) > 1:
        level = [b.NOT(b.AND(u, v)) for u, v in zip(level[0::2], level[1::2])]
    return b.circuit(level[0])


def random_circuit(rng, n, gates):
    """Random AND/OR/NOT circuit over n inputs with distinct operand pairs."""
    b = CircuitBuilder(n)
    pool = list(b.inputs)
    used = set()
    for _ in range(gates):
        for _attempt in range(50):
            op = ["AND", "OR", "NOT"][int(rng.integers(3))]
            if op == "NOT" or len(pool) < 2:
                a = pool[int(rng.integers(len(pool)))]
                key = (a, a)
                if key in used or a in b._nots:
                    continue
                used.add(key)
                pool.append(b.NOT(a))
                break
            i, j = rng.choice(len(pool), 2, replace=False)
            key = tuple(sorted((pool[i], pool[j])))
            if key in used or key in b._pairs:
                continue
            used.add(key)
            pool.append(b._binary_raw(op, pool[i], pool[j]))
            break
    return b.circuit(pool[-1])


# -- BRS circuit -----------------------------------------------------------------


def _z3_add(b, u, v):
    """Sum mod 3 of two residues, each (lo, hi) with 0=(0,0), 1=(1,0), 2=(0,1)."""
    (a1, a2), (b1, b2) = u, v
    # result 1: (1,0)+(0,0), (0,0)+(1,0), (0,1)+(0,1)
    # result 2: (0,1)+(0,0), (0,0)+(0,1), (1,0)+(1,0)
    na1, na2, nb1, nb2 = b.NOT(a1), b.NOT(a2), b.NOT(b1), b.NOT(b2)
    a0 = b.AND(na1, na2)
    b0 = b.AND(nb1, nb2)
    lo = b.OR(b.OR(b.AND(a1, b0), b.AND(a0, b1)), b.AND(a2, b2))
    hi = b.OR(b.OR(b.AND(a2, b0), b.AND(a0, b2)), b.AND(a1, b1))
    return lo, hi


def _z3_mul(b, u, v, sign):
    """sign * u * v mod 3."""
    (a1, a2), (b1, b2) = u, v
    one = b.OR(b.AND(a1, b1), b.AND(a2, b2))
    two = b.OR(b.AND(a1, b2), b.AND(a2, b1))
    return (one, two) if sign > 0 else (two, one)


def brs_circuit(d):
    """De Morgan circuit for BRS (x then y, pairs per index) with distinct operand pairs."""
    if d > 2:
        raise BudgetExceeded("BRS circuits provided for d <= 2")
    n = 1 << d
    b = CircuitBuilder(4 * n)
    xs, ys = b.inputs[: 2 * n], b.inputs[2 * n :]

    def residue(z1, z2):
        return b.XOR(z1, z2), b.AND(z1, z2)  # z1 + z2 in {0,1,2}

    us = [residue(xs[2 * a], xs[2 * a + 1]) for a in range(n)]
    vs = [residue(ys[2 * c], ys[2 * c + 1]) for c in range(n)]
    total = None
    for a in range(n):
        for c in range(n):
            sign = -1 if bin(a & c).count("1") % 2 else 1
            term = _z3_mul(b, us[a], vs[c], sign)
            total = term if total is None else _z3_add(b, total, term)
    out = b.NOT(b.OR(total[0], total[1]))
    C = b.circuit(out)
    if not C.has_distinct_pairs():
        raise InvariantViolation("BRS circuit repeats an operand pair")
    return C


# -- projection ------------------------------------------------------------------


@dataclass
class GenProjection:
    n: int
    elements: list  # element names, position i is element i+1
    cells: dict  # (i, j) 1-based, i <= j -> ("const", e) or ("lit", var, e0, e1)
    provenance: dict = field(default_factory=dict)

    @property
    def m(self):
        return len(self.elements)

    @property
    def q(self):
        return self.m * (self.m - 1) // 2

    def instantiate(self, x) -> GenTable:
        X = np.ones((self.m - 1, self.m - 1), dtype=np.int64)
        for (i, j), c in self.cells.items():
            v = c[1] if c[0] == "const" else (c[3] if x[c[1] - 1] else c[2])
            X[i - 1, j - 1] = X[j - 1, i - 1] = v
        return GenTable(self.m, X)

    def literal_counts(self):
        counts = {i: 0 for i in range(1, self.n + 1)}
        for c in self.cells.values():
            if c[0] == "lit":
                counts[c[1]] += 1
        return counts

    def is_read_once(self):
        return all(v == 1 for v in self.literal_counts().values())

    def to_dict(self):
        rows = []
        for (i, j) in sorted(self.cells):
            c = self.cells[(i, j)]
            rows.append(
                {
                    "cell": [i, j],
                    "value": list(c[1:]) if c[0] == "lit" else c[1],
                    "kind": c[0],
                    "rule": self.provenance.get((i, j), ""),
                }
            )
        return {"n": self.n, "m": self.m, "q": self.q, "elements": [str(e) for e in self.elements], "cells": rows}


def _element_name(e):
    if e[0] == "$":
        return f"${e[1]}"
    return f"({e[1] if e[0] == 'g' else 'X' + str(e[1])},{e[2]})"


def project_to_gen(C: Circuit) -> GenProjection:
    if not C.has_distinct_pairs():
        raise ValueError("two gates share an operand pair; the projection cells would collide")
    n = C.n
    work = [(name, op, args) for name, op, args in C.gates if op != "INPUT"]
    elems = [("$", i) for i in range(n + 1)]
    elems += [("X", i, b) for i in range(1, n + 1) for b in (0, 1)]
    elems += [("g", name, b) for name, _, _ in work for b in (0, 1)]
    out = C.resolve(C.output)
    top = ("X", out[1], 1) if out[0] == "X" else ("g", out[1], 1)
    elems.remove(top)
    elems.append(top)
    index = {e: k + 1 for k, e in enumerate(elems)}
    m = len(elems)
    if m != 3 * n + 1 + 2 * len(work):
        raise InvariantViolation("element count differs from 3n + 1 + 2S")

    def el(res, b):
        return ("X", res[1], b) if res[0] == "X" else ("g", res[1], b)

    cells, prov = {}, {}

    def put(e1, e2, value, rule):
        i, j = sorted((index[e1], index[e2]))
        if j > m - 1:
            raise ValueError(f"the output element would be an operand ({rule})")
        if (i, j) in cells and cells[(i, j)] != value:
            raise InvariantViolation(f"cell ({i},{j}) assigned twice with different values")
        cells[(i, j)] = value
        prov[(i, j)] = rule

    for i in range(n):
        put(("$", 0), ("$", i), ("const", index[("$", i + 1)]), "chain")
    for i in range(1, n + 1):
        put(("$", i), ("$", i), ("lit", i, index[("X", i, 0)], index[("X", i, 1)]), f"input x{i}")
    # constants hang off the end of the chain: $0 * $n, then $0 * (previous constant)
    prev = ("$", n)
    for name, op, args in work:
        if op == "CONST":
            e = ("g", name, args[0])
            put(("$", 0), prev, ("const", index[e]), f"const {name}")
            prev = e
    for name, op, args in work:
        if op == "NOT":
            h = C.resolve(args[0])
            put(el(h, 0), el(h, 0), ("const", index[("g", name, 1)]), f"not {name}")
            put(el(h, 1), el(h, 1), ("const", index[("g", name, 0)]), f"not {name}")
        elif op in ("AND", "OR"):
            h, l = C.resolve(args[0]), C.resolve(args[1])
            for a in (0, 1):
                for b in (0, 1):
                    v = (a & b) if op == "AND" else (a | b)
                    put(el(h, a), el(l, b), ("const", index[("g", name, v)]), f"{op.lower()} {name}")
    # every other cell is $_0, which is element 1
    for i in range(1, m):
        for j in range(i, m):
            cells.setdefault((i, j), ("const", 1))
    return GenProjection(n, [_element_name(e) for e in elems], cells, prov)


def verify_projection(C: Circuit, max_inputs=10):
    n = C.n
    if n > max_inputs:
        raise BudgetExceeded(f"{n} inputs exceed the exhaustive limit {max_inputs}")
    proj = project_to_gen(C)
    truth = circuit_table(C, n)
    report = {
        "n": n,
        "gates": C.size,
        "m": proj.m,
        "q": proj.q,
        "read_once": proj.is_read_once(),
        "checked": 0,
        "first_mismatch": None,
    }
    for idx in range(1 << n):
        x = [(idx >> (n - 1 - i)) & 1 for i in range(n)]
        got = gen_eval(proj.instantiate(x))
        report["checked"] += 1
        if got != int(truth[idx]):
            report["first_mismatch"] = {"x": x, "circuit": int(truth[idx]), "gen": got}
            break
    report["ok"] = report["first_mismatch"] is None and report["read_once"]
    return report
