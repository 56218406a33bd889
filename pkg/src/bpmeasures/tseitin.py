"""Tseitin parity formulas over simple graphs.

Edge variables follow the edge-list order; vertices are 0-based internally
and 1-based in files.  TS_{G,c}(x) = 1 iff every vertex v sees an incident
edge sum congruent to c(v) mod 2.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .boolfn import TruthTable
from .errors import BudgetExceeded, InvariantViolation

MAX_EDGES = 20


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.count = n

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            self.count -= 1


def components(n, edges):
    """Connected components of (V, edges) with V = range(n); isolated vertices count."""
    dsu = _DSU(n)
    for u, v in edges:
        dsu.union(u, v)
    return dsu.count


def component_labels(n, edges):
    dsu = _DSU(n)
    for u, v in edges:
        dsu.union(u, v)
    return [dsu.find(v) for v in range(n)]


@dataclass(frozen=True)
class TseitinInstance:
    n: int
    edges: tuple
    charge: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        seen = set()
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u + 1},{v + 1}) has a vertex outside 1..{self.n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u + 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"parallel edge {key[0] + 1}-{key[1] + 1}")
            seen.add(key)
        charge = tuple(int(c) for c in self.charge)
        if len(charge) != self.n or any(c not in (0, 1) for c in charge):
            raise ValueError(f"charge must be {self.n} bits")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "charge", charge)

    @property
    def m(self):
        return len(self.edges)

    @property
    def kappa(self):
        return components(self.n, self.edges)

    def satisfiable(self):
        """Even total charge on every connected component."""
        labels = component_labels(self.n, self.edges)
        parity = {}
        for v, lab in enumerate(labels):
            parity[lab] = parity.get(lab, 0) ^ self.charge[v]
        return not any(parity.values())


def tseitin_table(inst: TseitinInstance) -> TruthTable:
    m = inst.m
    if m > MAX_EDGES:
        raise BudgetExceeded(f"{m} edges exceed the {MAX_EDGES}-edge table limit")
    idx = np.arange(1 << m, dtype=np.int64)
    bits = ((idx[:, None] >> (m - 1 - np.arange(m))) & 1).astype(np.uint8)
    ok = np.ones(1 << m, dtype=bool)
    for v in range(inst.n):
        incident = [e for e, (a, b) in enumerate(inst.edges) if v in (a, b)]
        s = bits[:, incident].sum(axis=1) % 2 if incident else np.zeros(1 << m, dtype=np.int64)
        ok &= s == inst.charge[v]
    return TruthTable(m, 2, ok.astype(np.uint8))


def count_sat(inst: TseitinInstance, check=True):
    count = int(tseitin_table(inst).values.sum())
    if check:
        if inst.satisfiable():
            expected = 2 ** (inst.m - inst.n + inst.kappa)
            if count != expected:
                raise InvariantViolation(f"count {count} != 2^(m-n+kappa) = {expected}")
        elif count:
            raise InvariantViolation(f"odd-charge component but {count} satisfying assignments")
    return count


def kappa_profile(n, edges):
    """kappa_G(l) for l = 0..m: the most components of (V, H) over l-edge subsets H."""
    edges = list(edges)
    m = len(edges)
    if m > MAX_EDGES:
        raise BudgetExceeded(f"{m} edges exceed the {MAX_EDGES}-edge enumeration limit")
    prof = [max(components(n, H) for H in combinations(edges, ell)) for ell in range(m + 1)]
    for ell in range(m):
        if not (prof[ell] >= prof[ell + 1] and n - ell <= prof[ell] <= n):
            raise InvariantViolation(f"kappa profile misbehaves at l={ell}: {prof}")
    return prof


def tseitin_bound(inst: TseitinInstance):
    """(max over 1 <= l <= m of 2^(n - k(l) - k(m-l) + k(G)), maximizing l)."""
    if not inst.satisfiable():
        raise ValueError("bound needs a satisfiable instance")
    if inst.m == 0:
        raise ValueError("bound needs at least one edge")
    prof = kappa_profile(inst.n, inst.edges)
    m, kg = inst.m, prof[-1]
    best = None
    for ell in range(1, m + 1):
        e = inst.n - prof[ell] - prof[m - ell] + kg
        if best is None or e > best[0]:
            best = (e, ell)
    return 2 ** best[0], best[1]


def crosscheck_chat(inst: TseitinInstance):
    from .measures import measure_C_hat

    if inst.m > 6:
        raise BudgetExceeded(f"exact C-hat limited to 6 edges, got {inst.m}")
    bound, ell = tseitin_bound(inst)
    rep = measure_C_hat(tseitin_table(inst))
    out = {"bound": bound, "bound_ell": ell, "C_hat": int(rep.value), "ok": bound <= rep.value}
    if not out["ok"]:
        raise InvariantViolation(f"bound {bound} exceeds exact C-hat {rep.value}", out)
    return out


# -- small graph families ------------------------------------------------------


def cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def complete(n):
    return list(combinations(range(n), 2))


def all_graphs(n):
    """Every labelled simple graph on n vertices (as edge lists)."""
    pairs = complete(n)
    for mask in range(1 << len(pairs)):
        yield [pairs[i] for i in range(len(pairs)) if mask >> i & 1]


def all_charges(n):
    for mask in range(1 << n):
        yield tuple((mask >> (n - 1 - i)) & 1 for i in range(n))


# -- files ---------------------------------------------------------------------


def parse_graph(text):
    tokens = text.split()
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"graph file: {exc}") from None
    if len(nums) < 2:
        raise ValueError("graph file needs a header 'n m'")
    n, m = nums[0], nums[1]
    body = nums[2:]
    if len(body) != 2 * m:
        raise ValueError(f"graph file promises {m} edges but has {len(body) / 2:g}")
    edges = [(body[2 * i] - 1, body[2 * i + 1] - 1) for i in range(m)]
    return n, edges


def parse_charge(text, n=None):
    tokens = text.split()
    if any(t not in ("0", "1") for t in tokens):
        raise ValueError("charge file must hold 0/1 tokens")
    charge = tuple(int(t) for t in tokens)
    if n is not None and len(charge) != n:
        raise ValueError(f"charge file has {len(charge)} bits for {n} vertices")
    return charge


def format_graph(n, edges):
    lines = [f"{n} {len(edges)}"] + [f"{u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def load_instance(graph_path, charge_path):
    with open(graph_path) as fh:
        n, edges = parse_graph(fh.read())
    with open(charge_path) as fh:
        charge = parse_charge(fh.read(), n)
    return TseitinInstance(n, tuple(edges), charge)
