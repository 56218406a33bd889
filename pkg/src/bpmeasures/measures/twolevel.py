"""Exact two-level (DNF/CNF) sizes: prime implicants plus exact covering."""

import numpy as np

from ..boolfn import TruthTable, combine
from .setcover import DEFAULT_NODE_BUDGET, min_set_cover


def prime_implicants(f: TruthTable):
    """Prime implicants of f as (value, free) pairs over table indices.

    A pair stands for the cube {value | s : s subset of free}.
    """
    cubes = {(int(m), 0) for m in np.flatnonzero(f.values)}
    primes = set()
    while cubes:
        merged = set()
        used = set()
        for v, free in cubes:
            for b in range(f.n):
                bit = 1 << b
                if free & bit or v & bit:
                    continue
                if (v | bit, free) in cubes:
                    merged.add((v, free | bit))
                    used.add((v, free))
                    used.add((v | bit, free))
        primes |= cubes - used
        cubes = merged
    return sorted(primes)


def _cube_points(v, free):
    mask = 0
    sub = free
    while True:
        mask |= 1 << (v | sub)
        if sub == 0:
            break
        sub = (sub - 1) & free
    return mask


def dnf_size(f: TruthTable, budget=DEFAULT_NODE_BUDGET) -> int:
    """Fewest terms in a DNF for f (0 for the constant 0)."""
    if f.d != 2 or not f.is_boolean:
        raise ValueError("two-level size needs a Boolean function on bits")
    primes = prime_implicants(f)
    target = 0
    for m in np.flatnonzero(f.values):
        target |= 1 << int(m)
    return len(min_set_cover(target, [_cube_points(v, fr) for v, fr in primes], budget))


def cnf_size(f: TruthTable, budget=DEFAULT_NODE_BUDGET) -> int:
    """Fewest clauses in a CNF for f (0 for the constant 1)."""
    return dnf_size(combine("negate", f), budget)


def weight(f: TruthTable):
    """(DNF size, CNF size, their sum)."""
    a, b = dnf_size(f), cnf_size(f)
    return a, b, a + b
