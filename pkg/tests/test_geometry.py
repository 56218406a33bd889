from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bpmeasures import BudgetExceeded, InvariantViolation
from bpmeasures.geometry import (
    MBS_SIZES,
    Line,
    admissible_census,
    bw_mult_witness,
    bw_table,
    colinear_triples_ok,
    count_blocking_within,
    default_line_plus_points,
    enumerate_mbs,
    gal_bw_bridge,
    gal_table,
    intersecting_points_check,
    is_prime,
    lemma_identity_check,
    line_through,
    mbs_constructor,
    mbs_histogram,
    mbs_line_plus_points,
    nonblocking_bound_check,
    nonvertical,
    permutation_array,
    plane,
)


def line_sets(p):
    return [frozenset((t, (i + j * t) % p) for t in range(p)) for i in range(p) for j in range(p)]


def blocks(p, pts):
    pts = set(pts)
    return all(L & pts for L in line_sets(p))


def minimal(p, pts):
    pts = set(pts)
    return blocks(p, pts) and not any(blocks(p, pts - {q}) for q in pts)


def pts_of(pl, mask):
    return [pl.coords(i) for i in range(pl.N) if mask >> i & 1]


def test_plane_rejects_composite_and_large():
    with pytest.raises(ValueError):
        plane(4)
    with pytest.raises(BudgetExceeded):
        plane(17)
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_incidence_structure(p):
    pl = plane(p)
    inc = pl.incidence
    for i in range(p):
        for j in range(p):
            on = {pl.coords(int(v)) for v in np.nonzero(inc[:, i * p + j])[0]}
            assert on == set(nonvertical(p, i, j).points())


def test_lines_meet_and_join():
    p = 5
    a, b = Line(p, 1, 2), Line(p, 3, 4)
    x = a.meet(b)
    assert a.contains(x) and b.contains(x)
    assert line_through(p, (0, 1), (2, 5 % p)) == Line(p, 1, 2)
    assert line_through(p, (3, 0), (3, 4)).vertical
    with pytest.raises(ValueError):
        a.meet(Line(p, 0, 2))


@pytest.mark.parametrize("p", [2, 3])
def test_blocking_checks_agree_on_every_subset(p):
    pl = plane(p)
    table = pl.blocking_table()
    for mask in range(1 << pl.N):
        pts = pts_of(pl, mask)
        want = blocks(p, pts)
        assert pl.is_blocking(mask) == want
        assert pl.is_blocking_poly(mask) == want
        # table index reads point 0 as the most significant bit
        idx = sum(1 << (pl.N - 1 - i) for i in range(pl.N) if mask >> i & 1)
        assert table[idx] == want


@given(st.sets(st.integers(0, 24), max_size=12))
def test_polynomial_test_at_five(S):
    pl = plane(5)
    mask = sum(1 << i for i in S)
    assert pl.is_blocking_poly(mask) == pl.is_blocking(mask) == blocks(5, pts_of(pl, mask))


def test_minimal_blocking_histogram_at_three():
    pl = plane(3)
    hist = mbs_histogram(pl, 9)
    brute = {k: 0 for k in range(10)}
    for mask in range(1 << 9):
        if minimal(3, pts_of(pl, mask)):
            brute[bin(mask).count("1")] += 1
    assert hist == brute
    assert [hist[k] for k in range(6)] == [0, 0, 0, 3, 0, 27]


def test_small_minimal_blocking_sets_at_five_are_verticals():
    pl = plane(5)
    found = enumerate_mbs(pl, 6)
    assert [len(found[k]) for k in range(7)] == [0, 0, 0, 0, 0, 5, 0]
    verticals = {pl.mask_of(Line(5, c).points()) for c in range(5)}
    assert set(found[5]) == verticals


def test_counting_blocking_subsets():
    assert count_blocking_within(plane(2), (1 << 4) - 1) == 7
    pl = plane(3)
    M = (1 << 9) - 1
    exact = count_blocking_within(pl, M)
    assert exact == sum(blocks(3, pts_of(pl, m)) for m in range(1 << 9))
    est = count_blocking_within(pl, M, mode="sample", samples=20000, seed=1)
    assert est["low"] <= exact <= est["high"]


def test_nonblocking_bound():
    for p in (2, 3):
        rep = nonblocking_bound_check(plane(p))
        assert rep["ok"]
        assert rep["blocking"] + rep["nonblocking"] == 2 ** (p * p)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("case", [3, 4, 5, 6, 7])
def test_constructors_at_larger_primes(p, case):
    pl = plane(p)
    mask = mbs_constructor(pl, case)
    pts = pts_of(pl, mask)
    assert len(pts) == MBS_SIZES[case](p)
    assert minimal(p, pts)


@pytest.mark.parametrize("case", [4, 5, 7])
def test_constructors_at_three(case):
    pl = plane(3)
    assert minimal(3, pts_of(pl, mbs_constructor(pl, case)))


def test_shifted_two_lines_cannot_work_at_three():
    # size 2p - 2 = 4 at p = 3 and no minimal blocking set of size 4 exists there
    pl = plane(3)
    assert mbs_histogram(pl, 4)[4] == 0
    assert admissible_census(pl, 3) == (0, 2)
    with pytest.raises(InvariantViolation):
        mbs_constructor(pl, 3)


def test_two_lines_three_points_at_three_and_five():
    pl = plane(3)
    assert mbs_histogram(pl, 6)[6] == 0
    with pytest.raises(InvariantViolation):
        mbs_constructor(pl, 6)
    ok, total = admissible_census(plane(5), 6)
    assert (ok, total) == (16, 324)


def test_line_plus_points_validation():
    pl = plane(5)
    line, extra = default_line_plus_points(5)
    with pytest.raises(ValueError):
        mbs_line_plus_points(pl, line, extra[:-1])
    with pytest.raises(ValueError):
        mbs_line_plus_points(pl, line, [(0, 0)] + extra[1:])


def test_permutations():
    perms = permutation_array(4)
    assert perms.shape == (24, 4)
    assert len({tuple(r) for r in perms.tolist()}) == 24


def brute_identity(p):
    from itertools import permutations

    for x in permutations(range(1, p)):
        prod = 1
        for i, j in combinations(range(1, p), 2):
            prod = prod * (i * x[j - 1] - j * x[i - 1]) % p
        if prod:
            return False
    return True


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_identity_lemma(p):
    assert lemma_identity_check(p) == brute_identity(p)
    assert lemma_identity_check(p) == (p >= 3)


def test_intersecting_points():
    ok, info = intersecting_points_check(3)
    assert ok and info["checked"] == 72
    ok, info = intersecting_points_check(5)
    assert ok and info["checked"] == 3600
    with pytest.raises(ValueError):
        intersecting_points_check(2)
    assert not colinear_triples_ok(5, [(0, 0), (1, 1), (2, 3)])


def test_gal_is_the_blocking_indicator():
    pl = plane(2)
    f = gal_table(pl)
    assert f.n == 4
    for idx in range(16):
        pts = [pl.coords(i) for i in range(4) if idx >> (3 - i) & 1]
        assert f.values[idx] == blocks(2, pts)


@pytest.mark.parametrize("p", [2, 3])
def test_gal_bw_bridge(p):
    assert gal_bw_bridge(plane(p))


def test_bw_matches_definition_at_two():
    pl = plane(2)
    f = bw_table(pl)
    L = line_sets(2)
    for idx in range(1 << 8):
        xs = {pl.coords(i) for i in range(4) if idx >> (7 - i) & 1}
        ys = [j for j in range(4) if idx >> (3 - j) & 1]
        assert f.values[idx] == any(L[j] & xs for j in ys)


@pytest.mark.parametrize("p, t, mult", [(2, 1, 3), (2, 2, 39), (3, 1, 7), (3, 2, 175), (3, 3, 3367)])
def test_bw_multiplicity_witness(p, t, mult):
    rep = bw_mult_witness(plane(p), t)
    assert rep["mult"] == mult
    assert rep["constant_one_rows"] == rep["predicted_one_rows"]
    assert rep["ok"] and rep["mult"] >= Fraction(3, 8) * 2 ** rep["size"]
