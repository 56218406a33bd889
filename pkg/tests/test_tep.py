from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bpmeasures.tep import (
    TepLayout,
    tep_lemma_suite,
    check_half_size,
    nrows_of,
    s_hat_tep,
    s_tep,
    s_tep_profile,
    s_upper_bound,
    pattern_checks,
    min_rows_closed_form,
    tep_eval,
    tep_size,
    tep_table,
    validate_mirror_symmetry,
)

from oracles import nrows_mult


def test_sizes():
    assert [tep_size(h, 2) for h in (1, 2, 3)] == [1, 6, 16]
    assert [tep_size(h, 3) for h in (1, 2, 3)] == [1, 11, 31]
    assert TepLayout(3, 2).n == 16


def test_evaluation_examples():
    assert tep_eval(2, 2, [1, 2, 2, 1, 1, 2]) == 2
    assert all(tep_eval(3, 2, [1] * 12 + list(leaves)) == 1 for leaves in product((1, 2), repeat=4))


def test_evaluation_rejects_bad_input():
    with pytest.raises(ValueError):
        tep_eval(2, 2, [1, 2, 3, 1, 1, 2])
    with pytest.raises(ValueError):
        tep_eval(2, 2, [1, 2])


def test_layout_positions():
    lay = TepLayout(3, 2)
    assert lay.position(0) == ("matrix", "", 0, 0)
    assert lay.position(4) == ("matrix", "L", 0, 0)
    assert lay.position(8) == ("leaf", "LL")
    assert lay.position(9) == ("leaf", "LR")
    assert lay.position(10) == ("matrix", "R", 0, 0)
    assert lay.position(15) == ("leaf", "RR")
    AM, AL, AR = lay.parts((1, 4, 9, 15))
    assert (AM, AL, AR) == ((1,), (0, 5), (5,))
    assert lay.join(AM, AL, AR) == (1, 4, 9, 15)
    assert [lay.mirror(v) for v in (1, 4, 15)] == [2, 10, 9]


@pytest.mark.parametrize("h, k", [(2, 2), (2, 3), (3, 2)])
def test_table_matches_recursive_evaluation(h, k):
    f = tep_table(h, k)
    n = tep_size(h, k)
    rng = np.random.default_rng(h * 10 + k)
    for _ in range(500):
        x = rng.integers(1, k + 1, n).tolist()
        assert f([s - 1 for s in x]) == tep_eval(h, k, x)


@given(st.sets(st.integers(0, 5)))
def test_row_counts_match_pointwise_oracle(A):
    f = tep_table(2, 2)
    A = tuple(sorted(A))
    assert nrows_of(f, A) == nrows_mult(f, A)[0]


@pytest.mark.parametrize("k", [2, 3])
def test_height_two_profile_matches_closed_form(k):
    prof = s_tep_profile(2, k)
    assert [p["S_value"] for p in prof] == [min_rows_closed_form(k, ell) for ell in range(1, tep_size(2, k) + 1)]
    assert prof[-1]["S_value"] == k
    top, _, _ = s_tep(2, k)
    assert top == k * k


def test_profile_values():
    assert [p["S_value"] for p in s_tep_profile(2, 2)] == [2, 3, 4, 4, 3, 2]
    assert [p["S_value"] for p in s_tep_profile(2, 3)] == [3, 5, 7, 9, 9, 8, 7, 6, 5, 4, 3]


def test_profile_witness_attains_value():
    f = tep_table(2, 3)
    for p in s_tep_profile(2, 3, ells=[3, 7]):
        A = tuple(i - 1 for i in p["witness_A"])
        assert nrows_of(f, A) == p["S_value"]


def test_mirror_symmetry_and_pruned_profile():
    assert validate_mirror_symmetry(2, 2)
    full = [p["S_value"] for p in s_tep_profile(2, 3)]
    pruned = [p["S_value"] for p in s_tep_profile(2, 3, symmetry=True)]
    assert pruned == full


def test_budget_marks_profile_incomplete():
    prof = s_tep_profile(2, 3, budget_secs=0)
    assert prof[-1]["complete"] is False
    assert len(prof) == 1


def test_height_three_upper_bound():
    assert s_upper_bound(3, 2) == 8
    prof = s_tep_profile(3, 2, ells=[1, 2, 15, 16])
    assert [p["S_value"] for p in prof] == [2, 3, 3, 2]


def test_s_hat_values():
    for k in (2, 3):
        assert s_hat_tep(1, k)["value"] == k
    r = s_hat_tep(2, 2)
    assert r["value"] == 4 and r["within_upper"]
    r = s_hat_tep(2, 3)
    assert r["value"] == Fraction(9, 2) and r["within_upper"] and not r["upper_hypothesis_holds"]


def test_s_hat_witness_is_consistent():
    r = s_hat_tep(2, 3)
    f = tep_table(2, 3)
    A = tuple(i - 1 for i in r["witness_A"])
    _, mult = nrows_mult(f, A)
    assert Fraction(3 ** len(A), mult) == r["value"]


@pytest.mark.parametrize("k", [2, 3])
def test_height_two_pattern_values(k):
    rows = pattern_checks(k)
    assert rows and all(ok for _, _, ok in rows)


@pytest.mark.parametrize("h, k", [(2, 2), (2, 3)])
def test_lemma_suite(h, k):
    rep = tep_lemma_suite(h, k)
    for key in ("non_constant_subfunc", "equivalence", "am_small_equality", "easy_case", "one_row"):
        assert rep[key], key
    assert all(ok in (True, None) for _, ok in rep["half_size"])


def test_easy_case_is_exact_for_matrix_only_sets():
    f = tep_table(2, 2)
    for ell in range(1, 5):
        for AM in combinations(range(4), ell):
            assert nrows_of(f, AM) == 2**ell


def test_half_size_probabilities():
    ok, probs = check_half_size(2, 3, 8)
    assert ok
    assert all(p >= Fraction(1, 6) for p in probs)
