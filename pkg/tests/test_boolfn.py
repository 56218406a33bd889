import numpy as np
import pytest
from hypothesis import given, strategies as st

from bpmeasures import (
    BudgetExceeded,
    TruthTable,
    build_table,
    combine,
    is_orthogonal,
    is_rectangle,
    rectangle_witness,
    row_stats,
    split,
    subfunction,
)
from bpmeasures.boolfn import format_tt, parse_tt, read_tt, write_tt, unsplit, subset_stats, variable
from bpmeasures.errors import set_cell_budget
from bpmeasures.roster import gen_eq, gen_parity
from bpmeasures.tep import tep_table

from conftest import boolean_tables, tables_with_subset
from oracles import nrows_mult, point_rows


def test_build_table_small_cases():
    assert build_table(1, 2, lambda x: x[0]).values.tolist() == [0, 1]
    assert build_table(2, 2, lambda x: x[0] ^ x[1]).values.tolist() == [0, 1, 1, 0]
    assert build_table(1, 3, lambda x: x[0] + 1).values.tolist() == [1, 2, 3]


def test_build_table_respects_cell_budget():
    old = set_cell_budget(100)
    try:
        with pytest.raises(BudgetExceeded, match="2\\^7"):
            build_table(7, 2, lambda x: 0)
    finally:
        set_cell_budget(old)


def test_first_half_split_of_equality_is_identity():
    view = split(gen_eq(2), (0, 1))
    assert (view.matrix() == np.eye(4, dtype=np.uint8)).all()


def test_empty_split_is_the_value_row():
    f = gen_parity(3)
    assert split(f, ()).matrix().tolist() == [f.values.tolist()]


def test_parity_rows_are_complements():
    mat = split(gen_parity(3), (0,)).matrix()
    assert mat.shape == (2, 4)
    assert ((mat[0] ^ mat[1]) == 1).all()


def test_subfunctions_of_parity():
    p2 = gen_parity(2)
    assert subfunction(gen_parity(3), (0,), 0) == p2
    assert subfunction(gen_parity(3), (0,), 1) == ~p2
    with pytest.raises(ValueError):
        subfunction(gen_parity(3), (0,), 2)


def test_tep_leaf_subfunction_reads_root_entry():
    f = tep_table(2, 2)
    # leaves are variables 4 and 5; fixing both to symbol 1 (digit 0) selects M_11
    g = subfunction(f, (4, 5), 0)
    expect = [int(x[0]) + 1 for x in np.ndindex(2, 2, 2, 2)]
    assert g.values.tolist() == expect


def test_row_stats_examples():
    s = row_stats(gen_parity(4), (0, 1))
    assert (s.nrows, s.mult) == (2, 2)
    s = row_stats(gen_eq(2), (0, 1))
    assert (s.nrows, s.mult) == (4, 1)
    s = row_stats(TruthTable(3, 2, np.zeros(8, dtype=np.uint8)), (0,))
    assert (s.nrows, s.mult) == (1, 2)


def test_rectangles():
    # EQ on 4 bits split as (x_1, y_1) against (x_2, y_2) factors coordinate-wise
    assert is_rectangle(gen_eq(2), (0, 2))
    one = TruthTable(3, 2, np.ones(8, dtype=np.uint8))
    g, h = rectangle_witness(one, (1,))
    assert np.all(g) and np.all(h)
    assert not is_rectangle(gen_eq(1), (0,))


def test_combine_examples():
    assert combine("negate", gen_parity(2)).values.tolist() == [1, 0, 0, 1]
    assert combine("and", variable(2, 0), variable(2, 1)).values.tolist() == [0, 0, 0, 1]
    a = TruthTable(2, 2, np.array([1, 1, 0, 0], dtype=np.uint8))
    b = TruthTable(2, 2, np.array([0, 0, 1, 0], dtype=np.uint8))
    assert not combine("product", a, b).values.any()
    assert is_orthogonal(a, b)
    with pytest.raises(ValueError):
        combine("and", a, TruthTable(3, 2, np.zeros(8, dtype=np.uint8)))


@given(tables_with_subset(max_n=4))
def test_row_stats_match_pointwise_rows(fa):
    f, A = fa
    s = row_stats(f, A)
    assert (s.nrows, s.mult) == nrows_mult(f, A)


@given(tables_with_subset(max_n=4))
def test_split_matrix_rows_match_pointwise_rows(fa):
    f, A = fa
    mat = split(f, A).matrix()
    assert [tuple(r) for r in mat.tolist()] == point_rows(f, A)


@given(tables_with_subset(max_n=5))
def test_unsplit_inverts_split(fa):
    f, A = fa
    back = unsplit(split(f, A).matrix(), f.n, f.d, A)
    assert (back.reshape(-1) == f.values).all()


@given(boolean_tables(max_n=5))
def test_subset_stats_agree_with_row_stats(f):
    nrows, mult = subset_stats(f)
    for mask in range(1 << f.n):
        A = tuple(i for i in range(f.n) if mask >> i & 1)
        s = row_stats(f, A)
        assert (nrows[mask], mult[mask]) == (s.nrows, s.mult)


@given(st.integers(1, 3), st.integers(2, 4), st.data())
def test_tt_text_round_trip(n, d, data):
    vals = data.draw(st.lists(st.integers(0, 9), min_size=d**n, max_size=d**n))
    f = TruthTable(n, d, np.array(vals))
    text = format_tt(f)
    assert parse_tt(text) == f
    assert format_tt(parse_tt(text)) == text


def test_tt_file_round_trip(tmp_path):
    f = gen_eq(2)
    path = tmp_path / "eq2.tt"
    write_tt(f, path)
    assert read_tt(path) == f
    assert path.read_text().splitlines()[0] == "TT 4 2 bool"


@pytest.mark.parametrize(
    "text",
    ["", "XX 1 2 bool 0 1", "TT 2 2 bool 0 1 1", "TT 1 2 bool 0 2", "TT 1 2 maybe 0 1", "TT a 2 bool"],
)
def test_tt_parse_errors(text):
    with pytest.raises(ValueError):
        parse_tt(text)


@given(boolean_tables(max_n=4))
def test_subfunctions_reassemble_rows(f):
    A = tuple(range(0, f.n, 2))
    mat = split(f, A).matrix()
    for alpha in range(mat.shape[0]):
        assert subfunction(f, A, alpha).values.tolist() == mat[alpha].tolist()
