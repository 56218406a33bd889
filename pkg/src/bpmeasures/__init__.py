"""Exact branching-program complexity measures for small explicit functions."""

from .boolfn import (
    RowStats,
    SplitView,
    TruthTable,
    VarSet,
    build_table,
    combine,
    is_orthogonal,
    is_rectangle,
    read_tt,
    rectangle_witness,
    row_stats,
    split,
    subfunction,
    write_tt,
)
from .errors import BudgetExceeded, InvariantViolation

__version__ = "0.1.0"
