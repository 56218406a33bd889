"""Exception types and the global cell budget."""

import os


class BudgetExceeded(RuntimeError):
    """A computation would exceed its size, node or time budget.

    ``bounds`` carries whatever partial information is known, e.g. a
    ``(lower, upper)`` pair from an interrupted branch-and-bound search.
    """

    def __init__(self, message, bounds=None):
        super().__init__(message)
        self.bounds = bounds


class InvariantViolation(AssertionError):
    """An inequality that must hold for every function was found to fail."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


DEFAULT_CELL_BUDGET = 1 << 26

_cell_budget = int(os.environ.get("BPM_CELL_BUDGET", DEFAULT_CELL_BUDGET))


def cell_budget():
    return _cell_budget


def set_cell_budget(cells):
    """Override the maximum number of truth-table cells; returns the old value."""
    global _cell_budget
    old = _cell_budget
    _cell_budget = int(cells)
    return old


def check_cells(n, d, what="truth table"):
    size = d**n
    if size > _cell_budget:
        raise BudgetExceeded(
            f"{what} needs {d}^{n} = {size} cells, budget is {_cell_budget}"
        )
    return size
