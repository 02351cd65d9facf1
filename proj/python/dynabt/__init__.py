"""Backtracking search with eliminating explanations: chronological,
backjumping and dynamic backtracking over finite-domain CSPs."""

from ._core import (
    InputError,
    Problem,
    check_mechanism,
    cli,
    count_solutions,
    crossword,
    figure1,
    load_problem,
    monitor,
    parse_problem,
    random_csp,
    solve,
    xyz,
)

__all__ = [
    "InputError",
    "Problem",
    "check_mechanism",
    "cli",
    "count_solutions",
    "crossword",
    "figure1",
    "load_problem",
    "monitor",
    "parse_problem",
    "random_csp",
    "solve",
    "xyz",
]
