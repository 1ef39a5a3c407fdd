"""Classical ground truth for the quantum circuits."""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from lib.board import COLUMN_AND_DIAGONAL, BoardLayout, Solution
from lib.errors import InvalidSolution

# Known solution counts, used to check the solver itself.
KNOWN_COUNTS = {1: 1, 2: 0, 3: 0, 4: 2, 5: 10, 6: 4, 7: 40, 8: 92, 9: 352, 10: 724}


def solve_classical(n: int) -> List[Solution]:
    """Every solution of the n-queens puzzle in lexicographic order.

    Depth-first backtracking over rows with column and diagonal bitmasks.
    """
    if n < 1:
        raise ValueError(f"Board size must be at least 1, got {n}")
    full = (1 << n) - 1
    solutions: List[Solution] = []
    cols: List[int] = []

    def place(columns: int, left: int, right: int) -> None:
        if columns == full:
            solutions.append(tuple(cols))
            return
        free = full & ~(columns | left | right)
        # lowest bit first keeps column order ascending
        for col in range(n):
            bit = 1 << col
            if free & bit:
                cols.append(col + 1)
                place(columns | bit, ((left | bit) << 1) & full, (right | bit) >> 1)
                cols.pop()

    place(0, 0, 0)
    return solutions


def count_solutions(n: int) -> int:
    return len(solve_classical(n))


def search_space_sizes(n: int) -> Tuple[int, int, int]:
    """(all placements 2^(n²), row-valid n^n, row-and-column-valid n!) as exact ints."""
    if n < 1:
        raise ValueError(f"Board size must be at least 1, got {n}")
    return 2 ** (n * n), n ** n, math.factorial(n)


def is_solution(n: int, cols: Sequence[int]) -> bool:
    if len(cols) != n or sorted(cols) != list(range(1, n + 1)):
        return False
    return all(
        abs(cols[r] - cols[s]) != s - r for r in range(n) for s in range(r + 1, n)
    )


def validate(n: int, cols: Sequence[int]) -> None:
    """Raise InvalidSolution unless cols is an n-queens solution."""
    if not is_solution(n, cols):
        raise InvalidSolution(f"{list(cols)} is not a solution for n={n}")


def backtracking_branch_probability(n: int, cols: Sequence[int]) -> Fraction:
    """Exact probability the backtracking circuit gives a solution.

    The product over rows of 1 / (number of open columns given the rows above).

    Raises:
        InvalidSolution: cols is not a solution
    """
    validate(n, cols)
    layout = BoardLayout(n)
    probability = Fraction(1)
    for row in range(n):
        probability /= len(layout.allowed_columns(cols[:row], COLUMN_AND_DIAGONAL))
    return probability
