"""Chessboard-to-qubit layout for the N-Queens circuits.

Cells are numbered row-major from 1 in the top-left corner to n² in the
bottom-right corner. Qubit indices returned here are 1-based; circuit
builders subtract one at the circuit boundary.
"""

from dataclasses import dataclass
from typing import List, Sequence, Set, Tuple

from lib.errors import BoardBoundsError, DuplicatePrefixError, NotOneHotColumn, NotOneHotRow

# One queen column per row, 1-based.
Solution = Tuple[int, ...]

COLUMN_ONLY = "column_only"
COLUMN_AND_DIAGONAL = "column_and_diagonal"

MAIN = "main"
ANTI = "anti"


@dataclass(frozen=True)
class CellCoord:
    """A board cell addressed by 1-based row and column."""

    row: int
    col: int


@dataclass(frozen=True)
class Diagonal:
    """Cells sharing row - col (main) or row + col (anti)."""

    direction: str
    offset: int
    cells: Tuple[CellCoord, ...]


@dataclass(frozen=True)
class BoardLayout:
    """An n x n board and its (row, col) <-> qubit bijection."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Board size must be at least 1, got {self.n}")

    @property
    def num_cells(self) -> int:
        return self.n * self.n

    def _check_line(self, index: int, what: str) -> None:
        if not 1 <= index <= self.n:
            raise BoardBoundsError(f"{what} {index} outside 1..{self.n}")

    def qubit_index(self, cell: CellCoord) -> int:
        """Return the 1-based qubit index of a cell."""
        self._check_line(cell.row, "Row")
        self._check_line(cell.col, "Column")
        return (cell.row - 1) * self.n + cell.col

    def cell_of(self, qubit: int) -> CellCoord:
        """Inverse of qubit_index."""
        if not 1 <= qubit <= self.num_cells:
            raise BoardBoundsError(f"Qubit {qubit} outside 1..{self.num_cells}")
        row, col = divmod(qubit - 1, self.n)
        return CellCoord(row + 1, col + 1)

    def row_qubits(self, r: int) -> List[int]:
        """Qubits of row r in column order."""
        self._check_line(r, "Row")
        return [(r - 1) * self.n + c for c in range(1, self.n + 1)]

    def column_qubits(self, c: int) -> List[int]:
        """Qubits of column c in row order."""
        self._check_line(c, "Column")
        return [(r - 1) * self.n + c for r in range(1, self.n + 1)]

    def enumerate_diagonals(self) -> List[Diagonal]:
        """All main diagonals (by row - col) followed by all anti diagonals (by row + col).

        Yields 4n - 2 diagonals for n >= 2 and two single-cell diagonals for n = 1.
        """
        n = self.n
        diagonals = []
        for offset in range(-(n - 1), n):
            cells = tuple(
                CellCoord(r, r - offset) for r in range(1, n + 1) if 1 <= r - offset <= n
            )
            diagonals.append(Diagonal(MAIN, offset, cells))
        for offset in range(2, 2 * n + 1):
            cells = tuple(
                CellCoord(r, offset - r) for r in range(1, n + 1) if 1 <= offset - r <= n
            )
            diagonals.append(Diagonal(ANTI, offset, cells))
        return diagonals

    def diagonal_pairs(self, r: int, s: int) -> List[Tuple[CellCoord, CellCoord]]:
        """Diagonally aligned cell pairs between rows r < s.

        Ordered by the row-r column, then by the row-s column.
        """
        self._check_line(r, "Row")
        self._check_line(s, "Row")
        if r >= s:
            raise ValueError(f"Row pair must satisfy r < s, got ({r}, {s})")
        distance = s - r
        pairs = []
        for c in range(1, self.n + 1):
            for other in (c - distance, c + distance):
                if 1 <= other <= self.n:
                    pairs.append((CellCoord(r, c), CellCoord(s, other)))
        return pairs

    def row_pairs(self) -> List[Tuple[int, int]]:
        """Row pairs in lexicographic order: (1,2), (1,3), ..., (n-1,n)."""
        return [(r, s) for r in range(1, self.n + 1) for s in range(r + 1, self.n + 1)]

    def allowed_columns(self, prefix: Sequence[int], mode: str = COLUMN_AND_DIAGONAL) -> Set[int]:
        """Columns still open for row len(prefix) + 1 given the queens of earlier rows."""
        if mode not in (COLUMN_ONLY, COLUMN_AND_DIAGONAL):
            raise ValueError(f"Unknown exclusion mode '{mode}'")
        k = len(prefix)
        if k >= self.n:
            raise BoardBoundsError(f"Prefix of length {k} leaves no row on a {self.n}x{self.n} board")
        for col in prefix:
            self._check_line(col, "Column")
        if len(set(prefix)) != k:
            raise DuplicatePrefixError(f"Prefix {list(prefix)} repeats a column")

        allowed = set(range(1, self.n + 1)) - set(prefix)
        if mode == COLUMN_AND_DIAGONAL:
            next_row = k + 1
            for row, col in enumerate(prefix, start=1):
                distance = next_row - row
                allowed.discard(col - distance)
                allowed.discard(col + distance)
        return allowed

    def decode_solution(self, board_bits: str) -> Solution:
        """Read one queen column per row from an n²-bit string (q1 first).

        Raises:
            NotOneHotRow: a row has zero or several set bits
            NotOneHotColumn: a column has zero or several set bits
        """
        if len(board_bits) != self.num_cells or set(board_bits) - {"0", "1"}:
            raise ValueError(f"Expected {self.num_cells} bits of 0/1, got '{board_bits}'")
        n = self.n
        cols = []
        for r in range(n):
            row = board_bits[r * n:(r + 1) * n]
            if row.count("1") != 1:
                raise NotOneHotRow(f"Row {r + 1} holds {row.count('1')} queens", r + 1)
            cols.append(row.index("1") + 1)
        for c in range(1, n + 1):
            if cols.count(c) != 1:
                raise NotOneHotColumn(f"Column {c} holds {cols.count(c)} queens", c)
        return tuple(cols)

    def encode_solution(self, cols: Sequence[int]) -> str:
        """Board bitstring (q1 first) with one queen per row at the given columns."""
        if len(cols) != self.n:
            raise ValueError(f"Expected {self.n} columns, got {len(cols)}")
        bits = ["0"] * self.num_cells
        for row, col in enumerate(cols, start=1):
            bits[self.qubit_index(CellCoord(row, col)) - 1] = "1"
        return "".join(bits)

    def render(self, cols: Sequence[int]) -> str:
        """Text board: one rank per line, top row first, Q for a queen."""
        lines = []
        for col in cols:
            lines.append(" ".join("Q" if c == col else "." for c in range(1, self.n + 1)))
        return "\n".join(lines)
