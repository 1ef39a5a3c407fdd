"""Exception hierarchy shared by the board, circuit, simulator and oracle modules."""

from typing import Optional


class QueensError(Exception):
    """Base class for every error raised by the toolkit."""


class BoardBoundsError(QueensError, IndexError):
    """A row, column or cell lies outside the board."""


class DuplicatePrefixError(QueensError, ValueError):
    """A placement prefix uses the same column twice."""


class DecodeError(QueensError, ValueError):
    """A board bitstring cannot be read as a queen placement."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class NotOneHotRow(DecodeError):
    """A row holds zero or several queens."""


class NotOneHotColumn(DecodeError):
    """A column holds zero or several queens."""


class CircuitError(QueensError, ValueError):
    """An instruction or circuit violates the IR rules."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class QubitIndexError(CircuitError, IndexError):
    """A qubit or clbit index is out of range."""


class OverlapError(CircuitError):
    """Controls, targets or the measured qubit overlap within one instruction."""


class ConditionBeforeMeasure(CircuitError):
    """A condition reads a clbit that no earlier Measure writes."""


class CircuitSyntaxError(CircuitError):
    """Circuit text does not follow the dump grammar."""


class WStateError(QueensError, ValueError):
    """Invalid W-state target or control sets."""


class ResourceLimit(QueensError):
    """Exact simulation would exceed the configured branch cap."""

    def __init__(self, count: int, limit: int):
        super().__init__(f"Branch count {count} exceeds limit {limit}")
        self.count = count
        self.limit = limit


class DecodeFailure(QueensError):
    """A post-selected outcome failed to decode; indicates a circuit builder bug."""


class InvalidSolution(QueensError, ValueError):
    """A column vector is not a valid N-Queens solution."""


class ConfigError(QueensError, ValueError):
    """Configuration file or override is malformed."""


class UsageError(QueensError, ValueError):
    """A command line flag is missing, unknown or out of range."""
