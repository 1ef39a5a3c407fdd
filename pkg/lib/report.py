"""Run reports: the record of one solve, its JSON shape and its text rendering."""

from dataclasses import dataclass, field as dataclass_field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from lib.board import BoardLayout, Solution
from lib.circuit import Circuit, depth, gate_counts

EXACT = "exact"
SHOTS = "shots"
MODES = (EXACT, SHOTS)

REQUIRED_KEYS = (
    "n",
    "algorithm",
    "mode",
    "seed",
    "shots",
    "solutions",
    "success_probability",
    "oracle_count",
    "oracle_match",
    "circuit",
    "search_space",
    "wall_time_ms",
)


def format_probability(p: float) -> str:
    return format(p, ".17g")


@dataclass
class CircuitStats:
    qubits: int
    clbits: int
    gate_histogram: Dict[str, int]
    depth: int
    branches_explored: int = 0
    peak_support: int = 0

    @classmethod
    def of(cls, circuit: Circuit) -> "CircuitStats":
        return cls(circuit.num_qubits, circuit.num_clbits, gate_counts(circuit), depth(circuit))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "qubits": self.qubits,
            "clbits": self.clbits,
            "gate_histogram": dict(self.gate_histogram),
            "depth": self.depth,
            "branches_explored": self.branches_explored,
            "peak_support": self.peak_support,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CircuitStats":
        return cls(
            qubits=data["qubits"],
            clbits=data["clbits"],
            gate_histogram=dict(data["gate_histogram"]),
            depth=data["depth"],
            branches_explored=data.get("branches_explored", 0),
            peak_support=data.get("peak_support", 0),
        )


@dataclass
class Report:
    """Outcome of one solve command.

    In shots mode solution probabilities are observed frequencies and
    oracle_match only requires that every observed solution is genuine,
    since a rare solution may go unsampled.

    to_dict keeps probabilities as floats, so JSON carries the shortest
    repr that round-trips. Text rendering uses format_probability.
    """

    n: int
    algorithm: str
    mode: str
    solutions: List[Tuple[Solution, float]]
    success_probability: float
    oracle_count: int
    oracle_match: bool
    circuit: CircuitStats
    search_space: Tuple[int, int, int]
    wall_time_ms: float = 0.0
    seed: Optional[int] = None
    shots: Optional[int] = None
    options: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def solution_set(self) -> List[Solution]:
        return [cols for cols, _ in self.solutions]

    def to_dict(self) -> Dict[str, Any]:
        all_placements, row_valid, row_and_column_valid = self.search_space
        return {
            "n": self.n,
            "algorithm": self.algorithm,
            "mode": self.mode,
            "seed": self.seed,
            "shots": self.shots,
            "options": dict(self.options),
            "solutions": [{"cols": list(cols), "probability": p} for cols, p in self.solutions],
            "success_probability": self.success_probability,
            "oracle_count": self.oracle_count,
            "oracle_match": self.oracle_match,
            "circuit": self.circuit.to_dict(),
            "search_space": {
                "all_placements": all_placements,
                "row_valid": row_valid,
                "row_and_column_valid": row_and_column_valid,
            },
            "wall_time_ms": self.wall_time_ms,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        space = data["search_space"]
        return cls(
            n=data["n"],
            algorithm=data["algorithm"],
            mode=data["mode"],
            solutions=[(tuple(entry["cols"]), entry["probability"]) for entry in data["solutions"]],
            success_probability=data["success_probability"],
            oracle_count=data["oracle_count"],
            oracle_match=data["oracle_match"],
            circuit=CircuitStats.from_dict(data["circuit"]),
            search_space=(space["all_placements"], space["row_valid"], space["row_and_column_valid"]),
            wall_time_ms=data["wall_time_ms"],
            seed=data.get("seed"),
            shots=data.get("shots"),
            options=dict(data.get("options") or {}),
        )

    def validate(self, oracle: Optional[Sequence[Solution]] = None) -> Tuple[bool, Optional[str]]:
        """Check internal consistency, and oracle_match against a solution list when given.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if self.mode not in MODES:
            return False, f"Unknown mode '{self.mode}'"
        if any(p < 0 for _, p in self.solutions):
            return False, "Negative solution probability"
        total = sum(p for _, p in self.solutions)
        if abs(total - self.success_probability) > 1e-9:
            return False, f"Solution probabilities sum to {total}, not {self.success_probability}"
        if oracle is not None:
            expected = recompute_oracle_match(self.mode, self.solution_set, oracle)
            if expected != self.oracle_match:
                return False, f"oracle_match is {self.oracle_match} but recomputes to {expected}"
            if len(oracle) != self.oracle_count:
                return False, f"oracle_count is {self.oracle_count} but the oracle has {len(oracle)}"
        return True, None


def recompute_oracle_match(mode: str, found: Sequence[Solution], oracle: Sequence[Solution]) -> bool:
    if mode == SHOTS:
        return set(found) <= set(oracle)
    return set(found) == set(oracle)


def render_report(report: Report) -> str:
    """Human-readable solve summary with one board per solution."""
    layout = BoardLayout(report.n)
    all_placements, row_valid, row_and_column_valid = report.search_space
    lines = [
        f"n={report.n} algorithm={report.algorithm} mode={report.mode}"
        + (f" shots={report.shots} seed={report.seed}" if report.mode == SHOTS else ""),
        f"search space: 2^(n^2)={all_placements} n^n={row_valid} n!={row_and_column_valid}"
        f" peak support={report.circuit.peak_support}",
        f"circuit: {report.circuit.qubits} qubits, {report.circuit.clbits} clbits, depth {report.circuit.depth}",
        f"solutions: {len(report.solutions)} (oracle {report.oracle_count},"
        f" {'match' if report.oracle_match else 'MISMATCH'})",
        f"success probability: {format_probability(report.success_probability)}",
    ]
    for cols, probability in report.solutions:
        lines.append("")
        lines.append(f"{list(cols)} p={format_probability(probability)}")
        lines.append(layout.render(cols))
    return "\n".join(lines)


def render_stats(circuit: Circuit) -> str:
    """Qubit/clbit counts, gate histogram and depth of a circuit."""
    lines = [
        f"qubits: {circuit.num_qubits}",
        f"clbits: {circuit.num_clbits}",
        f"instructions: {len(circuit)}",
        f"depth: {depth(circuit)}",
        "gates:",
    ]
    lines.extend(f"  {kind}: {count}" for kind, count in gate_counts(circuit).items())
    for name, (start, stop) in circuit.stages.items():
        lines.append(f"stage {name}: {stop - start} instructions, depth {depth(circuit, start, stop)}")
    return "\n".join(lines)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Plain left-aligned text table."""
    cells = [[str(h) for h in headers]] + [[str(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    return "\n".join("  ".join(value.ljust(width) for value, width in zip(row, widths)).rstrip() for row in cells)
