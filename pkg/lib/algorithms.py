"""Circuit builders for the three N-Queens constructions.

* pipeline: W-state per row, column parity ancillas, diagonal Toffoli ancillas,
  optionally gated on the measured column ancillas (dynamic circuit).
* direct: controlled W-states over the unused columns of each row, so the board
  starts in the uniform superposition of all permutations; diagonal ancillas as above.
* backtracking: controlled W-states over the columns left after column and
  diagonal exclusion; one ancilla flags branches that reached the last row.

Branches are enumerated classically, depth first, when the circuit is built.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from lib.board import COLUMN_AND_DIAGONAL, COLUMN_ONLY, BoardLayout, CellCoord
from lib.circuit import Circuit, Condition, Instruction, cp, cx, cz, h, mcx, measure, new_circuit, x
from lib.wstate import CHAIN, STRATEGIES, build_controlled_w, build_w

log = logging.getLogger(__name__)

PIPELINE = "pipeline"
DIRECT = "direct"
BACKTRACKING = "backtracking"
ALGORITHMS = (PIPELINE, DIRECT, BACKTRACKING)

GATE_CX = "cx"
GATE_CZ = "cz"
GATE_CP = "cp"
COLUMN_GATE_MODES = (GATE_CX, GATE_CZ, GATE_CP)


@dataclass(frozen=True)
class AncillaPlan:
    """Ancilla qubits and the clbits their measurements write (all 0-based)."""

    n: int
    column_ancillas: Tuple[int, ...] = ()
    diagonal_ancillas: Tuple[int, ...] = ()
    backtracking_ancilla: Optional[int] = None
    column_clbits: Tuple[int, ...] = ()
    diagonal_clbits: Tuple[int, ...] = ()
    backtracking_clbit: Optional[int] = None

    @property
    def num_qubits(self) -> int:
        extra = 1 if self.backtracking_ancilla is not None else 0
        return self.n * self.n + len(self.column_ancillas) + len(self.diagonal_ancillas) + extra

    @property
    def num_clbits(self) -> int:
        extra = 1 if self.backtracking_clbit is not None else 0
        return len(self.column_clbits) + len(self.diagonal_clbits) + extra

    def diagonal_ancilla(self, r: int, s: int) -> int:
        """Ancilla of row pair (r, s); pairs are laid out lexicographically."""
        return self.diagonal_ancillas[BoardLayout(self.n).row_pairs().index((r, s))]


@dataclass(frozen=True)
class PipelineOptions:
    column_gate_mode: str = GATE_CX
    dynamic: bool = True
    wstate_strategy: str = CHAIN

    def __post_init__(self):
        if self.column_gate_mode not in COLUMN_GATE_MODES:
            raise ValueError(f"Column gate mode must be one of {COLUMN_GATE_MODES}, got '{self.column_gate_mode}'")
        if self.wstate_strategy not in STRATEGIES:
            raise ValueError(f"W-state strategy must be one of {STRATEGIES}, got '{self.wstate_strategy}'")


@dataclass(frozen=True)
class PostSelection:
    """Outcomes count as solutions when every listed clbit has the listed value."""

    requirements: Condition = ()

    def matches(self, clbits: str) -> bool:
        return all(clbits[bit] == str(value) for bit, value in self.requirements)


def _board_qubit(layout: BoardLayout, row: int, col: int) -> int:
    return layout.qubit_index(CellCoord(row, col)) - 1


def _all_ones(clbits: Sequence[int]) -> Condition:
    return tuple((bit, 1) for bit in clbits)


def ancilla_plan(layout: BoardLayout, algorithm: str) -> AncillaPlan:
    """Ancillas each algorithm needs; n = 1 needs none."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"Unknown algorithm '{algorithm}'")
    n = layout.n
    if n == 1:
        return AncillaPlan(n)
    base = n * n
    pair_count = n * (n - 1) // 2
    if algorithm == PIPELINE:
        columns = tuple(range(base, base + n - 1))
        diagonals = tuple(range(base + n - 1, base + n - 1 + pair_count))
        return AncillaPlan(
            n,
            column_ancillas=columns,
            diagonal_ancillas=diagonals,
            column_clbits=tuple(range(n - 1)),
            diagonal_clbits=tuple(range(n - 1, n - 1 + pair_count)),
        )
    if algorithm == DIRECT:
        return AncillaPlan(
            n,
            diagonal_ancillas=tuple(range(base, base + pair_count)),
            diagonal_clbits=tuple(range(pair_count)),
        )
    return AncillaPlan(n, backtracking_ancilla=base, backtracking_clbit=0)


def build_row_stage(layout: BoardLayout, strategy: str = CHAIN) -> List[Instruction]:
    """One W_n per row: n^n equally weighted placements with one queen per row."""
    gates: List[Instruction] = []
    for r in range(1, layout.n + 1):
        gates.extend(build_w([q - 1 for q in layout.row_qubits(r)], strategy))
    return gates


def build_column_stage(layout: BoardLayout, plan: AncillaPlan, mode: str = GATE_CX) -> List[Instruction]:
    """Leave the parity of column j on column ancilla j, for j = 1..n-1.

    cx mode uses one CX per row; cz and cp modes sandwich CZ (or CP(pi)) gates
    between two H gates on the ancilla.
    """
    gates: List[Instruction] = []
    for j, ancilla in enumerate(plan.column_ancillas, start=1):
        column = [q - 1 for q in layout.column_qubits(j)]
        if mode == GATE_CX:
            gates.extend(cx(q, ancilla) for q in column)
            continue
        gates.append(h(ancilla))
        if mode == GATE_CZ:
            gates.extend(cz(q, ancilla) for q in column)
        elif mode == GATE_CP:
            gates.extend(cp(math.pi, q, ancilla) for q in column)
        else:
            raise ValueError(f"Unknown column gate mode '{mode}'")
        gates.append(h(ancilla))
    return gates


def build_diagonal_stage(layout: BoardLayout, plan: AncillaPlan) -> List[Instruction]:
    """Set every diagonal ancilla to 1, then one Toffoli per diagonally aligned cell pair."""
    gates = [x(ancilla) for ancilla in plan.diagonal_ancillas]
    for (r, s), ancilla in zip(layout.row_pairs(), plan.diagonal_ancillas):
        for upper, lower in layout.diagonal_pairs(r, s):
            controls = [layout.qubit_index(upper) - 1, layout.qubit_index(lower) - 1]
            gates.append(mcx(controls, ancilla))
    return gates


def _new_circuit(layout: BoardLayout, plan: AncillaPlan) -> Circuit:
    circuit = new_circuit(plan.num_qubits, plan.num_clbits)
    circuit.add_register("board", "q", 0, layout.num_cells - 1)
    if plan.column_ancillas:
        circuit.add_register("col_anc", "q", plan.column_ancillas[0], plan.column_ancillas[-1])
        circuit.add_register("col_meas", "c", plan.column_clbits[0], plan.column_clbits[-1])
    if plan.diagonal_ancillas:
        circuit.add_register("diag_anc", "q", plan.diagonal_ancillas[0], plan.diagonal_ancillas[-1])
        circuit.add_register("diag_meas", "c", plan.diagonal_clbits[0], plan.diagonal_clbits[-1])
    if plan.backtracking_ancilla is not None:
        circuit.add_register("bt_anc", "q", plan.backtracking_ancilla, plan.backtracking_ancilla)
        circuit.add_register("bt_meas", "c", plan.backtracking_clbit, plan.backtracking_clbit)
    return circuit


def _add_stage(circuit: Circuit, name: str, gates: Sequence[Instruction], condition: Condition = ()) -> None:
    start = len(circuit)
    circuit.extend(gate.conditioned(condition) for gate in gates)
    circuit.add_stage(name, start, len(circuit))


def _measure_all(qubits: Sequence[int], clbits: Sequence[int]) -> List[Instruction]:
    return [measure(q, c) for q, c in zip(qubits, clbits)]


def build_jha_pipeline(
    layout: BoardLayout, options: Optional[PipelineOptions] = None
) -> Tuple[Circuit, PostSelection]:
    """Row, column and diagonal stages with column/diagonal post-selection.

    With options.dynamic the column ancillas are measured before the diagonal
    stage, and the diagonal stage and board readout run only in the branch where
    every column ancilla read 1. Otherwise every measurement happens at the end.
    """
    options = options or PipelineOptions()
    plan = ancilla_plan(layout, PIPELINE)
    circuit = _new_circuit(layout, plan)

    _add_stage(circuit, "row", build_row_stage(layout, options.wstate_strategy))
    _add_stage(circuit, "column", build_column_stage(layout, plan, options.column_gate_mode))

    column_ok = _all_ones(plan.column_clbits)
    column_measure = _measure_all(plan.column_ancillas, plan.column_clbits)
    if options.dynamic:
        _add_stage(circuit, "column_measure", column_measure)
        _add_stage(circuit, "diagonal", build_diagonal_stage(layout, plan), column_ok)
        _add_stage(circuit, "diagonal_measure", _measure_all(plan.diagonal_ancillas, plan.diagonal_clbits))
        circuit.set_readout("board", column_ok)
    else:
        _add_stage(circuit, "diagonal", build_diagonal_stage(layout, plan))
        _add_stage(circuit, "column_measure", column_measure)
        _add_stage(circuit, "diagonal_measure", _measure_all(plan.diagonal_ancillas, plan.diagonal_clbits))
        circuit.set_readout("board")

    post = PostSelection(column_ok + _all_ones(plan.diagonal_clbits))
    log.debug("pipeline n=%d: %d qubits, %d instructions", layout.n, circuit.num_qubits, len(circuit))
    return circuit, post


def _branch_stage(layout: BoardLayout, mode: str, strategy: str) -> List[Instruction]:
    """Controlled W-states over each row's open columns, one per classical prefix.

    Rows whose open set is empty are left untouched; the final row's single open
    column becomes an MCX on the prefix's chosen qubits.
    """
    gates: List[Instruction] = []

    def visit(prefix: List[int]) -> None:
        row = len(prefix) + 1
        if row > layout.n:
            return
        columns = sorted(layout.allowed_columns(prefix, mode))
        if not columns:
            return
        controls = [_board_qubit(layout, r, c) for r, c in enumerate(prefix, start=1)]
        targets = [_board_qubit(layout, row, c) for c in columns]
        gates.extend(build_controlled_w(controls, targets, strategy))
        for col in columns:
            prefix.append(col)
            visit(prefix)
            prefix.pop()

    visit([])
    return gates


def build_direct_column(
    layout: BoardLayout, strategy: str = CHAIN, dynamic: bool = False
) -> Tuple[Circuit, PostSelection]:
    """Permutation superposition followed by the diagonal stage.

    With dynamic, the board readout is gated on every diagonal clbit being 1;
    otherwise every branch reads out its board.
    """
    plan = ancilla_plan(layout, DIRECT)
    circuit = _new_circuit(layout, plan)

    _add_stage(circuit, "permutation", _branch_stage(layout, COLUMN_ONLY, strategy))
    _add_stage(circuit, "diagonal", build_diagonal_stage(layout, plan))
    _add_stage(circuit, "diagonal_measure", _measure_all(plan.diagonal_ancillas, plan.diagonal_clbits))

    diagonal_ok = _all_ones(plan.diagonal_clbits)
    circuit.set_readout("board", diagonal_ok if dynamic else ())
    log.debug("direct n=%d: %d qubits, %d instructions", layout.n, circuit.num_qubits, len(circuit))
    return circuit, PostSelection(diagonal_ok)


def build_quantum_backtracking(layout: BoardLayout, strategy: str = CHAIN) -> Tuple[Circuit, PostSelection]:
    """Column- and diagonal-pruned branch superposition with a single solution ancilla."""
    plan = ancilla_plan(layout, BACKTRACKING)
    circuit = _new_circuit(layout, plan)

    _add_stage(circuit, "backtracking", _branch_stage(layout, COLUMN_AND_DIAGONAL, strategy))
    post = PostSelection()
    if plan.backtracking_ancilla is not None:
        last_row = [q - 1 for q in layout.row_qubits(layout.n)]
        _add_stage(circuit, "solution_flag", [cx(q, plan.backtracking_ancilla) for q in last_row])
        _add_stage(circuit, "solution_measure", [measure(plan.backtracking_ancilla, plan.backtracking_clbit)])
        post = PostSelection(((plan.backtracking_clbit, 1),))
    circuit.set_readout("board")
    log.debug("backtracking n=%d: %d qubits, %d instructions", layout.n, circuit.num_qubits, len(circuit))
    return circuit, post


Builder = Callable[[BoardLayout, PipelineOptions], Tuple[Circuit, PostSelection]]

BUILDERS: Dict[str, Builder] = {
    PIPELINE: build_jha_pipeline,
    DIRECT: lambda layout, options: build_direct_column(layout, options.wstate_strategy, options.dynamic),
    BACKTRACKING: lambda layout, options: build_quantum_backtracking(layout, options.wstate_strategy),
}


def build(
    layout: BoardLayout, algorithm: str, options: Optional[PipelineOptions] = None
) -> Tuple[Circuit, PostSelection]:
    """Build any of the three circuits by name."""
    if algorithm not in BUILDERS:
        raise ValueError(f"Unknown algorithm '{algorithm}'. Choose from: {', '.join(ALGORITHMS)}")
    return BUILDERS[algorithm](layout, options or PipelineOptions())
