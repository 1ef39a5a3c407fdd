"""Gate-level circuit IR with classical bits and classically conditioned instructions."""

import math
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

from lib.errors import CircuitError, ConditionBeforeMeasure, OverlapError, QubitIndexError

X = "X"
H = "H"
RY = "RY"
CX = "CX"
CZ = "CZ"
CP = "CP"
MCX = "MCX"
MCRY = "MCRY"
MEASURE = "MEASURE"
RESET = "RESET"

# kind -> (allowed control counts as (min, max or None), has angle)
GATE_SHAPES: Dict[str, Tuple[int, Optional[int], bool]] = {
    X: (0, 0, False),
    H: (0, 0, False),
    RY: (0, 0, True),
    CX: (1, 1, False),
    CZ: (1, 1, False),
    CP: (1, 1, True),
    MCX: (1, None, False),
    MCRY: (1, None, True),
    MEASURE: (0, 0, False),
    RESET: (0, 0, False),
}

UNITARY_KINDS = frozenset(GATE_SHAPES) - {MEASURE, RESET}

# Conjunction of (clbit, required value) terms.
Condition = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Instruction:
    """One gate, measurement or reset, optionally gated on classical bits."""

    kind: str
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()
    theta: Optional[float] = None
    clbit: Optional[int] = None
    condition: Condition = ()

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.controls + self.targets

    @property
    def is_unitary(self) -> bool:
        return self.kind in UNITARY_KINDS

    def conditioned(self, condition: Condition) -> "Instruction":
        """Copy of this instruction gated on the given clbit values."""
        return replace(self, condition=tuple(condition))

    def check_shape(self) -> None:
        """Validate the instruction in isolation (arity, angle, overlap).

        Raises:
            CircuitError: unknown kind, wrong arity or missing/non-finite angle
            OverlapError: a qubit appears twice
        """
        if self.kind not in GATE_SHAPES:
            raise CircuitError(f"Unknown instruction kind '{self.kind}'")
        min_controls, max_controls, has_angle = GATE_SHAPES[self.kind]
        if len(self.targets) != 1:
            raise CircuitError(f"{self.kind} takes exactly one target, got {len(self.targets)}")
        if len(self.controls) < min_controls or (max_controls is not None and len(self.controls) > max_controls):
            raise CircuitError(f"{self.kind} cannot take {len(self.controls)} controls")
        if has_angle:
            if self.theta is None or not math.isfinite(self.theta):
                raise CircuitError(f"{self.kind} needs a finite angle, got {self.theta}")
        elif self.theta is not None:
            raise CircuitError(f"{self.kind} takes no angle")
        if (self.kind == MEASURE) != (self.clbit is not None):
            raise CircuitError("Exactly MEASURE instructions write a clbit")
        if len(set(self.qubits)) != len(self.qubits):
            raise OverlapError(f"{self.kind} uses qubits {list(self.qubits)} more than once")
        clbits = [bit for bit, _ in self.condition]
        if len(set(clbits)) != len(clbits):
            raise CircuitError(f"Condition repeats a clbit: {list(self.condition)}")
        for _, value in self.condition:
            if value not in (0, 1):
                raise CircuitError(f"Condition value must be 0 or 1, got {value}")


def x(q: int) -> Instruction:
    return Instruction(X, (q,))


def h(q: int) -> Instruction:
    return Instruction(H, (q,))


def ry(theta: float, q: int) -> Instruction:
    return Instruction(RY, (q,), theta=theta)


def cx(control: int, target: int) -> Instruction:
    return Instruction(CX, (target,), (control,))


def cz(control: int, target: int) -> Instruction:
    return Instruction(CZ, (target,), (control,))


def cp(theta: float, control: int, target: int) -> Instruction:
    return Instruction(CP, (target,), (control,), theta=theta)


def mcx(controls: Sequence[int], target: int) -> Instruction:
    return Instruction(MCX, (target,), tuple(controls))


def mcry(theta: float, controls: Sequence[int], target: int) -> Instruction:
    return Instruction(MCRY, (target,), tuple(controls), theta=theta)


def measure(q: int, clbit: int) -> Instruction:
    return Instruction(MEASURE, (q,), clbit=clbit)


def reset(q: int) -> Instruction:
    return Instruction(RESET, (q,))


def add_controls(instruction: Instruction, controls: Sequence[int]) -> Instruction:
    """Lift an X/CX/MCX/RY/MCRY gate to its multi-controlled form with extra controls."""
    if not controls:
        return instruction
    merged = tuple(controls) + instruction.controls
    if instruction.kind in (X, CX, MCX):
        return replace(instruction, kind=MCX, controls=merged)
    if instruction.kind in (RY, MCRY):
        return replace(instruction, kind=MCRY, controls=merged)
    raise CircuitError(f"Cannot add controls to {instruction.kind}")


@dataclass(frozen=True)
class Register:
    """Named inclusive index range over qubits ('q') or clbits ('c')."""

    name: str
    kind: str
    start: int
    stop: int

    @property
    def indices(self) -> List[int]:
        return list(range(self.start, self.stop + 1))


@dataclass(frozen=True)
class Readout:
    """Terminal board readout: which qubit register is read and under which condition."""

    register: str
    condition: Condition = ()


@dataclass
class Circuit:
    """Ordered instruction list over num_qubits qubits and num_clbits clbits.

    Qubits start in |0>, clbits in 0. Indices are 0-based.
    """

    num_qubits: int
    num_clbits: int = 0
    instructions: List[Instruction] = dataclass_field(default_factory=list)
    registers: Dict[str, Register] = dataclass_field(default_factory=dict)
    readout: Optional[Readout] = None
    stages: Dict[str, Tuple[int, int]] = dataclass_field(default_factory=dict)
    _written: Set[int] = dataclass_field(default_factory=set, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise CircuitError(f"A circuit needs at least one qubit, got {self.num_qubits}")
        if self.num_clbits < 0:
            raise CircuitError(f"Clbit count cannot be negative, got {self.num_clbits}")
        pending = self.instructions
        self.instructions = []
        for instruction in pending:
            self.append(instruction)

    def __len__(self) -> int:
        return len(self.instructions)

    def _check_condition(self, condition: Condition) -> None:
        for clbit, _ in condition:
            if not 0 <= clbit < self.num_clbits:
                raise QubitIndexError(f"Clbit c{clbit} outside 0..{self.num_clbits - 1}")
            if clbit not in self._written:
                raise ConditionBeforeMeasure(f"Condition reads c{clbit} before any MEASURE writes it")

    def validate(self, instruction: Instruction) -> None:
        """Raise if the instruction cannot be appended to this circuit."""
        instruction.check_shape()
        for q in instruction.qubits:
            if not 0 <= q < self.num_qubits:
                raise QubitIndexError(f"Qubit q{q} outside 0..{self.num_qubits - 1}")
        if instruction.clbit is not None and not 0 <= instruction.clbit < self.num_clbits:
            raise QubitIndexError(f"Clbit c{instruction.clbit} outside 0..{self.num_clbits - 1}")
        self._check_condition(instruction.condition)

    def append(self, instruction: Instruction) -> "Circuit":
        """Validate and append; a rejected instruction leaves the circuit unchanged."""
        self.validate(instruction)
        self.instructions.append(instruction)
        if instruction.kind == MEASURE:
            self._written.add(instruction.clbit)
        return self

    def extend(self, instructions: Sequence[Instruction]) -> "Circuit":
        for instruction in instructions:
            self.append(instruction)
        return self

    def add_register(self, name: str, kind: str, start: int, stop: int) -> Register:
        """Label an inclusive qubit ('q') or clbit ('c') range."""
        if name in self.registers:
            raise CircuitError(f"Register '{name}' already defined")
        if kind not in ("q", "c"):
            raise CircuitError(f"Register kind must be 'q' or 'c', got '{kind}'")
        size = self.num_qubits if kind == "q" else self.num_clbits
        if not 0 <= start <= stop < size:
            raise QubitIndexError(f"Register '{name}' range {kind}{start}..{kind}{stop} out of bounds")
        register = Register(name, kind, start, stop)
        self.registers[name] = register
        return register

    def add_stage(self, name: str, start: int, stop: int) -> None:
        """Name the half-open instruction range [start, stop)."""
        if not 0 <= start <= stop <= len(self.instructions):
            raise CircuitError(f"Stage '{name}' range {start}..{stop} out of bounds")
        self.stages[name] = (start, stop)

    def set_readout(self, register: str, condition: Condition = ()) -> None:
        """Declare the qubit register read at the end of the run and its gating condition."""
        if register not in self.registers or self.registers[register].kind != "q":
            raise CircuitError(f"Readout register '{register}' is not a qubit register")
        self._check_condition(tuple(condition))
        self.readout = Readout(register, tuple(condition))

    def readout_qubits(self) -> List[int]:
        """Qubits read at the end of the run; all qubits when no readout is declared."""
        if self.readout is None:
            return list(range(self.num_qubits))
        return self.registers[self.readout.register].indices

    def stage_of(self, index: int) -> Optional[str]:
        for name, (start, stop) in self.stages.items():
            if start <= index < stop:
                return name
        return None


def new_circuit(num_qubits: int, num_clbits: int = 0) -> Circuit:
    """Empty circuit; CircuitError for fewer than one qubit or negative clbits."""
    return Circuit(num_qubits, num_clbits)


def gate_counts(circuit: Circuit) -> Dict[str, int]:
    """Histogram of unitary gate kinds; MEASURE and RESET are not counted."""
    counts: Dict[str, int] = {}
    for instruction in circuit.instructions:
        if instruction.is_unitary:
            counts[instruction.kind] = counts.get(instruction.kind, 0) + 1
    return dict(sorted(counts.items()))


def depth(circuit: Circuit, start: int = 0, stop: Optional[int] = None) -> int:
    """Longest chain of instructions that share a qubit or clbit (conditions included)."""
    qubit_level: Dict[int, int] = {}
    clbit_level: Dict[int, int] = {}
    longest = 0
    for instruction in circuit.instructions[start:stop]:
        clbits = [bit for bit, _ in instruction.condition]
        if instruction.clbit is not None:
            clbits.append(instruction.clbit)
        level = 1 + max(
            [qubit_level.get(q, 0) for q in instruction.qubits] + [clbit_level.get(c, 0) for c in clbits]
        )
        for q in instruction.qubits:
            qubit_level[q] = level
        for c in clbits:
            clbit_level[c] = level
        longest = max(longest, level)
    return longest
