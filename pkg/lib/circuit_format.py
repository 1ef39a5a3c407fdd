"""Line-oriented text dump of circuits and its parser.

Grammar (one item per line, ``#`` starts a comment)::

    CIRCUIT qubits=<Q> clbits=<C>
    REG <name> q<a>..q<b>          (or c<a>..c<b> for clbits)
    X q3 | H q0 | RY(<float>) q2
    CX q0 -> q1 | CZ q0 -> q1 | CP(<float>) q0 -> q1
    MCX q0,q5 -> q9 | MCRY(<float>) q0,q1 -> q2
    MEASURE q16 -> c0 | RESET q4
    STAGE <name> <start>..<stop>
    READOUT <register>
    <any instruction or READOUT> ? c0=1,c2=0
"""

import re
from typing import List, Optional, Tuple

from lib.circuit import GATE_SHAPES, MEASURE, Circuit, Condition, Instruction
from lib.errors import CircuitError, CircuitSyntaxError

HEADER_PATTERN = re.compile(r"^CIRCUIT\s+qubits=(\d+)\s+clbits=(\d+)$")
REG_PATTERN = re.compile(r"^REG\s+(\S+)\s+([qc])(\d+)\.\.([qc])(\d+)$")
STAGE_PATTERN = re.compile(r"^STAGE\s+(\S+)\s+(\d+)\.\.(\d+)$")
READOUT_PATTERN = re.compile(r"^READOUT\s+(\S+)$")
INSTRUCTION_PATTERN = re.compile(r"^([A-Z]+)(?:\(([^()\s]+)\))?\s+(.+)$")
QUBIT_PATTERN = re.compile(r"^q(\d+)$")
CLBIT_PATTERN = re.compile(r"^c(\d+)$")
TERM_PATTERN = re.compile(r"^c(\d+)=([01])$")


def format_angle(theta: float) -> str:
    """17 significant digits, enough for a bit-exact float round trip."""
    return format(theta, ".17g")


def _format_condition(condition: Condition) -> str:
    if not condition:
        return ""
    return " ? " + ",".join(f"c{bit}={value}" for bit, value in condition)


def format_instruction(instruction: Instruction) -> str:
    """Render one instruction as a dump line."""
    head = instruction.kind
    if instruction.theta is not None:
        head += f"({format_angle(instruction.theta)})"
    target = f"q{instruction.targets[0]}"
    if instruction.kind == MEASURE:
        body = f"{target} -> c{instruction.clbit}"
    elif instruction.controls:
        body = ",".join(f"q{q}" for q in instruction.controls) + f" -> {target}"
    else:
        body = target
    return f"{head} {body}{_format_condition(instruction.condition)}"


def emit_text(circuit: Circuit) -> str:
    """Deterministic line-per-instruction dump, LF terminated."""
    lines = [f"CIRCUIT qubits={circuit.num_qubits} clbits={circuit.num_clbits}"]
    for register in circuit.registers.values():
        kind = register.kind
        lines.append(f"REG {register.name} {kind}{register.start}..{kind}{register.stop}")
    lines.extend(format_instruction(instruction) for instruction in circuit.instructions)
    for name, (start, stop) in circuit.stages.items():
        lines.append(f"STAGE {name} {start}..{stop}")
    if circuit.readout is not None:
        lines.append(f"READOUT {circuit.readout.register}{_format_condition(circuit.readout.condition)}")
    return "\n".join(lines) + "\n"


def _parse_condition(text: str, line: int) -> Condition:
    terms = []
    for term in text.split(","):
        match = TERM_PATTERN.match(term.strip())
        if not match:
            raise CircuitSyntaxError(f"Bad condition term '{term.strip()}'", line=line)
        terms.append((int(match.group(1)), int(match.group(2))))
    return tuple(terms)


def _parse_qubit(token: str, line: int) -> int:
    match = QUBIT_PATTERN.match(token.strip())
    if not match:
        raise CircuitSyntaxError(f"Expected a qubit like 'q3', got '{token.strip()}'", line=line)
    return int(match.group(1))


def _parse_instruction(text: str, line: int) -> Instruction:
    match = INSTRUCTION_PATTERN.match(text)
    if not match:
        raise CircuitSyntaxError(f"Cannot parse '{text}'", line=line)
    kind, angle, operands = match.groups()
    if kind not in GATE_SHAPES:
        raise CircuitSyntaxError(f"Unknown instruction '{kind}'", line=line)

    theta: Optional[float] = None
    if angle is not None:
        try:
            theta = float(angle)
        except ValueError:
            raise CircuitSyntaxError(f"Bad angle '{angle}'", line=line)

    if "->" in operands:
        left, right = operands.split("->", 1)
        if kind == MEASURE:
            clbit_match = CLBIT_PATTERN.match(right.strip())
            if not clbit_match:
                raise CircuitSyntaxError(f"Expected a clbit like 'c0', got '{right.strip()}'", line=line)
            return Instruction(kind, (_parse_qubit(left, line),), clbit=int(clbit_match.group(1)))
        controls = tuple(_parse_qubit(token, line) for token in left.split(","))
        return Instruction(kind, (_parse_qubit(right, line),), controls, theta=theta)
    return Instruction(kind, (_parse_qubit(operands, line),), theta=theta)


def _split_condition(text: str, line: int) -> Tuple[str, Condition]:
    if "?" not in text:
        return text, ()
    body, condition = text.split("?", 1)
    return body.strip(), _parse_condition(condition, line)


def parse_text(text: str) -> Circuit:
    """Rebuild a circuit from emit_text output.

    Raises:
        CircuitSyntaxError: malformed line (carries the 1-based line number)
        CircuitError: any validation failure append would raise, with the line number
    """
    circuit: Optional[Circuit] = None
    stages: List[Tuple[int, str, int, int]] = []
    readout: Optional[Tuple[int, str, Condition]] = None

    for line_number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue

        if circuit is None:
            header = HEADER_PATTERN.match(stripped)
            if not header:
                raise CircuitSyntaxError("Expected 'CIRCUIT qubits=<Q> clbits=<C>' header", line=line_number)
            try:
                circuit = Circuit(int(header.group(1)), int(header.group(2)))
            except CircuitError as e:
                raise type(e)(str(e), line=line_number)
            continue

        try:
            body, condition = _split_condition(stripped, line_number)
            reg = REG_PATTERN.match(body)
            stage = STAGE_PATTERN.match(body)
            readout_match = READOUT_PATTERN.match(body)
            if reg:
                name, kind, start, stop_kind, stop = reg.groups()
                if kind != stop_kind or condition:
                    raise CircuitSyntaxError(f"Bad register line '{stripped}'", line=line_number)
                circuit.add_register(name, kind, int(start), int(stop))
            elif stage:
                if condition:
                    raise CircuitSyntaxError(f"Bad stage line '{stripped}'", line=line_number)
                stages.append((line_number, stage.group(1), int(stage.group(2)), int(stage.group(3))))
            elif readout_match:
                readout = (line_number, readout_match.group(1), condition)
            else:
                circuit.append(_parse_instruction(body, line_number).conditioned(condition))
        except CircuitError as e:
            if e.line is not None:
                raise
            raise type(e)(str(e), line=line_number)

    if circuit is None:
        raise CircuitSyntaxError("Empty circuit text", line=1)

    for line_number, name, start, stop in stages:
        try:
            circuit.add_stage(name, start, stop)
        except CircuitError as e:
            raise type(e)(str(e), line=line_number)
    if readout is not None:
        line_number, register, condition = readout
        try:
            circuit.set_readout(register, condition)
        except CircuitError as e:
            raise type(e)(str(e), line=line_number)
    return circuit
