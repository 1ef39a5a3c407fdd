"""Exact sparse-amplitude simulator for dynamic circuits.

A state is a map from basis index (qubit 0 is the least significant bit) to
complex amplitude; absent keys are zero. Mid-circuit measurements split a
branch into outcome branches carrying their own classical bits and
probability weight. Exact mode follows every branch; shot mode samples one
path per shot from a seeded generator, reusing the states of paths already
visited.
"""

import bisect
import cmath
import logging
import math
import time
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Tuple

import numpy as np

from lib.algorithms import PostSelection
from lib.board import BoardLayout, Solution
from lib.circuit import CP, CX, CZ, H, MCRY, MCX, MEASURE, RESET, RY, X, Circuit, Condition, Instruction
from lib.errors import DecodeError, DecodeFailure, ResourceLimit

log = logging.getLogger(__name__)

PRUNE_THRESHOLD = 1e-14
DEFAULT_MAX_BRANCHES = 1 << 20

_H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _gate_matrix(instruction: Instruction) -> Tuple[complex, complex, complex, complex]:
    if instruction.kind == H:
        matrix = _H_MATRIX
    else:
        half = instruction.theta / 2
        matrix = np.array([[math.cos(half), -math.sin(half)], [math.sin(half), math.cos(half)]], dtype=complex)
    return tuple(complex(v) for v in matrix.flat)


class SparseState:
    """Basis-index -> amplitude map over num_qubits qubits."""

    def __init__(self, num_qubits: int, amplitudes: Optional[Dict[int, complex]] = None,
                 prune_threshold: float = PRUNE_THRESHOLD):
        self.num_qubits = num_qubits
        self.amplitudes: Dict[int, complex] = {0: 1 + 0j} if amplitudes is None else amplitudes
        self.prune_threshold = prune_threshold
        self.pruned_probability = 0.0

    def __len__(self) -> int:
        return len(self.amplitudes)

    def copy(self) -> "SparseState":
        state = SparseState(self.num_qubits, dict(self.amplitudes), self.prune_threshold)
        state.pruned_probability = self.pruned_probability
        return state

    def norm(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def probability_of_one(self, qubit: int) -> float:
        bit = 1 << qubit
        return sum(abs(a) ** 2 for k, a in self.amplitudes.items() if k & bit)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis state written q0 first."""
        index = sum(1 << q for q, b in enumerate(bits) if b == "1")
        return self.amplitudes.get(index, 0j)

    def as_bitstrings(self) -> Dict[str, complex]:
        """Stored amplitudes keyed by bitstrings written q0 first."""
        return {
            "".join("1" if (k >> q) & 1 else "0" for q in range(self.num_qubits)): a
            for k, a in sorted(self.amplitudes.items())
        }

    def _keep(self, amplitude: complex) -> bool:
        if abs(amplitude) < self.prune_threshold:
            self.pruned_probability += abs(amplitude) ** 2
            return False
        return True


def apply_gate(state: SparseState, instruction: Instruction) -> SparseState:
    """Apply a unitary instruction in place and return the state.

    Controlled gates act only on basis states whose control bits are all 1.
    """
    mask = 0
    for q in instruction.controls:
        mask |= 1 << q
    target = 1 << instruction.targets[0]
    kind = instruction.kind
    amplitudes = state.amplitudes

    if kind in (X, CX, MCX):
        state.amplitudes = {(k ^ target if k & mask == mask else k): a for k, a in amplitudes.items()}
        return state

    if kind in (CZ, CP):
        phase = -1 + 0j if kind == CZ else cmath.exp(1j * instruction.theta)
        both = mask | target
        updated = {}
        for k, a in amplitudes.items():
            if k & both == both:
                a = a * phase
            if state._keep(a):
                updated[k] = a
        state.amplitudes = updated
        return state

    if kind not in (H, RY, MCRY):
        raise ValueError(f"{kind} is not a unitary gate")

    u00, u01, u10, u11 = _gate_matrix(instruction)
    updated: Dict[int, complex] = {}
    seen = set()
    for k, a in amplitudes.items():
        if k & mask != mask:
            updated[k] = a
            continue
        low = k & ~target
        if low in seen:
            continue
        seen.add(low)
        high = low | target
        a0 = amplitudes.get(low, 0j)
        a1 = amplitudes.get(high, 0j)
        new0 = u00 * a0 + u01 * a1
        new1 = u10 * a0 + u11 * a1
        if state._keep(new0):
            updated[low] = new0
        if state._keep(new1):
            updated[high] = new1
    state.amplitudes = updated
    return state


@dataclass
class Branch:
    """Classical bits, state and probability weight of one measurement history."""

    clbits: Tuple[int, ...]
    state: SparseState
    weight: float = 1.0

    def satisfies(self, condition: Condition) -> bool:
        return all(self.clbits[bit] == value for bit, value in condition)

    @property
    def clbit_string(self) -> str:
        return "".join(str(b) for b in self.clbits)


def measure(branch: Branch, qubit: int, clbit: Optional[int]) -> List[Branch]:
    """Split a branch on a Z-basis measurement; zero-probability outcomes are dropped."""
    bit = 1 << qubit
    parts: Tuple[Dict[int, complex], Dict[int, complex]] = ({}, {})
    for k, a in branch.state.amplitudes.items():
        parts[1 if k & bit else 0][k] = a
    norms = [sum(abs(a) ** 2 for a in part.values()) for part in parts]
    total = norms[0] + norms[1]
    outcomes = []
    for value in (0, 1):
        if not parts[value] or norms[value] <= 0.0:
            continue
        scale = 1 / math.sqrt(norms[value])
        amplitudes = {k: a * scale for k, a in parts[value].items()}
        state = SparseState(branch.state.num_qubits, amplitudes, branch.state.prune_threshold)
        state.pruned_probability = branch.state.pruned_probability
        clbits = list(branch.clbits)
        if clbit is not None:
            clbits[clbit] = value
        outcomes.append(Branch(tuple(clbits), state, branch.weight * norms[value] / total))
    return outcomes


def reset(branch: Branch, qubit: int) -> List[Branch]:
    """Measure without recording, then flip the qubit back to 0 where it read 1."""
    outcomes = measure(branch, qubit, None)
    flip = Instruction(X, (qubit,))
    for outcome in outcomes:
        if outcome.state.probability_of_one(qubit) > 0:
            apply_gate(outcome.state, flip)
    return outcomes


@dataclass(frozen=True)
class Outcome:
    """Terminal record: classical bits, readout bits (first readout qubit first), probability."""

    clbits: str
    board: str
    probability: float


@dataclass
class RunStats:
    gates_executed: int = 0
    weighted_gate_applications: float = 0.0
    amplitude_updates: int = 0
    branches_explored: int = 1
    peak_support: int = 1
    pruned_probability: float = 0.0
    stage_weighted_gates: Dict[str, float] = dataclass_field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "gates_executed": self.gates_executed,
            "weighted_gate_applications": self.weighted_gate_applications,
            "amplitude_updates": self.amplitude_updates,
            "branches_explored": self.branches_explored,
            "peak_support": self.peak_support,
            "pruned_probability": self.pruned_probability,
            "stage_weighted_gates": dict(self.stage_weighted_gates),
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass
class RunResult:
    outcomes: List[Outcome]
    total_probability: float
    stats: RunStats

    @classmethod
    def from_counts(cls, counts: Dict[Tuple[str, str], int], shots: int) -> "RunResult":
        """Empirical result whose outcome probabilities are shot frequencies."""
        outcomes = [Outcome(c, b, k / shots) for (c, b), k in sorted(counts.items())]
        return cls(outcomes, sum(o.probability for o in outcomes), RunStats(branches_explored=len(outcomes)))

    def probability_of(self, clbits: Optional[str] = None, board: Optional[str] = None) -> float:
        return sum(
            o.probability
            for o in self.outcomes
            if (clbits is None or o.clbits == clbits) and (board is None or o.board == board)
        )


class Simulator:
    """Runs circuits exactly (all branches) or by seeded shot sampling."""

    def __init__(self, max_branches: int = DEFAULT_MAX_BRANCHES, prune_threshold: float = PRUNE_THRESHOLD):
        self.max_branches = max_branches
        self.prune_threshold = prune_threshold

    def _initial_branch(self, circuit: Circuit) -> Branch:
        return Branch((0,) * circuit.num_clbits, SparseState(circuit.num_qubits, prune_threshold=self.prune_threshold))

    @staticmethod
    def _step(branch: Branch, instruction: Instruction) -> List[Branch]:
        if not branch.satisfies(instruction.condition):
            return [branch]
        if instruction.kind == MEASURE:
            return measure(branch, instruction.targets[0], instruction.clbit)
        if instruction.kind == RESET:
            return reset(branch, instruction.targets[0])
        apply_gate(branch.state, instruction)
        return [branch]

    def run_branches(self, circuit: Circuit, stop: Optional[int] = None) -> Tuple[List[Branch], RunStats]:
        """Execute instructions [0, stop) across all branches.

        Raises:
            ResourceLimit: the live branch count exceeds max_branches
        """
        started = time.perf_counter()
        stats = RunStats()
        branches = [self._initial_branch(circuit)]
        stages = [circuit.stage_of(i) for i in range(len(circuit))]

        for index, instruction in enumerate(circuit.instructions[:stop]):
            if instruction.is_unitary:
                for branch in branches:
                    if branch.satisfies(instruction.condition):
                        stats.gates_executed += 1
                        stats.weighted_gate_applications += branch.weight
                        stats.amplitude_updates += len(branch.state)
                        if stages[index] is not None:
                            stage_total = stats.stage_weighted_gates.get(stages[index], 0.0)
                            stats.stage_weighted_gates[stages[index]] = stage_total + branch.weight
            next_branches: List[Branch] = []
            for branch in branches:
                next_branches.extend(self._step(branch, instruction))
            if len(next_branches) > len(branches):
                stats.branches_explored += len(next_branches) - len(branches)
                if len(next_branches) > self.max_branches:
                    raise ResourceLimit(len(next_branches), self.max_branches)
            branches = next_branches
            stats.peak_support = max(stats.peak_support, max(len(b.state) for b in branches))

        stats.pruned_probability = sum(b.weight * b.state.pruned_probability for b in branches)
        stats.wall_time_ms = (time.perf_counter() - started) * 1000
        return branches, stats

    @staticmethod
    def _readout(circuit: Circuit, branch: Branch) -> Dict[str, float]:
        """Readout-bit distribution of one branch, unnormalized by branch weight."""
        qubits = circuit.readout_qubits()
        condition = circuit.readout.condition if circuit.readout is not None else ()
        if not branch.satisfies(condition):
            return {"0" * len(qubits): branch.state.norm()}
        distribution: Dict[str, float] = {}
        for k, a in branch.state.amplitudes.items():
            bits = "".join("1" if (k >> q) & 1 else "0" for q in qubits)
            distribution[bits] = distribution.get(bits, 0.0) + abs(a) ** 2
        return distribution

    def run_exact(self, circuit: Circuit) -> RunResult:
        """Follow every branch to the end and group outcomes by (clbits, readout bits)."""
        branches, stats = self.run_branches(circuit)
        grouped: Dict[Tuple[str, str], float] = {}
        for branch in branches:
            for bits, probability in self._readout(circuit, branch).items():
                key = (branch.clbit_string, bits)
                grouped[key] = grouped.get(key, 0.0) + branch.weight * probability
        outcomes = [Outcome(c, b, p) for (c, b), p in sorted(grouped.items())]
        total = sum(o.probability for o in outcomes)
        if abs(total - 1.0) > 1e-9:
            log.warning("Total outcome probability %.17g deviates from 1", total)
        log.debug(
            "exact run: %d branches, %d outcomes, %.1f ms", len(branches), len(outcomes), stats.wall_time_ms
        )
        return RunResult(outcomes, total, stats)

    def run_shots(self, circuit: Circuit, shots: int, seed: int = 0) -> Dict[Tuple[str, str], int]:
        """Sample `shots` measurement paths; shot i draws from its own stream seeded by (seed, i)."""
        if shots < 1:
            raise ValueError(f"Shot count must be at least 1, got {shots}")
        root = _ShotNode(self._initial_branch(circuit), 0)
        counts: Dict[Tuple[str, str], int] = {}
        for shot in range(shots):
            rng = np.random.default_rng([seed, shot])
            node = root
            while True:
                node.expand(self, circuit)
                if node.children is None:
                    key = (node.branch.clbit_string, node.sample_readout(rng.random()))
                    break
                node = node.choose(rng.random())
            counts[key] = counts.get(key, 0) + 1
        return dict(sorted(counts.items()))


class _ShotNode:
    """A measurement history shared by every shot that followed it."""

    def __init__(self, branch: Branch, pc: int):
        self.branch = branch
        self.pc = pc
        self.expanded = False
        self.children: Optional[List[Tuple[float, "_ShotNode"]]] = None
        self.readout: List[Tuple[float, str]] = []

    def expand(self, simulator: Simulator, circuit: Circuit) -> None:
        """Run until the next branching measurement (children) or the end (readout table)."""
        if self.expanded:
            return
        self.expanded = True
        branch = self.branch
        while self.pc < len(circuit):
            outcomes = simulator._step(branch, circuit.instructions[self.pc])
            self.pc += 1
            if len(outcomes) > 1:
                total = sum(o.weight for o in outcomes)
                self.children = []
                for outcome in outcomes:
                    probability = outcome.weight / total
                    outcome.weight = 1.0
                    self.children.append((probability, _ShotNode(outcome, self.pc)))
                return
            branch = outcomes[0]
            branch.weight = 1.0
        self.branch = branch
        cumulative = 0.0
        for bits, probability in sorted(simulator._readout(circuit, branch).items()):
            cumulative += probability
            self.readout.append((cumulative, bits))

    def choose(self, u: float) -> "_ShotNode":
        cumulative = 0.0
        for probability, child in self.children:
            cumulative += probability
            if u < cumulative:
                return child
        return self.children[-1][1]

    def sample_readout(self, u: float) -> str:
        thresholds = [c for c, _ in self.readout]
        index = bisect.bisect_right(thresholds, u * thresholds[-1])
        return self.readout[min(index, len(self.readout) - 1)][1]


def extract_solutions(
    result: RunResult, layout: BoardLayout, post: PostSelection
) -> Tuple[List[Tuple[Solution, float]], float]:
    """Post-selected solutions with their probabilities, and the total success probability.

    Raises:
        DecodeFailure: a post-selected board is not a permutation
    """
    solutions: Dict[Solution, float] = {}
    for outcome in result.outcomes:
        if not post.matches(outcome.clbits):
            continue
        try:
            cols = layout.decode_solution(outcome.board)
        except DecodeError as e:
            raise DecodeFailure(f"Post-selected board {outcome.board} (clbits {outcome.clbits}) is invalid: {e}")
        solutions[cols] = solutions.get(cols, 0.0) + outcome.probability
    ordered = sorted(solutions.items())
    return ordered, sum(p for _, p in ordered)
