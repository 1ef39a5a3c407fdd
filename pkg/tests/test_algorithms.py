"""Tests for the three circuit builders."""

import itertools
import unittest

import numpy as np
import pytest

from lib.algorithms import (
    BACKTRACKING,
    DIRECT,
    GATE_CX,
    PIPELINE,
    PipelineOptions,
    PostSelection,
    ancilla_plan,
    build,
    build_column_stage,
    build_diagonal_stage,
    build_direct_column,
    build_jha_pipeline,
    build_quantum_backtracking,
)
from lib.board import BoardLayout
from lib.circuit import MCX, gate_counts, mcx, x
from lib.simulator import SparseState, apply_gate


class TestAncillaPlan(unittest.TestCase):
    """Test cases for ancilla planning."""

    def test_pipeline_four(self):
        plan = ancilla_plan(BoardLayout(4), PIPELINE)
        self.assertEqual(plan.column_ancillas, (16, 17, 18))
        self.assertEqual(plan.diagonal_ancillas, tuple(range(19, 25)))
        self.assertEqual(plan.column_clbits, (0, 1, 2))
        self.assertEqual(plan.diagonal_clbits, tuple(range(3, 9)))
        self.assertEqual((plan.num_qubits, plan.num_clbits), (25, 9))
        self.assertEqual(plan.diagonal_ancilla(1, 2), 19)
        self.assertEqual(plan.diagonal_ancilla(3, 4), 24)

    def test_sizes(self):
        for n in range(2, 8):
            plan = ancilla_plan(BoardLayout(n), PIPELINE)
            self.assertEqual(len(plan.column_ancillas), n - 1)
            self.assertEqual(len(plan.diagonal_ancillas), n * (n - 1) // 2)
            self.assertTrue(min(plan.column_ancillas + plan.diagonal_ancillas) >= n * n)

    def test_direct_and_backtracking(self):
        direct = ancilla_plan(BoardLayout(4), DIRECT)
        self.assertEqual(direct.column_ancillas, ())
        self.assertEqual(direct.diagonal_ancillas, tuple(range(16, 22)))
        self.assertEqual(direct.num_clbits, 6)

        backtracking = ancilla_plan(BoardLayout(4), BACKTRACKING)
        self.assertEqual(backtracking.backtracking_ancilla, 16)
        self.assertEqual((backtracking.num_qubits, backtracking.num_clbits), (17, 1))

    def test_single_cell_board_needs_nothing(self):
        for algorithm in (PIPELINE, DIRECT, BACKTRACKING):
            plan = ancilla_plan(BoardLayout(1), algorithm)
            self.assertEqual((plan.num_qubits, plan.num_clbits), (1, 0))

    def test_unknown_algorithm(self):
        with self.assertRaises(ValueError):
            ancilla_plan(BoardLayout(4), "grover")


class TestStages:
    """Test cases for the individual stage generators."""

    def test_diagonal_stage_gate_counts(self):
        layout = BoardLayout(4)
        plan = ancilla_plan(layout, PIPELINE)
        gates = build_diagonal_stage(layout, plan)
        assert sum(1 for g in gates if g.kind == "X") == 6
        assert sum(1 for g in gates if g.kind == MCX) == 2 * (3 * 3 + 2 * 2 + 1 * 1)

    def test_diagonal_stage_first_pair(self):
        layout = BoardLayout(4)
        plan = ancilla_plan(layout, PIPELINE)
        gates = build_diagonal_stage(layout, plan)
        assert gates[6] == mcx([0, 5], 19)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_column_parity_soundness(self, n):
        """Every column ancilla reads 1 exactly when the row-valid state is a permutation."""
        layout = BoardLayout(n)
        plan = ancilla_plan(layout, PIPELINE)
        gates = build_column_stage(layout, plan, GATE_CX)
        for cols in itertools.product(range(1, n + 1), repeat=n):
            self._check_parity(layout, plan, gates, cols)

    def test_column_parity_soundness_sampled(self):
        n = 6
        layout = BoardLayout(n)
        plan = ancilla_plan(layout, PIPELINE)
        gates = build_column_stage(layout, plan, GATE_CX)
        rng = np.random.default_rng(0)
        for cols in rng.integers(1, n + 1, size=(5000, n)):
            self._check_parity(layout, plan, gates, [int(c) for c in cols])

    @staticmethod
    def _check_parity(layout, plan, gates, cols):
        bits = layout.encode_solution(cols)
        index = sum(1 << q for q, b in enumerate(bits) if b == "1")
        state = SparseState(plan.num_qubits, {index: 1 + 0j})
        for gate in gates:
            apply_gate(state, gate)
        (key,) = state.amplitudes
        all_ones = all((key >> a) & 1 for a in plan.column_ancillas)
        assert all_ones == (len(set(cols)) == layout.n), cols


class TestPipeline(unittest.TestCase):
    """Test cases for the row/column/diagonal pipeline."""

    def test_shape(self):
        circuit, post = build_jha_pipeline(BoardLayout(4))
        self.assertEqual((circuit.num_qubits, circuit.num_clbits), (25, 9))
        self.assertEqual(
            list(circuit.stages), ["row", "column", "column_measure", "diagonal", "diagonal_measure"]
        )
        self.assertEqual(post.requirements, tuple((c, 1) for c in range(9)))

    def test_dynamic_gates_diagonal_stage(self):
        circuit, _ = build_jha_pipeline(BoardLayout(4))
        start, stop = circuit.stages["diagonal"]
        column_ok = ((0, 1), (1, 1), (2, 1))
        self.assertTrue(all(i.condition == column_ok for i in circuit.instructions[start:stop]))
        self.assertEqual(circuit.readout.condition, column_ok)

    def test_deferred_measurement(self):
        circuit, _ = build_jha_pipeline(BoardLayout(4), PipelineOptions(dynamic=False))
        self.assertTrue(all(not i.condition for i in circuit.instructions))
        self.assertEqual(list(circuit.stages)[2:], ["diagonal", "column_measure", "diagonal_measure"])
        self.assertEqual(circuit.readout.condition, ())

    def test_cz_mode_adds_hadamards(self):
        for n in range(2, 6):
            layout = BoardLayout(n)
            cx_counts = gate_counts(build_jha_pipeline(layout, PipelineOptions(column_gate_mode="cx"))[0])
            cz_counts = gate_counts(build_jha_pipeline(layout, PipelineOptions(column_gate_mode="cz"))[0])
            self.assertEqual(cz_counts.get("H", 0) - cx_counts.get("H", 0), 2 * (n - 1))
            self.assertEqual(cz_counts["CZ"], n * (n - 1))
            self.assertEqual(cx_counts["CX"] - cz_counts["CX"], n * (n - 1))

    def test_single_cell_board(self):
        for algorithm in (PIPELINE, DIRECT, BACKTRACKING):
            circuit, post = build(BoardLayout(1), algorithm)
            self.assertEqual(circuit.instructions, [x(0)])
            self.assertEqual(post, PostSelection())

    def test_bad_options(self):
        with self.assertRaises(ValueError):
            PipelineOptions(column_gate_mode="swap")
        with self.assertRaises(ValueError):
            PipelineOptions(wstate_strategy="star")
        with self.assertRaises(ValueError):
            build(BoardLayout(4), "grover")


class TestBranchBuilders:
    """Test cases for the direct and backtracking builders."""

    def test_direct_final_row_gate(self):
        circuit, post = build_direct_column(BoardLayout(4))
        # prefix (1, 2, 3) leaves column 4 for the last row
        assert mcx([0, 5, 10], 15) in circuit.instructions
        assert post.requirements == tuple((c, 1) for c in range(6))

    def test_direct_dynamic_readout(self):
        circuit, _ = build_direct_column(BoardLayout(3), dynamic=True)
        assert circuit.readout.condition == ((0, 1), (1, 1), (2, 1))
        circuit, _ = build_direct_column(BoardLayout(3))
        assert circuit.readout.condition == ()

    def test_backtracking_shape(self):
        circuit, post = build_quantum_backtracking(BoardLayout(4))
        assert (circuit.num_qubits, circuit.num_clbits) == (17, 1)
        assert list(circuit.stages) == ["backtracking", "solution_flag", "solution_measure"]
        start, stop = circuit.stages["solution_flag"]
        assert stop - start == 4
        assert post.requirements == ((0, 1),)

    def test_backtracking_skips_dead_rows(self):
        """A prefix with no open column adds no gates for the rows below it."""
        circuit, _ = build_quantum_backtracking(BoardLayout(4))
        start, stop = circuit.stages["backtracking"]
        # prefix (1, 3) is dead: nothing controlled on q0 and q6 reaches rows 3 and 4
        on_dead_prefix = [i for i in circuit.instructions[start:stop] if {0, 6} <= set(i.controls)]
        assert on_dead_prefix
        assert all(i.targets[0] < 8 for i in on_dead_prefix)

    def test_post_selection_matches(self):
        post = PostSelection(((0, 1), (2, 1)))
        assert post.matches("101")
        assert not post.matches("100")
        assert PostSelection().matches("")
