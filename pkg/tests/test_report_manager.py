"""Tests for report saving, loading and rendering."""

import json
import os
import shutil
import tempfile
import unittest

from lib.oracle import solve_classical
from lib.report import CircuitStats, Report, recompute_oracle_match, render_report, render_table
from lib.report_manager import ReportManager


def make_report(**overrides):
    values = dict(
        n=4,
        algorithm="backtracking",
        mode="exact",
        solutions=[((2, 4, 1, 3), 0.25), ((3, 1, 4, 2), 0.25)],
        success_probability=0.5,
        oracle_count=2,
        oracle_match=True,
        circuit=CircuitStats(17, 1, {"X": 4, "MCRY": 3}, 9, branches_explored=2, peak_support=4),
        search_space=(65536, 256, 24),
        wall_time_ms=1.5,
        options={"column_gate": "cx"},
    )
    values.update(overrides)
    return Report(**values)


class TestReportManager(unittest.TestCase):
    """Test cases for ReportManager."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.manager = ReportManager()
        self.path = os.path.join(self.temp_dir, "out", "report.json")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def _rewrite(self, mutate):
        with open(self.path) as f:
            document = json.load(f)
        mutate(document)
        with open(self.path, "w") as f:
            json.dump(document, f)

    def test_save_and_load(self):
        report = make_report()
        message = self.manager.save_report(report, self.path)
        self.assertIn("Report written to", message)
        self.assertEqual(self.manager.load_report(self.path), report)

    def test_document_layout(self):
        self.manager.save_report(make_report(), self.path)
        with open(self.path) as f:
            document = json.load(f)
        self.assertEqual(document["version"], "1.0")
        self.assertIn("timestamp", document)
        self.assertEqual(document["solutions"][0], {"cols": [2, 4, 1, 3], "probability": 0.25})
        self.assertEqual(document["search_space"]["row_valid"], 256)

    def test_empty_path(self):
        with self.assertRaises(ValueError):
            self.manager.save_report(make_report(), "  ")

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            self.manager.load_report(os.path.join(self.temp_dir, "absent.json"))

    def test_corrupted_file(self):
        os.makedirs(os.path.dirname(self.path))
        with open(self.path, "w") as f:
            f.write("{not json")
        with self.assertRaisesRegex(ValueError, "Corrupted"):
            self.manager.load_report(self.path)

    def test_missing_version(self):
        self.manager.save_report(make_report(), self.path)
        self._rewrite(lambda d: d.pop("version"))
        with self.assertRaisesRegex(ValueError, "missing version"):
            self.manager.load_report(self.path)

    def test_incompatible_version(self):
        self.manager.save_report(make_report(), self.path)
        self._rewrite(lambda d: d.update(version="2.0"))
        with self.assertRaisesRegex(ValueError, "Incompatible report version: 2.0"):
            self.manager.load_report(self.path)

    def test_missing_keys(self):
        self.manager.save_report(make_report(), self.path)
        self._rewrite(lambda d: d.pop("oracle_match"))
        with self.assertRaisesRegex(ValueError, "missing keys: oracle_match"):
            self.manager.load_report(self.path)

    def test_inconsistent_probabilities(self):
        self.manager.save_report(make_report(), self.path)
        self._rewrite(lambda d: d.update(success_probability=0.75))
        with self.assertRaisesRegex(ValueError, "Inconsistent report"):
            self.manager.load_report(self.path)

    def test_probabilities_round_trip_exactly(self):
        third = 1 / 3
        report = make_report(solutions=[((2, 4, 1, 3), third), ((3, 1, 4, 2), third)], success_probability=2 * third)
        self.manager.save_report(report, self.path)
        with open(self.path) as f:
            document = json.load(f)
        self.assertEqual(document["solutions"][0]["probability"], third)
        self.assertEqual(self.manager.load_report(self.path).solutions[1][1], third)


class TestReport:
    """Test cases for Report validation and rendering."""

    def test_validate_against_oracle(self):
        assert make_report().validate(solve_classical(4)) == (True, None)
        ok, message = make_report(oracle_match=False).validate(solve_classical(4))
        assert not ok
        assert "recomputes to True" in message

    def test_unknown_mode(self):
        ok, message = make_report(mode="sampled").validate()
        assert not ok
        assert "sampled" in message

    def test_shots_match_is_subset(self):
        oracle = solve_classical(4)
        assert recompute_oracle_match("shots", [(2, 4, 1, 3)], oracle)
        assert not recompute_oracle_match("exact", [(2, 4, 1, 3)], oracle)
        assert not recompute_oracle_match("shots", [(1, 2, 3, 4)], oracle)

    def test_render_report(self):
        text = render_report(make_report())
        assert text.splitlines()[0] == "n=4 algorithm=backtracking mode=exact"
        assert "solutions: 2 (oracle 2, match)" in text
        assert "success probability: 0.5" in text
        assert "[2, 4, 1, 3] p=0.25" in text

    def test_render_table(self):
        table = render_table(["n", "algorithm"], [[4, "direct"], [10, "pipeline"]])
        assert table.splitlines() == ["n   algorithm", "4   direct", "10  pipeline"]