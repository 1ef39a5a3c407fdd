"""Integration tests for the entry script."""

import io
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

# Add the project root to the path so we can import queens_toolkit
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import queens_toolkit  # noqa: E402


def run_main(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = queens_toolkit.main(argv)
    return code, out.getvalue(), err.getvalue()


class TestSingleCommand(unittest.TestCase):
    """Test cases for running one command from argv."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_solve(self):
        code, output, _ = run_main(["solve", "--n", "4", "--algorithm", "backtracking"])
        self.assertEqual(code, 0)
        self.assertIn("solutions: 2 (oracle 2, match)", output)
        self.assertIn("[2, 4, 1, 3]", output)

    def test_usage_error(self):
        code, output, _ = run_main(["solve", "--n", "0"])
        self.assertEqual(code, 2)
        self.assertIn("Usage error in 'solve'", output)

    def test_unknown_command(self):
        code, output, _ = run_main(["teleport"])
        self.assertEqual(code, 2)
        self.assertIn("Unknown command: teleport", output)

    def test_config_file(self):
        path = os.path.join(self.temp_dir, "config.yaml")
        with open(path, "w") as f:
            f.write("max_n: 3\n")
        code, _, _ = run_main(["--config", path, "solve", "--n", "4"])
        self.assertEqual(code, 2)
        code, _, _ = run_main([f"--config={path}", "solve", "--n", "3"])
        self.assertEqual(code, 0)

    def test_bad_config_file(self):
        path = os.path.join(self.temp_dir, "config.yaml")
        with open(path, "w") as f:
            f.write("colour: red\n")
        code, _, error = run_main(["--config", path, "help"])
        self.assertEqual(code, 2)
        self.assertIn("Configuration error", error)

    @patch.dict(os.environ, {"WQ_MAX_BRANCHES": "1"})
    def test_environment_branch_cap(self):
        code, output, _ = run_main(["solve", "--n", "4"])
        self.assertEqual(code, 3)
        self.assertIn("Resource limit", output)

    @patch.dict(os.environ, {"WQ_MAX_BRANCHES": "1"})
    def test_flag_beats_environment(self):
        code, _, _ = run_main(["solve", "--n", "4", "--max-branches", "4096"])
        self.assertEqual(code, 0)


class TestInteractiveLoop(unittest.TestCase):
    """Test cases for the interactive prompt."""

    @patch("builtins.input")
    def test_help_then_quit(self, mock_input):
        mock_input.side_effect = ["help", "quit"]
        code, output, _ = run_main([])

        self.assertEqual(code, 0)
        self.assertIn("Welcome to the Queens Toolkit!", output)
        self.assertIn("Available commands:", output)
        self.assertIn("solve", output)
        self.assertIn("Goodbye!", output)

    @patch("builtins.input")
    def test_commands_then_exit(self, mock_input):
        mock_input.side_effect = ["", "unknown", "circuit --n 2 --stats", "exit"]
        _, output, _ = run_main([])

        self.assertIn("Unknown command: unknown", output)
        self.assertIn("qubits: 6", output)
        self.assertEqual(mock_input.call_count, 4)

    @patch("builtins.input")
    def test_keyboard_interrupt(self, mock_input):
        mock_input.side_effect = KeyboardInterrupt()
        _, output, _ = run_main([])
        self.assertIn("Exiting...", output)

    @patch("builtins.input")
    def test_eof(self, mock_input):
        mock_input.side_effect = EOFError()
        code, output, _ = run_main([])
        self.assertEqual(code, 0)
        self.assertIn("Exiting...", output)


if __name__ == "__main__":
    unittest.main()
