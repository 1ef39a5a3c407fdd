"""Unit tests for the command handler."""

import unittest

import pytest

from lib.command_handler import (
    EXIT_FAILED,
    EXIT_RESOURCE,
    EXIT_USAGE,
    SWITCH,
    Command,
    CommandHandler,
    parse_bool,
    parse_flags,
    result,
)
from lib.errors import ConfigError, ResourceLimit, UsageError


class TestCommand(unittest.TestCase):
    """Test cases for the Command class."""

    def test_command_creation(self):
        cmd = Command("solve", ["--n", "4"], "solve --n 4")

        self.assertEqual(cmd.name, "solve")
        self.assertEqual(cmd.args, ["--n", "4"])
        self.assertEqual(cmd.raw_input, "solve --n 4")

    def test_command_repr(self):
        cmd = Command("solve", ["--n"], "solve --n")
        self.assertEqual(repr(cmd), "Command(name='solve', args=['--n'])")

    def test_from_tokens(self):
        cmd = CommandHandler.command_from_tokens(["Circuit", "--n", "4", "--stats"])
        self.assertEqual(cmd.name, "circuit")
        self.assertEqual(cmd.args, ["--n", "4", "--stats"])
        self.assertEqual(cmd.raw_input, "Circuit --n 4 --stats")


class TestParseFlags:
    """Test cases for flag parsing."""

    SPEC = {"n": int, "algorithm": str, "dynamic": parse_bool, "stats": SWITCH, "max-branches": int}

    def test_space_and_equals_forms(self):
        values = parse_flags(["--n", "4", "--algorithm=direct", "--stats"], self.SPEC)
        assert values == {"n": 4, "algorithm": "direct", "stats": True}

    def test_dashes_become_underscores(self):
        assert parse_flags(["--max-branches", "64"], self.SPEC) == {"max_branches": 64}

    def test_bool_values(self):
        assert parse_flags(["--dynamic", "false"], self.SPEC) == {"dynamic": False}
        assert parse_flags(["--dynamic=YES"], self.SPEC) == {"dynamic": True}
        with pytest.raises(UsageError, match="Bad value for '--dynamic'"):
            parse_flags(["--dynamic", "perhaps"], self.SPEC)

    def test_unknown_flag(self):
        with pytest.raises(UsageError, match="Unknown flag '--colour'"):
            parse_flags(["--colour", "red"], self.SPEC)

    def test_missing_value(self):
        with pytest.raises(UsageError, match="needs a value"):
            parse_flags(["--n"], self.SPEC)

    def test_bad_number(self):
        with pytest.raises(UsageError, match="Bad value for '--n'"):
            parse_flags(["--n", "four"], self.SPEC)

    def test_switch_with_value(self):
        with pytest.raises(UsageError, match="takes no value"):
            parse_flags(["--stats=yes"], self.SPEC)

    def test_positional_argument(self):
        with pytest.raises(UsageError, match="Unexpected argument '4'"):
            parse_flags(["4"], self.SPEC)

    def test_result_success_follows_exit_code(self):
        assert result("ok")["success"]
        failed = result("bad", EXIT_FAILED, failures=["x"])
        assert not failed["success"]
        assert failed["failures"] == ["x"]


class TestCommandHandler(unittest.TestCase):
    """Test cases for the CommandHandler class."""

    def setUp(self):
        self.handler = CommandHandler()

    def test_initialization(self):
        self.assertEqual(self.handler.get_available_commands(), ["exit", "help", "quit"])

    def test_register_command(self):
        self.handler.register_command("bench", lambda command: result("done"), "Time the builders")
        self.assertIn("bench", self.handler.get_available_commands())

    def test_parse_command_with_quotes(self):
        cmd = self.handler.parse_command('solve --json "out dir/r.json"')
        self.assertEqual(cmd.args, ["--json", "out dir/r.json"])

    def test_parse_command_empty_input(self):
        self.assertIsNone(self.handler.parse_command(""))
        self.assertIsNone(self.handler.parse_command("   "))

    def test_parse_command_unclosed_quotes(self):
        cmd = self.handler.parse_command('solve "unclosed quote')
        # falls back to a plain split
        self.assertEqual(cmd.args, ['"unclosed', "quote"])

    def test_parse_command_case_insensitive(self):
        self.assertEqual(self.handler.parse_command("HELP").name, "help")

    def test_help_lists_descriptions(self):
        self.handler.register_command("bench", lambda command: result("done"), "Time the builders")
        message = self.handler.process_input("help")["message"]
        self.assertTrue(message.startswith("Available commands:"))
        self.assertIn("bench", message)
        self.assertIn("Time the builders", message)

    def test_quit_and_exit(self):
        for name in ("quit", "exit"):
            outcome = self.handler.process_input(name)
            self.assertTrue(outcome["success"])
            self.assertEqual(outcome["message"], "Goodbye!")
            self.assertTrue(outcome["exit"])

    def test_unknown_command_is_usage_error(self):
        outcome = self.handler.process_input("unknown")
        self.assertFalse(outcome["success"])
        self.assertEqual(outcome["exit_code"], EXIT_USAGE)
        self.assertIn("Unknown command: unknown", outcome["message"])

    def test_exception_mapping(self):
        def raiser(error):
            def handler(command):
                raise error

            return handler

        cases = [
            (UsageError("n must be at least 1"), EXIT_USAGE, "Usage error in 'cmd'"),
            (ConfigError("bad key"), EXIT_USAGE, "Usage error in 'cmd'"),
            (ResourceLimit(5, 4), EXIT_RESOURCE, "Resource limit in 'cmd'"),
            (RuntimeError("boom"), EXIT_FAILED, "Error executing command 'cmd': boom"),
        ]
        for error, code, text in cases:
            self.handler.register_command("cmd", raiser(error))
            outcome = self.handler.process_input("cmd")
            self.assertEqual(outcome["exit_code"], code)
            self.assertIn(text, outcome["message"])
            self.assertFalse(outcome["exit"])

    def test_process_input_empty(self):
        outcome = self.handler.process_input("   ")
        self.assertTrue(outcome["success"])
        self.assertEqual(outcome["message"], "")
        self.assertFalse(outcome["exit"])

    def test_whitespace_handling(self):
        self.handler.register_command("echo", lambda cmd: result(f"args: {cmd.args}"))
        outcome = self.handler.process_input("  echo   a1    a2  ")
        self.assertIn("['a1', 'a2']", outcome["message"])


if __name__ == "__main__":
    unittest.main()
