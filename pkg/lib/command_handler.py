"""Command handler for parsing and executing toolkit commands."""

import logging
import shlex
from typing import Any, Callable, Dict, List, Mapping, Optional

from lib.errors import ConfigError, ResourceLimit, UsageError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

# A switch takes no value; every other flag is converted with its callable.
SWITCH = None
FlagSpec = Mapping[str, Optional[Callable[[str], Any]]]


class Command:
    """Represents a parsed command with arguments."""

    def __init__(self, name: str, args: List[str], raw_input: str):
        self.name = name
        self.args = args
        self.raw_input = raw_input

    def __repr__(self):
        return f"Command(name='{self.name}', args={self.args})"


def parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"expected true or false, got '{value}'")


def parse_flags(args: List[str], spec: FlagSpec) -> Dict[str, Any]:
    """Parse '--name value', '--name=value' and bare switches into a dict.

    Keys are flag names with dashes turned into underscores.

    Raises:
        UsageError: unknown flag, missing or unconvertible value, or a positional argument
    """
    values: Dict[str, Any] = {}
    i = 0
    while i < len(args):
        token = args[i]
        if not token.startswith("--"):
            raise UsageError(f"Unexpected argument '{token}'")
        name, has_value, inline = token[2:].partition("=")
        if name not in spec:
            raise UsageError(f"Unknown flag '--{name}'")
        converter = spec[name]
        key = name.replace("-", "_")
        if converter is SWITCH:
            if has_value:
                raise UsageError(f"Flag '--{name}' takes no value")
            values[key] = True
            i += 1
            continue
        if has_value:
            raw = inline
            i += 1
        elif i + 1 < len(args):
            raw = args[i + 1]
            i += 2
        else:
            raise UsageError(f"Flag '--{name}' needs a value")
        try:
            values[key] = converter(raw)
        except ValueError as e:
            raise UsageError(f"Bad value for '--{name}': {e}")
    return values


def result(message: str, exit_code: int = EXIT_OK, **extra: Any) -> Dict[str, Any]:
    """Command result dictionary; success mirrors exit_code == 0."""
    outcome = {"success": exit_code == EXIT_OK, "message": message, "exit": False, "exit_code": exit_code}
    outcome.update(extra)
    return outcome


class CommandHandler:
    """Handles command parsing and execution."""

    def __init__(self):
        self._commands: Dict[str, Callable] = {}
        self._descriptions: Dict[str, str] = {}

        self._register_builtin_commands()

    def _register_builtin_commands(self):
        """Register built-in commands."""
        self.register_command("help", self._help_command, "List available commands")
        self.register_command("quit", self._quit_command, "Leave interactive mode")
        self.register_command("exit", self._quit_command, "Leave interactive mode")

    def register_command(self, name: str, handler: Callable, description: str = "") -> None:
        """Register a command handler.

        Args:
            name: Command name
            handler: Function taking a Command and returning a result dictionary
            description: One-line summary shown by help
        """
        self._commands[name.lower()] = handler
        self._descriptions[name.lower()] = description

    def parse_command(self, user_input: str) -> Optional[Command]:
        """Parse user input into a Command object.

        Args:
            user_input: Raw user input string

        Returns:
            Command object or None if input is empty/invalid
        """
        if not user_input.strip():
            return None

        try:
            tokens = shlex.split(user_input.strip())
        except ValueError:
            # unclosed quotes
            tokens = user_input.strip().split()

        if not tokens:
            return None

        return self.command_from_tokens(tokens, user_input.strip())

    @staticmethod
    def command_from_tokens(tokens: List[str], raw_input: Optional[str] = None) -> Command:
        """Build a Command from already split tokens, e.g. sys.argv[1:]."""
        raw = raw_input if raw_input is not None else " ".join(shlex.quote(t) for t in tokens)
        return Command(tokens[0].lower(), list(tokens[1:]), raw)

    def execute_command(self, command: Command) -> Dict[str, Any]:
        """Execute a parsed command.

        Args:
            command: Command object to execute

        Returns:
            Dictionary with execution results including:
            - success: bool indicating if command succeeded
            - message: str with result message
            - exit: bool indicating if interactive mode should end
            - exit_code: 0 ok, 1 failed check, 2 usage error, 3 resource limit
        """
        if command.name not in self._commands:
            return result(
                f"Unknown command: {command.name}. Type 'help' for available commands.", EXIT_USAGE
            )

        try:
            handler = self._commands[command.name]
            return handler(command)
        except (UsageError, ConfigError) as e:
            return result(f"Usage error in '{command.name}': {e}", EXIT_USAGE)
        except ResourceLimit as e:
            return result(f"Resource limit in '{command.name}': {e}", EXIT_RESOURCE)
        except Exception as e:
            log.debug("Command '%s' failed", command.name, exc_info=True)
            return result(f"Error executing command '{command.name}': {str(e)}", EXIT_FAILED)

    def process_input(self, user_input: str) -> Dict[str, Any]:
        """Process raw user input - parse and execute command.

        Args:
            user_input: Raw user input string

        Returns:
            Dictionary with execution results
        """
        command = self.parse_command(user_input)

        if command is None:
            return result("")

        return self.execute_command(command)

    def get_available_commands(self) -> List[str]:
        """Get list of available command names."""
        return sorted(self._commands.keys())

    def _help_command(self, command: Command) -> Dict[str, Any]:
        """Built-in help command handler."""
        lines = ["Available commands:"]
        for name in self.get_available_commands():
            description = self._descriptions.get(name)
            lines.append(f"  {name:<8} {description}" if description else f"  {name}")
        return result("\n".join(lines))

    def _quit_command(self, command: Command) -> Dict[str, Any]:
        """Built-in quit/exit command handler."""
        return result("Goodbye!", exit=True)
