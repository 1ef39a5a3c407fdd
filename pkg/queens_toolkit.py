"""Main entry point for the Queens Toolkit.

Run one command from the command line, e.g.

    python queens_toolkit.py solve --n 4 --algorithm backtracking

or start without arguments for an interactive prompt.
"""

import logging
import sys
from typing import List, Optional

from lib.command_handler import EXIT_USAGE, CommandHandler
from lib.config_loader import ConfigLoader
from lib.errors import ConfigError
from lib.queens_commands import create_queens_command_handler


def _split_global_flags(argv: List[str]):
    """Pull --verbose and --config <path> out of argv."""
    verbose = False
    config_path = None
    rest = []
    i = 0
    while i < len(argv):
        if argv[i] == "--verbose":
            verbose = True
        elif argv[i] == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
            i += 1
        elif argv[i].startswith("--config="):
            config_path = argv[i].split("=", 1)[1]
        else:
            rest.append(argv[i])
        i += 1
    return verbose, config_path, rest


def interactive(command_handler: CommandHandler) -> int:
    """Read commands until quit or end of input; returns the last exit code."""
    print("Welcome to the Queens Toolkit!")
    print("Type 'help' for available commands or 'quit' to exit.")
    print("Try commands like: solve --n 4, circuit --n 2 --stats, verify --n-max 3")

    exit_code = 0
    while True:
        try:
            user_input = input("queens> ").strip()
        except (KeyboardInterrupt, EOFError):
            print("\nExiting...")
            return exit_code

        result = command_handler.process_input(user_input)
        if result.get("message"):
            print(result["message"])
        exit_code = result.get("exit_code", 0)
        if result.get("exit", False):
            return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Run the Queens Toolkit and return the process exit code."""
    argv = sys.argv[1:] if argv is None else argv
    verbose, config_path, rest = _split_global_flags(argv)

    try:
        config = ConfigLoader(config_path).load()
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, config.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    command_handler = create_queens_command_handler(config)
    if not rest:
        return interactive(command_handler)

    result = command_handler.execute_command(CommandHandler.command_from_tokens(rest))
    if result.get("message"):
        print(result["message"])
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
