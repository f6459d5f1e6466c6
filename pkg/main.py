"""
This module provides the entry point of polydamage, a polygonal finite-element
solver for nonlocal damage in quasi-brittle materials.

The following commands are supported:
- 'run <config>': Nonlocal damage simulation under displacement control.
- 'elastic <config>': Linear elastic solve.
- 'convergence <config>': Plate-with-hole convergence study.
- 'patch <config>': Linear patch test on a polytree-refined grid.
- 'preset [<name> [--out <dir>]]': List presets or write one.
- 'help': Display all available commands.
- 'close' or 'exit': Leave the interactive shell.

Functions:
- execute: Dispatches one command to its handler.
- main: Runs one command given on the command line, or the interactive shell
  when no command is given.

Example:
    $ polydamage preset notched-beam --out beams
    $ polydamage run beams/notched-beam.cfg
    $ polydamage            # interactive shell with completion and history
"""

import argparse
from typing import List, Optional

from prompt_toolkit import prompt
from prompt_toolkit.shortcuts import CompleteStyle

from polydamage import __version__
from polydamage.cli import handlers
from polydamage.cli.input_error import CommandResult
from polydamage.cli.parse_input import parse_input
from polydamage.utils import configure_logging, print_with_newlines


def execute(command: str, args: List[str]) -> CommandResult:
    """
    Runs one command.

    Args:
        command (str): Command word, lower case.
        args (List[str]): Arguments following the command word.

    Returns:
        CommandResult: Outcome and message of the command.
    """
    #------------------------------------------------------------------
    # Command group: Core Commands
    #------------------------------------------------------------------

    if command == "help":
        _, commands_str = handlers.show_help()
        return CommandResult(True, commands_str)

    #------------------------------------------------------------------
    # Command group: Simulation
    #------------------------------------------------------------------

    if command == "run":
        return handlers.run(args)

    elif command == "elastic":
        return handlers.elastic(args)

    #------------------------------------------------------------------
    # Command group: Studies and Presets
    #------------------------------------------------------------------

    elif command == "convergence":
        return handlers.convergence(args)

    elif command == "patch":
        return handlers.patch(args)

    elif command == "preset":
        return handlers.preset(args)

    return CommandResult(False, f"Invalid command '{command}'. Type 'help' to see the available commands.")


def shell() -> int:
    """Interactive loop; returns 0 on 'close' or 'exit'."""
    from polydamage.cli.commands_completer import completer, history

    print_with_newlines(f"[blue]polydamage {__version__}")
    print_with_newlines("Type 'help' to see a list of available commands.", lines_before=0)

    while True:
        try:
            user_input: str = prompt(
                "Enter a command: ",
                completer=completer,
                complete_style=CompleteStyle.COLUMN,
                history=history
            )
        except (EOFError, KeyboardInterrupt):
            return 0

        if not user_input.strip():
            continue

        try:
            command, *args = parse_input(user_input)
        except ValueError as exc:
            print_with_newlines(f"[red]{exc}")
            continue

        if command in ["close", "exit"]:
            print_with_newlines("Good bye!")
            return 0

        result = execute(command, args)
        print_with_newlines(result.message)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs polydamage.

    Args:
        argv (Optional[List[str]]): Command-line arguments without the program
            name; sys.argv is used when None.

    Returns:
        int: 0 on success, 1 when the command failed, 2 on a usage error.
    """
    parser = argparse.ArgumentParser(
        prog="polydamage",
        description="Polygonal finite elements with nonlocal damage.",
        epilog="Without a command an interactive shell starts.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log Newton iterations (DEBUG level)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", nargs="?", help="run, elastic, convergence, patch, preset or help")
    parser.add_argument("args", nargs=argparse.REMAINDER, help="arguments of the command")
    options = parser.parse_args(argv)

    configure_logging(options.verbose)

    if options.command is None:
        return shell()

    result = execute(options.command.lower(), options.args)
    print_with_newlines(result.message, lines_before=0)
    if result.ok:
        return 0
    return 2 if result.message.startswith("Invalid command") else 1


if __name__ == "__main__":
    raise SystemExit(main())
