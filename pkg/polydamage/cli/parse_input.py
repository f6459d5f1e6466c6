"""
Module providing functions for parsing user input.

Functions:
- parse_input(user_input: str) -> tuple: Parses user input into a command and its arguments.
"""

import shlex


def parse_input(user_input: str) -> tuple:
    """
    Parses user input into a command and its arguments.

    Quoted arguments keep their spaces, so paths with spaces can be given.

    Args:
    user_input (str): The input string from the user containing the command and optional arguments.

    Returns:
    tuple: A tuple containing the command (str) and its arguments (list of str).

    Raises:
    ValueError: If the quoting is unbalanced.

    Example:
    >>> parse_input("Run 'my beam.cfg'")
    ('run', 'my beam.cfg')
    """
    cmd, *args = shlex.split(user_input)
    cmd = cmd.strip().lower()
    return cmd, *args
