"""
This module provides console output helpers shared by the CLI.

Function:
- print_with_newlines: Prints content with empty lines before and after it.
- render_table: Builds a rich Table in the house style and returns it as text.

Example:
    >>> print_with_newlines("Step 12 committed", lines_before=0)
    >>> text = render_table("Steps", ["step", "F"], [["1", "0.5"]])
"""

from io import StringIO
from typing import Iterable, Sequence

from rich.console import Console
from rich.table import Table

console = Console()


def print_with_newlines(
    content: str,
    lines_before: int = 1,
    lines_after: int = 1,
    use_rich_print: bool = True
) -> None:
    """
    Prints content with a specified number of empty lines before and after the content.

    Parameters:
    - content (str): The content to be printed.
    - lines_before (int): Number of empty lines to print before the content. Default is 1.
    - lines_after (int): Number of empty lines to print after the content. Default is 1.
    - use_rich_print (bool): Interpret rich markup when True; print verbatim otherwise.

    Returns:
    None
    """
    output = "\n" * lines_before + content + "\n" * lines_after
    if use_rich_print:
        console.print(output)
    else:
        console.print(output, markup=False, highlight=False)


def render_table(title: str, columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    """
    Renders rows as a bordered rich table and returns the captured text.

    Args:
        title (str): Table title.
        columns (Sequence[str]): Column headers.
        rows (Iterable[Sequence[str]]): Cell texts, one sequence per row.

    Returns:
        str: The rendered table.
    """
    table = Table(
        title=title,
        title_style="bold orange1",
        border_style="gray50",
        padding=(0, 2),
        show_header=True,
        show_lines=False,
        header_style="bold cyan"
    )
    for column in columns:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*row)

    capture = Console(file=StringIO(), width=120)
    capture.print(table)
    return capture.file.getvalue()
