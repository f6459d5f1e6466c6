"""
This package provides the command layer of polydamage.

Modules:
- `handlers`: One function per command (`run`, `elastic`, `convergence`, `patch`, `preset`).
- `parse_config`: Strict configuration parser producing a RunConfig.
- `data_manager`: Curve CSV, VTK snapshots, convergence report and table dumps.
- `input_error`: CommandResult and the error-handling decorator.
- `parse_input`: Splits a shell line into command and arguments.
- `commands_completer`: Completion and history of the interactive shell.
"""

from .input_error import CommandResult, input_error
from .parse_input import parse_input
from .parse_config import parse_config, read_entries
from .data_manager import dump_table, emit_curve, emit_report, emit_snapshots, emit_vtk, read_curve, read_table
from .handlers import convergence, elastic, patch, preset, run, show_help
