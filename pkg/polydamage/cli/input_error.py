"""
Module provides a decorator to handle errors in command handlers.

The `input_error` decorator turns configuration, mesh and solver errors, as
well as missing keys, arguments and unreadable files, into a failed
CommandResult carrying a readable diagnostic.
"""

from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable

from polydamage.errors import ConfigError, MeshError, SolverError
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CommandResult:
    """
    Attributes:
        ok (bool): False when the command failed; main maps it to exit code 1.
        message (str): Text shown to the user.
    """

    ok: bool
    message: str


def input_error(func: Callable[..., CommandResult]) -> Callable[..., CommandResult]:
    """
    Decorator to handle errors in functions that execute commands.

    Args:
        func (Callable[..., CommandResult]): The function to decorate.

    Returns:
        Callable[..., CommandResult]: A decorated function that never raises
        for the handled error types.
    """
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> CommandResult:
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            return CommandResult(False, f"[red]{exc}")
        except MeshError as exc:
            return CommandResult(False, f"[red]mesh error: {exc}")
        except SolverError as exc:
            logger.debug("solver error in %s", func.__name__, exc_info=True)
            return CommandResult(False, f"[red]solver error: {exc}")
        except ValueError as exc:
            return CommandResult(False, f"[red]{exc}" if str(exc) else "[red]Invalid value.")
        except KeyError as exc:
            return CommandResult(False, f"[red]{exc.args[0]}" if exc.args else "[red]Not found.")
        except IndexError as exc:
            return CommandResult(False, f"[red]{exc}" if str(exc) else "[red]Give me a configuration file, please.")
        except OSError as exc:
            return CommandResult(False, f"[red]cannot access {exc.filename or 'file'}: {exc.strerror or exc}")

    return wrapper
