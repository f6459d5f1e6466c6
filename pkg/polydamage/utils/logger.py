"""
This module provides logging helpers built on `rich.logging.RichHandler`.

Functions:
- get_logger(name): Returns a logger below the `polydamage` root logger.
- configure_logging(verbose): Installs one RichHandler on the root logger.

Usage:
    logger = get_logger(__name__)
    logger.info("assembled %d elements", n)

The environment variable POLYDAMAGE_LOG_LEVEL (DEBUG, INFO, WARNING, ...)
overrides the level chosen by `configure_logging`.
"""

import logging
import os

from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "polydamage"
LEVEL_ENV = "POLYDAMAGE_LOG_LEVEL"


def get_logger(name: str) -> logging.Logger:
    """
    Returns a logger inside the `polydamage` hierarchy.

    Args:
        name (str): Usually `__name__` of the calling module.

    Returns:
        logging.Logger: The named logger.
    """
    if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + "."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def configure_logging(verbose: bool = False) -> logging.Logger:
    """
    Installs a single RichHandler on the `polydamage` logger.

    Calling it again only updates the level.

    Args:
        verbose (bool): DEBUG when True, INFO otherwise.

    Returns:
        logging.Logger: The configured root logger of the package.
    """
    root = logging.getLogger(ROOT_LOGGER)
    level_name = os.environ.get(LEVEL_ENV, "DEBUG" if verbose else "INFO").upper()
    root.setLevel(getattr(logging, level_name, logging.INFO))

    if not any(isinstance(handler, RichHandler) for handler in root.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=False,
            markup=False,
        )
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
        root.addHandler(handler)
        root.propagate = False

    return root
