"""
This package provides console and logging utilities.
"""

from .console import console, print_with_newlines, render_table
from .logger import configure_logging, get_logger
