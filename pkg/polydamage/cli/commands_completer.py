"""
This module provides the command-line auto-completer of the interactive shell.

Classes:
- CommandCompleter: Completes the command word and, after `preset`, the preset names.

Usage:
- `completer` and `history` are passed to prompt_toolkit's `prompt` by main.
"""

from prompt_toolkit.completion import Completer, Completion
from prompt_toolkit.history import FileHistory

from polydamage.bench.presets import preset_benchmarks
from polydamage.cli.handlers import show_help


class CommandCompleter(Completer):
    """
    A completer for the first word (the command) and for the preset name
    following `preset`.

    Methods:
        get_completions: Yields possible completions for the text before the cursor.
    """
    def get_completions(self, document, complete_event):
        """
        Generates completions based on the text before the cursor.

        Args:
            document (Document): An object containing information about the input text.
            complete_event (CompleteEvent): An event triggered by the completion system.

        Yields:
            Completion: A possible completion suggestion.
        """
        text_before_cursor = document.text_before_cursor.lstrip()
        words = text_before_cursor.split(" ")

        if len(words) == 1:
            candidates, _ = show_help()
        elif len(words) == 2 and words[0] == "preset":
            candidates = list(preset_benchmarks())
        else:
            return

        current = words[-1]
        for candidate in candidates:
            if candidate.startswith(current):
                yield Completion(candidate, start_position=-len(current))


completer = CommandCompleter()

HISTORY_FILE = ".polydamage_history"
history = FileHistory(HISTORY_FILE)
