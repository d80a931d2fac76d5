"""
Console logging shared by the command-line tools.
"""

import logging
import sys

LOGGER = logging.getLogger("leslie")


class ConsoleHandler(logging.StreamHandler):
    """
    StreamHandler writing to whatever `sys.stderr` is at emit time.
    """

    def __init__(self):
        super().__init__(sys.stderr)

    def emit(self, record):
        self.stream = sys.stderr
        super().emit(record)


def enable_logging(quiet: bool = False) -> None:
    """
    Configure the `leslie` logger to write to stderr; stdout is kept for
    reports.

    With `quiet`, only warnings and errors are shown.
    """
    if not LOGGER.handlers:
        handler = ConsoleHandler()
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(message)s", "%Y-%m-%d %H:%M:%S")
        )
        LOGGER.addHandler(handler)
    LOGGER.setLevel(logging.WARNING if quiet else logging.INFO)


def log(line: str, level: int = logging.INFO) -> None:
    """
    Log a message.
    """
    LOGGER.log(level, line)


def warn(line: str) -> None:
    """
    Log a warning.
    """
    LOGGER.warning(line)
