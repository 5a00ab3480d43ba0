"""Rich logging on stderr, with an optional plain-text log file."""

import logging
from pathlib import Path
from typing import List

from rich.console import Console
from rich.logging import RichHandler

from kakamatch.config import LoggingConfig

# stdout carries JSON reports
console = Console(stderr=True)


def setup_logging(settings: LoggingConfig) -> None:
    """
    Replace the root logger's handlers according to ``settings``.

    Unknown level names fall back to INFO. When ``file_enabled`` is set,
    records are also written to ``file_path`` with ``format``.
    """
    level = getattr(logging, settings.level.upper(), logging.INFO)
    handlers: List[logging.Handler] = [
        RichHandler(console=console, rich_tracebacks=True, show_time=False, show_path=False)
    ]
    if settings.file_enabled:
        log_file = Path(settings.file_path)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(settings.format))
        handlers.append(file_handler)
    logging.basicConfig(level=level, handlers=handlers, force=True)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
