"""Logging configuration for sharp-bench."""

import logging

from rich.console import Console
from rich.logging import RichHandler


LOG_LEVELS = ("debug", "info", "warning", "error")
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _level(level: str) -> int:
    if level.lower() not in LOG_LEVELS:
        raise ValueError(f"Unknown log level '{level}', expected one of {LOG_LEVELS}")
    return int(getattr(logging, level.upper()))


def setup_logger(
    name: str = "sharp_bench",
    level: str = "INFO",
    log_file: str | None = None,
) -> logging.Logger:
    """Configure the package logger.

    Records go to stderr through rich (stdout carries report tables) and,
    when ``log_file`` is given, to that file in the plain
    ``timestamp - name - level - message`` format.

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file path for logging output

    Returns:
        Configured logger instance

    Raises:
        ValueError: If the level name is unknown
    """
    numeric = _level(level)
    logger = logging.getLogger(name)
    logger.setLevel(numeric)
    logger.propagate = False

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console_handler = RichHandler(
        console=Console(stderr=True),
        level=numeric,
        show_path=False,
        rich_tracebacks=False,
    )
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(numeric)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str = "sharp_bench") -> logging.Logger:
    return logging.getLogger(name)
