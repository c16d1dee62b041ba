"""
Logger utility module for the stack-sorting bijection toolkit.
Provides centralized logging configuration for the library, the CLI and the API.
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from stacksort_bijection.utils.config import get_settings

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, log_file: Optional[str] = None,
                 level: Union[int, str] = logging.INFO) -> logging.Logger:
    """
    Set up a logger with console and optional file output.

    Console output goes to stderr so that json/csv/dot data written to
    stdout stays clean.

    Args:
        name: Name of the logger (typically __name__ of the calling module)
        log_file: Optional path to log file. If None, logs only to console
        level: Logging level (default: INFO)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    formatter = logging.Formatter(DEFAULT_FORMAT, datefmt='%Y-%m-%d %H:%M:%S')

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance configured from the settings.

    STACKSORT_LOG_LEVEL sets the level (default WARNING); a daily log file
    is written only when STACKSORT_LOG_DIR is set.

    Args:
        name: Name of the logger (typically __name__ of the calling module)

    Returns:
        Logger instance
    """
    settings = get_settings()
    level = settings.log_level.upper()
    log_dir = settings.log_dir

    log_file = None
    if log_dir:
        log_file = str(Path(log_dir) / f"stacksort_{datetime.now().strftime('%Y%m%d')}.log")

    return setup_logger(name, log_file, level)


def set_level(level: Union[int, str]) -> None:
    """Change the level of every logger created under this package."""
    if isinstance(level, str):
        level = level.upper()
    for name, logger in list(logging.Logger.manager.loggerDict.items()):
        if name.startswith("stacksort_bijection") and isinstance(logger, logging.Logger):
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)
