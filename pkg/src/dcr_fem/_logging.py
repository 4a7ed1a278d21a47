#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import copy
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import TextIO

from dcr_fem._env import Env

# Route warnings.warn calls (e.g. from numpy or scipy) through logging. Must run
# before any warning is emitted.
logging.captureWarnings(capture=True)

dcr_fem_logger = logging.getLogger("dcr_fem")

DCR_FEM_LOG_LEVEL_ENV_VAR = Env.DCR_FEM_LOG_LEVEL.name


class ConsoleFormatter(logging.Formatter):
    """Formatter for console output.

    Messages are printed without timestamps. Warnings are yellow, errors red and
    debug messages carry a ``[debug]`` prefix. Every message ends with the ANSI reset
    code so colors never leak into the next line.
    """

    reset = "\x1b[0m"
    log_entry_structure = "%(message)s"

    FORMATS = {
        logging.DEBUG: "\033[1;34m[debug] " + log_entry_structure + reset,
        logging.INFO: log_entry_structure + reset,
        logging.WARNING: "\033[93m" + log_entry_structure + reset,
        logging.ERROR: "\033[91m" + log_entry_structure + reset,
        logging.CRITICAL: "\033[91m" + log_entry_structure + reset,
    }

    def __init__(self) -> None:
        super().__init__(fmt=self.log_entry_structure)
        self.formatters = {
            level: logging.Formatter(level_format)
            for level, level_format in ConsoleFormatter.FORMATS.items()
        }

    def format(self, record: logging.LogRecord) -> str:
        formatter = self.formatters.get(record.levelno)
        if formatter is None:
            return super().format(copy.copy(record))
        return formatter.format(copy.copy(record))


def set_up_console_logging() -> None:
    """Installs a single console handler on the package loggers."""
    level = _parse_level(Env.DCR_FEM_LOG_LEVEL.value)
    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(ConsoleFormatter())
    dcr_fem_logger.setLevel(logging.DEBUG)
    _set_console_handler(handler)


def _parse_level(level: str) -> int:
    # Accepts both numeric levels ("10") and names ("DEBUG").
    if level.isdigit():
        return int(level)
    value = logging.getLevelName(level.upper())
    return value if isinstance(value, int) else logging.INFO


def _set_console_handler(handler: "logging.StreamHandler[TextIO]") -> None:
    """Makes the handler the only one printing to the console.

    Existing stream handlers of the package loggers are removed.
    """
    for console_logger in _package_loggers():
        _remove_handlers(console_logger, logging.StreamHandler)
        console_logger.addHandler(handler)


def _package_loggers() -> list[logging.Logger]:
    return [dcr_fem_logger, logging.getLogger("py.warnings")]


def _remove_handlers(
    logger: logging.Logger,
    handler_cls_to_remove: type[logging.Handler] = logging.Handler,
) -> None:
    """Removes all handlers of the given class from the logger.

    NullHandlers are always kept, they stop the last resort handler from printing
    to stderr.
    """
    logger.handlers = [
        handler
        for handler in logger.handlers
        if isinstance(handler, logging.NullHandler)
        or not isinstance(handler, handler_cls_to_remove)
    ]


class FileFormatter(logging.Formatter):
    """Formatter for log files.

    Each line carries a timestamp and the log level. Records with exception info
    get the traceback appended.
    """

    def __init__(self) -> None:
        super().__init__("[%(asctime)s][%(levelname)s] %(message)s")


class DcrFemRotatingFileHandler(RotatingFileHandler):
    pass


def set_up_file_logging(log_file_path: Path) -> None:
    """Sends all package log records to a file.

    Args:
        log_file_path:
            Path to the log file. Parent directories must exist.
    """
    file_handler = _get_file_handler(log_file_path)
    for file_logger in _package_loggers():
        _remove_handlers(file_logger, DcrFemRotatingFileHandler)
        file_logger.addHandler(file_handler)


def _get_file_handler(log_file_path: Path) -> DcrFemRotatingFileHandler:
    file_handler = DcrFemRotatingFileHandler(
        str(log_file_path),
        mode="a",
        maxBytes=64 * 1024 * 1024,
        backupCount=2,
        encoding="utf-8",
        delay=False,
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(FileFormatter())
    return file_handler
