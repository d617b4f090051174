"""
Logging for volclust.

Every module logs through ``get_logger(__name__)`` below the "volclust"
logger. The console handler writes to stderr; ``--log-file`` adds a
JSON-lines file. Records may carry run context (``run_id``, ``symbol``,
``experiment``) through ``extra=``.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

ROOT_LOGGER_NAME = "volclust"
CONTEXT_FIELDS = ("run_id", "symbol", "experiment")


def _context(record: logging.LogRecord) -> dict:
    return {key: getattr(record, key) for key in CONTEXT_FIELDS if hasattr(record, key)}


class StructuredFormatter(logging.Formatter):
    """One JSON object per record: level, logger, message and run context."""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            **_context(record),
        }
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str, ensure_ascii=False)


class ColoredConsoleFormatter(logging.Formatter):
    """``HH:MM:SS LEVEL [symbol/experiment] message`` with a colored level."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelname, "")
        clock = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")
        context = _context(record)
        cell = "/".join(str(context[k]) for k in ("symbol", "experiment") if k in context)
        where = f" [{cell}]" if cell else ""

        line = f"{clock} {color}{record.levelname:<7}{self.RESET}{where} {record.getMessage()}"
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


class VolClustLogger:
    """
    Process-wide owner of the "volclust" logger: one console handler, plus
    the file handlers added for individual runs.
    """

    _instance: Optional["VolClustLogger"] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True

        self.root_logger = logging.getLogger(ROOT_LOGGER_NAME)
        self.root_logger.setLevel(logging.DEBUG)
        self.root_logger.propagate = False
        self.root_logger.handlers.clear()

        self._console_handler = logging.StreamHandler(sys.stderr)
        self._console_handler.setLevel(logging.WARNING)
        self._console_handler.setFormatter(ColoredConsoleFormatter())
        self.root_logger.addHandler(self._console_handler)

    def add_file_handler(
        self,
        log_path: Path,
        level: int = logging.DEBUG,
        structured: bool = True
    ) -> logging.Handler:
        """
        Log to a file as well.

        Args:
            log_path: Target file (parent directories are created)
            level: Minimum level written to the file
            structured: JSON lines if True, plain text otherwise

        Returns:
            The handler, to be passed to remove_handler at the end of the run
        """
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(log_path, encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(
            StructuredFormatter() if structured
            else logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
        self.root_logger.addHandler(handler)
        return handler

    def remove_handler(self, handler: logging.Handler):
        self.root_logger.removeHandler(handler)
        handler.close()

    def set_console_level(self, level: int):
        self._console_handler.setLevel(level)

    def get_logger(self, name: str) -> logging.Logger:
        if name == ROOT_LOGGER_NAME or name.startswith(f"{ROOT_LOGGER_NAME}."):
            return logging.getLogger(name)
        return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


_logger_instance: Optional[VolClustLogger] = None


def init_logging(
    level: int = logging.INFO,
    log_file: Optional[Path] = None,
    structured_file: bool = True
) -> VolClustLogger:
    """
    Set the console level and optionally attach a log file.

    Args:
        level: Console log level
        log_file: Optional log file
        structured_file: JSON lines for the file if True

    Returns:
        The VolClustLogger singleton
    """
    global _logger_instance
    _logger_instance = VolClustLogger()
    _logger_instance.set_console_level(level)
    if log_file:
        _logger_instance.add_file_handler(Path(log_file), structured=structured_file)
    return _logger_instance


def get_logger(name: str) -> logging.Logger:
    """Logger below "volclust" for a module (typically ``__name__``)."""
    global _logger_instance
    if _logger_instance is None:
        _logger_instance = VolClustLogger()
    return _logger_instance.get_logger(name)
