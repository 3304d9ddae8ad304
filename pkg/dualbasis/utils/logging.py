import contextlib
import contextvars
import logging
import os
import sys
import threading
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Union

PACKAGE_LOGGER = "dualbasis"


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    return default if value is None else value.strip().upper() in ("TRUE", "1", "YES")


logging.addLevelName(logging.WARNING, "WARN")
loglevel: Union[int, str] = os.getenv("DUALBASIS_LOGLEVEL", "INFO").upper()
use_colors = _env_flag("DUALBASIS_COLORS", default=sys.stderr.isatty())
always_log_caller = _env_flag("DUALBASIS_ALWAYS_LOG_CALLER", default=False)

# Key/value pairs (dimension, trial index, family...) attached to every record emitted inside log_context()
_context: contextvars.ContextVar[Dict[str, Any]] = contextvars.ContextVar("dualbasis_log_context", default={})


class HandlerMode(Enum):
    NOWHERE = 0
    IN_DUALBASIS = 1
    IN_ROOT_LOGGER = 2


# logger name that owns the handler in each mode
_MODE_OWNER: Dict[HandlerMode, Optional[str]] = {
    HandlerMode.IN_DUALBASIS: PACKAGE_LOGGER,
    HandlerMode.IN_ROOT_LOGGER: None,
}

_lock = threading.RLock()
_mode = HandlerMode.IN_DUALBASIS
_handler: Optional[logging.Handler] = None


class _DisableIfNoColors(type):
    def __getattribute__(self, name: str) -> Any:
        if name.isupper() and not use_colors:
            return ""
        return super().__getattribute__(name)


class TextStyle(metaclass=_DisableIfNoColors):
    """ANSI escape codes, blanked when colors are off"""

    RESET = "\033[0m"
    BOLD = "\033[1m"
    RED = "\033[31m"
    BLUE = "\033[34m"
    PURPLE = "\033[35m"
    ORANGE = "\033[38;5;208m"


class CustomFormatter(logging.Formatter):
    """
    ``Mon DD HH:MM:SS.mmm [LEVEL] [module.func:line] (key=value ...) message``

    The caller block is shown for everything but INFO (or always, with ``DUALBASIS_ALWAYS_LOG_CALLER``);
    the context block lists the fields of the enclosing :func:`log_context`, if any.
    """

    _LEVEL_COLORS = {
        logging.DEBUG: "PURPLE",
        logging.INFO: "BLUE",
        logging.WARNING: "ORANGE",
        logging.ERROR: "RED",
        logging.CRITICAL: "RED",
    }

    def format(self, record: logging.LogRecord) -> str:
        show_caller = always_log_caller or record.levelno != logging.INFO
        caller = getattr(record, "caller", f"{record.name}.{record.funcName}:{record.lineno}")
        record.caller_block = f" [{TextStyle.BOLD}{caller}{TextStyle.RESET}]" if show_caller else ""

        fields = _context.get()
        record.context_block = f" ({' '.join(f'{k}={v}' for k, v in fields.items())})" if fields else ""

        record.levelcolor = getattr(TextStyle, self._LEVEL_COLORS.get(record.levelno, "RED"))
        record.bold, record.reset = TextStyle.BOLD, TextStyle.RESET
        return super().format(record)


@contextlib.contextmanager
def log_context(**fields: Any) -> Iterator[None]:
    """Attach ``fields`` to every record logged in this context (nested contexts are merged)"""
    token = _context.set({**_context.get(), **fields})
    try:
        yield
    finally:
        _context.reset(token)


def _ensure_handler() -> logging.Handler:
    global _handler

    with _lock:
        if _handler is None:
            # stderr only: stdout carries command results
            _handler = logging.StreamHandler(sys.stderr)
            _handler.setFormatter(
                CustomFormatter(
                    fmt="{asctime}.{msecs:03.0f} [{bold}{levelcolor}{levelname}{reset}]{caller_block}{context_block} {message}",
                    style="{",
                    datefmt="%b %d %H:%M:%S",
                )
            )
            _attach(_MODE_OWNER[_mode])
        return _handler


def _attach(owner: Optional[str]) -> None:
    logger = logging.getLogger(owner)
    if owner is None:
        # drop basicConfig-style stderr handlers so records are not printed twice
        for handler in list(logger.handlers):
            if isinstance(handler, logging.StreamHandler) and handler.stream is sys.stderr:
                logger.removeHandler(handler)
    logger.addHandler(_handler)
    logger.propagate = False
    logger.setLevel(loglevel)


def _detach(owner: Optional[str]) -> None:
    logger = logging.getLogger(owner)
    logger.removeHandler(_handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    ``logging.getLogger(name)``, after making sure the dualbasis handler exists.

    :note: the handler starts on the ``dualbasis`` logger at ``DUALBASIS_LOGLEVEL``;
           call ``use_dualbasis_log_handler("in_root_logger")`` to extend it to application loggers.
    """
    _ensure_handler()
    return logging.getLogger(name)


def set_loglevel(level: Union[int, str]) -> None:
    """Change the level of whichever logger currently owns the handler"""
    global loglevel

    with _lock:
        loglevel = level.upper() if isinstance(level, str) else level
        if _mode in _MODE_OWNER:
            logging.getLogger(_MODE_OWNER[_mode]).setLevel(loglevel)


def use_dualbasis_log_handler(where: Union[HandlerMode, str]) -> None:
    """
    Move the dualbasis handler:

    * "in_dualbasis" (default): on the ``dualbasis`` logger, without propagation to the root logger;
    * "in_root_logger": on the root logger, so CLI and test loggers share the format;
    * "nowhere": removed, ``dualbasis`` records propagate to whatever the application configured.

    Strings are case-insensitive names of :class:`HandlerMode` members.
    """
    global _mode

    where = HandlerMode[where.upper()] if isinstance(where, str) else where
    with _lock:
        _ensure_handler()
        if where == _mode:
            return
        if _mode in _MODE_OWNER:
            _detach(_MODE_OWNER[_mode])
        _mode = where
        if _mode in _MODE_OWNER:
            _attach(_MODE_OWNER[_mode])
