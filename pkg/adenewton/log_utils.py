"""Event logging for adenewton: `event | key=value, ...` records on the package logger."""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any

import colorlog

LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"

# log_event -> log_<level> -> caller
_STACKLEVEL = 3


def _format_value(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (list, tuple)):
        return "[" + "; ".join(_format_value(item) for item in value) + "]"
    return str(value)


def _format_fields(fields: dict[str, Any]) -> str:
    return ", ".join(
        f"{key}={_format_value(value)}" for key, value in fields.items() if value is not None
    )


def log_event(logger: logging.Logger, level: int, event: str, **fields: Any) -> None:
    """
    Log an event with structured key/value details.

    Series, polynomials, exponents and constraints are rendered in the input
    syntax, so a logged value can be pasted back into the command line.
    """
    if not logger.isEnabledFor(level):
        return
    details = _format_fields(fields)
    if details:
        logger.log(level, "%s | %s", event, details, stacklevel=_STACKLEVEL)
    else:
        logger.log(level, "%s", event, stacklevel=_STACKLEVEL)


def log_debug(logger: logging.Logger, event: str, **fields: Any) -> None:
    log_event(logger, logging.DEBUG, event, **fields)


def log_info(logger: logging.Logger, event: str, **fields: Any) -> None:
    log_event(logger, logging.INFO, event, **fields)


def log_warning(logger: logging.Logger, event: str, **fields: Any) -> None:
    log_event(logger, logging.WARNING, event, **fields)


def log_error(logger: logging.Logger, event: str, **fields: Any) -> None:
    log_event(logger, logging.ERROR, event, **fields)


def setup_logging(logger: logging.Logger, level: str) -> None:
    """
    Attach a colored stream handler to the package logger.

    Only the command line calls this; library code leaves handlers alone.
    """
    for handler in list(logger.handlers):
        if getattr(handler, "_adenewton", False):
            logger.removeHandler(handler)
    handler = colorlog.StreamHandler()
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    handler._adenewton = True  # type: ignore[attr-defined]  # noqa: SLF001
    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False
