"""Configuration loading for adenewton."""

from __future__ import annotations

import tomllib
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import voluptuous as vol

from .const import (
    CONF_BRANCH_BOUND,
    CONF_DEPTH,
    CONF_DIM,
    CONF_FIELD,
    CONF_FORMAT,
    CONF_LOG_LEVEL,
    CONF_ORDER_BOUND,
    CONF_OUTPUT,
    CONF_PRESET,
    CONF_SOLVER,
    CONF_TARGET,
    DEFAULT_BRANCH_BOUND,
    DEFAULT_DEPTH,
    DEFAULT_DIM,
    DEFAULT_FORMAT,
    DEFAULT_LOG_LEVEL,
    DEFAULT_ORDER_BOUND,
    DEFAULT_PRESET,
    DEFAULT_TARGET,
    FORMAT_JSON,
    FORMAT_TEXT,
    LOGGER,
    PRESETS,
)
from .errors import ConfigError
from .log_utils import log_debug
from .valgroup import to_fraction

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

LOG_LEVELS = ("debug", "info", "warning", "error")


def rational(value: Any) -> Fraction:
    """Validate an int or a "p/q" string as a rational."""
    if isinstance(value, bool) or not isinstance(value, int | str | Fraction):
        msg = f"Expected a rational such as 4 or 7/2, got {value!r}"
        raise vol.Invalid(msg)
    try:
        return to_fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        msg = f"Malformed rational {value!r}"
        raise vol.Invalid(msg) from err


POSITIVE_INT = vol.All(int, vol.Range(min=1))

FILE_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_FIELD): {
            vol.Optional(CONF_PRESET): vol.In(PRESETS),
            vol.Optional(CONF_DIM): POSITIVE_INT,
        },
        vol.Optional(CONF_SOLVER): {
            vol.Optional(CONF_TARGET): rational,
            vol.Optional(CONF_BRANCH_BOUND): POSITIVE_INT,
            vol.Optional(CONF_DEPTH): vol.All(int, vol.Range(min=0)),
            vol.Optional(CONF_ORDER_BOUND): vol.All(int, vol.Range(min=0)),
        },
        vol.Optional(CONF_OUTPUT): {
            vol.Optional(CONF_FORMAT): vol.In((FORMAT_TEXT, FORMAT_JSON)),
            vol.Optional(CONF_LOG_LEVEL): vol.All(str, vol.Lower, vol.In(LOG_LEVELS)),
        },
    }
)

FLAG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_PRESET): vol.In(PRESETS),
        vol.Optional(CONF_DIM): POSITIVE_INT,
        vol.Optional(CONF_TARGET): rational,
        vol.Optional(CONF_BRANCH_BOUND): POSITIVE_INT,
        vol.Optional(CONF_DEPTH): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_ORDER_BOUND): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_FORMAT): vol.In((FORMAT_TEXT, FORMAT_JSON)),
        vol.Optional(CONF_LOG_LEVEL): vol.All(str, vol.Lower, vol.In(LOG_LEVELS)),
    }
)


@dataclass(frozen=True)
class Config:
    """Resolved settings for one run."""

    preset: str = DEFAULT_PRESET
    dim: int = DEFAULT_DIM
    target: Fraction = DEFAULT_TARGET
    branch_bound: int = DEFAULT_BRANCH_BOUND
    depth: int = DEFAULT_DEPTH
    order_bound: int = DEFAULT_ORDER_BOUND
    format: str = DEFAULT_FORMAT
    log_level: str = DEFAULT_LOG_LEVEL

    def as_dict(self) -> dict[str, Any]:
        return {
            CONF_PRESET: self.preset,
            CONF_DIM: self.dim,
            CONF_TARGET: str(self.target),
            CONF_BRANCH_BOUND: self.branch_bound,
            CONF_DEPTH: self.depth,
            CONF_ORDER_BOUND: self.order_bound,
            CONF_FORMAT: self.format,
            CONF_LOG_LEVEL: self.log_level,
        }


def _invalid(source: str, err: vol.Invalid) -> ConfigError:
    path = ".".join(str(part) for part in err.path) or "<root>"
    return ConfigError(f"Invalid configuration in {source} at {path}: {err.msg}")


def load_config_file(path: Path) -> dict[str, Any]:
    """Read and validate a TOML file, flattened to CONF_* keys."""
    try:
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    except OSError as err:
        msg = f"Cannot read configuration file {path}: {err}"
        raise ConfigError(msg) from err
    except tomllib.TOMLDecodeError as err:
        msg = f"Configuration file {path} is not valid TOML: {err}"
        raise ConfigError(msg) from err
    try:
        validated = FILE_SCHEMA(raw)
    except vol.Invalid as err:
        raise _invalid(str(path), err) from err
    flat: dict[str, Any] = {}
    for table in (CONF_FIELD, CONF_SOLVER, CONF_OUTPUT):
        flat.update(validated.get(table, {}))
    log_debug(LOGGER, "config_loaded", path=path, keys=",".join(sorted(flat)) or None)
    return flat


def resolve_config(
    file_values: Mapping[str, Any] | None = None,
    flags: Mapping[str, Any] | None = None,
) -> Config:
    """Defaults, then file values, then flags; unset flags are None."""
    file_values = file_values or {}
    try:
        overrides = FLAG_SCHEMA({k: v for k, v in (flags or {}).items() if v is not None})
    except vol.Invalid as err:
        raise _invalid("command-line flags", err) from err
    defaults = Config()

    def pick(key: str, default: Any) -> Any:
        return overrides.get(key, file_values.get(key, default))

    return Config(
        preset=pick(CONF_PRESET, defaults.preset),
        dim=pick(CONF_DIM, defaults.dim),
        target=pick(CONF_TARGET, defaults.target),
        branch_bound=pick(CONF_BRANCH_BOUND, defaults.branch_bound),
        depth=pick(CONF_DEPTH, defaults.depth),
        order_bound=pick(CONF_ORDER_BOUND, defaults.order_bound),
        format=pick(CONF_FORMAT, defaults.format),
        log_level=pick(CONF_LOG_LEVEL, defaults.log_level),
    )


def load_config(path: Path | None = None, flags: Mapping[str, Any] | None = None) -> Config:
    file_values = load_config_file(path) if path is not None else {}
    return resolve_config(file_values, flags)
