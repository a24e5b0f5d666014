"""Constants for adenewton."""

from fractions import Fraction
from logging import Logger, getLogger

LOGGER: Logger = getLogger(__package__)

PROG = "adenewton"

# Field presets
PRESET_H_TYPE = "h-type"
PRESET_MONOTONE = "monotone"
PRESETS = (PRESET_H_TYPE, PRESET_MONOTONE)

# Output formats
FORMAT_TEXT = "text"
FORMAT_JSON = "json"

# Default values
DEFAULT_PRESET = PRESET_H_TYPE
DEFAULT_DIM = 1
DEFAULT_TARGET = Fraction(4)
DEFAULT_BRANCH_BOUND = 16
DEFAULT_DEPTH = 32
DEFAULT_LIFT_STEPS = 256
DEFAULT_ORDER_BOUND = 8
DEFAULT_FORMAT = FORMAT_TEXT
DEFAULT_LOG_LEVEL = "warning"
DEFAULT_SAMPLES = 200
DEFAULT_SEED = 0

# Config keys
CONF_FIELD = "field"
CONF_SOLVER = "solver"
CONF_OUTPUT = "output"
CONF_PRESET = "preset"
CONF_DIM = "dim"
CONF_TARGET = "target"
CONF_BRANCH_BOUND = "branch_bound"
CONF_DEPTH = "depth"
CONF_ORDER_BOUND = "order_bound"
CONF_FORMAT = "format"
CONF_LOG_LEVEL = "log_level"

# Exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_STUCK = 2
