"""Exceptions raised by adenewton."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .valgroup import GroupElement


class AdeNewtonError(Exception):
    """Exception to indicate a general adenewton error."""


class DimensionMismatchError(AdeNewtonError):
    """Group elements of different dimensions were combined."""


class PresetMismatchError(AdeNewtonError):
    """Series or polynomials over different field presets were combined."""


class PrecisionExhaustedError(AdeNewtonError):
    """The answer depends on terms below the available precision."""

    def __init__(self, msg: str, bound: GroupElement | None = None) -> None:
        """Keep the precision bound that blocked the computation."""
        super().__init__(msg)
        self.bound = bound


class ZeroDivisionSeriesError(AdeNewtonError):
    """A zero or below-precision series was inverted or split."""


class ValuationError(AdeNewtonError):
    """A valuation precondition does not hold."""


class ZeroPolynomialError(ValuationError):
    """An operation needs a nonzero differential polynomial."""


class OrderBoundError(AdeNewtonError):
    """A multi-index or power lies outside what a polynomial can hold."""


class InvalidConstraintError(AdeNewtonError):
    """A constraint or coarsening is not admissible."""


class NotHomogeneousError(AdeNewtonError):
    """A homogeneous differential polynomial was required."""


class EqualDegreesError(AdeNewtonError):
    """An equalizer was requested for parts of equal degree."""


class InvalidChainError(AdeNewtonError):
    """A cut chain does not have strictly increasing steps."""


class ResidueUnsolvableError(AdeNewtonError):
    """A residue equation falls outside the implemented fragment."""

    def __init__(self, msg: str, report: Any = None) -> None:
        """Keep the residue solver report."""
        super().__init__(msg)
        self.report = report


class ParseError(AdeNewtonError):
    """Input text does not conform to the grammar."""

    def __init__(self, msg: str, line: int = 1, column: int = 1) -> None:
        """Record where parsing stopped."""
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class ConfigError(AdeNewtonError):
    """The configuration file or flags are invalid."""
