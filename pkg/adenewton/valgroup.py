"""
Value group arithmetic.

Elements of Γ = ℚⁿ are ordered lexicographically. Archimedean classes are
read off the first nonzero coordinate, and the convex subgroups used for
coarsening are the sets of elements of strictly smaller class.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Any

from .errors import DimensionMismatchError, InvalidConstraintError, ValuationError


def to_fraction(value: Any) -> Fraction:
    """Coerce ints, strings like "3/2" and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    msg = f"Cannot read {value!r} as an exact rational"
    raise TypeError(msg)


def fmt_rational(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when integral."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Ordering(IntEnum):
    """Result of a three-way comparison."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


class GroupElement:
    """An element of ℚⁿ under the lexicographic order."""

    __slots__ = ("_coords", "_hash")

    def __init__(self, coords: tuple[Fraction, ...]) -> None:
        """Wrap a tuple of Fractions; use `of` for loose input."""
        if not coords:
            msg = "A group element needs at least one coordinate"
            raise DimensionMismatchError(msg)
        self._coords = coords
        self._hash = hash(coords)

    @classmethod
    def of(cls, *values: Any) -> GroupElement:
        """Build an element from ints, Fractions or "p/q" strings."""
        return cls(tuple(to_fraction(v) for v in values))

    @classmethod
    def zero(cls, dim: int = 1) -> GroupElement:
        return cls((Fraction(0),) * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> GroupElement:
        """The element with a single 1 at `index`."""
        return cls(tuple(Fraction(int(i == index)) for i in range(dim)))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self._coords

    @property
    def dim(self) -> int:
        return len(self._coords)

    @property
    def scalar(self) -> Fraction:
        """The single coordinate of a one-dimensional element."""
        if len(self._coords) != 1:
            msg = f"Expected a one-dimensional element, got dimension {self.dim}"
            raise DimensionMismatchError(msg)
        return self._coords[0]

    def is_zero(self) -> bool:
        return not any(self._coords)

    def leading_index(self) -> int | None:
        for index, value in enumerate(self._coords):
            if value:
                return index
        return None

    def sign(self) -> int:
        index = self.leading_index()
        if index is None:
            return 0
        return 1 if self._coords[index] > 0 else -1

    def _check(self, other: GroupElement) -> None:
        if len(self._coords) != len(other._coords):  # noqa: SLF001
            msg = f"Dimension mismatch: {self.dim} vs {other.dim}"
            raise DimensionMismatchError(msg)

    def __add__(self, other: object) -> GroupElement:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return GroupElement(
            tuple(a + b for a, b in zip(self._coords, other._coords, strict=True))  # noqa: SLF001
        )

    def __sub__(self, other: object) -> GroupElement:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> GroupElement:
        return GroupElement(tuple(-a for a in self._coords))

    def __abs__(self) -> GroupElement:
        return -self if self.sign() < 0 else self

    def __mul__(self, factor: object) -> GroupElement:
        if isinstance(factor, bool) or not isinstance(factor, int | Fraction):
            return NotImplemented
        return GroupElement(tuple(a * factor for a in self._coords))

    __rmul__ = __mul__

    def __truediv__(self, divisor: object) -> GroupElement:
        if isinstance(divisor, bool) or not isinstance(divisor, int | Fraction):
            return NotImplemented
        return GroupElement(tuple(a / divisor for a in self._coords))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self._coords == other._coords

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self._coords < other._coords

    def __le__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self._coords <= other._coords

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self._coords > other._coords

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self._coords >= other._coords

    def render(self) -> list[str]:
        """Coordinates as "p/q" strings, the report form."""
        return [fmt_rational(c) for c in self._coords]

    def __str__(self) -> str:
        if len(self._coords) == 1:
            return fmt_rational(self._coords[0])
        return "(" + ",".join(self.render()) + ")"

    def __repr__(self) -> str:
        return f"GroupElement({self})"


class Infinity:
    """The valuation of zero; larger than every group element."""

    __slots__ = ()
    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:  # noqa: D102
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other: object) -> Infinity:
        if isinstance(other, GroupElement | Infinity):
            return self
        return NotImplemented

    __radd__ = __add__

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("adenewton.infinity")

    def __lt__(self, other: object) -> bool:
        if isinstance(other, GroupElement | Infinity):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, GroupElement | Infinity):
            return other is self
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, GroupElement):
            return True
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, GroupElement | Infinity):
            return True
        return NotImplemented

    def __str__(self) -> str:
        return "inf"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity()

type ExtGroupElement = GroupElement | Infinity


def is_finite(value: ExtGroupElement) -> bool:
    return isinstance(value, GroupElement)


def ext_min(*values: ExtGroupElement) -> ExtGroupElement:
    """Minimum over possibly infinite values."""
    result: ExtGroupElement = INFINITY
    for value in values:
        if value < result:
            result = value
    return result


@dataclass(frozen=True)
class ArchClass:
    """Archimedean class, identified by the leading nonzero coordinate."""

    leading_index: int

    def __lt__(self, other: ArchClass) -> bool:
        return self.leading_index > other.leading_index

    def __le__(self, other: ArchClass) -> bool:
        return self.leading_index >= other.leading_index

    def __gt__(self, other: ArchClass) -> bool:
        return self.leading_index < other.leading_index

    def __ge__(self, other: ArchClass) -> bool:
        return self.leading_index <= other.leading_index


def lex_compare(a: GroupElement, b: GroupElement) -> Ordering:
    """Three-way lexicographic comparison."""
    if a.dim != b.dim:
        msg = f"Dimension mismatch: {a.dim} vs {b.dim}"
        raise DimensionMismatchError(msg)
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def arch_class(gamma: GroupElement) -> ArchClass:
    """Archimedean class of a nonzero element."""
    index = gamma.leading_index()
    if index is None:
        msg = "The zero element has no archimedean class"
        raise ValuationError(msg)
    return ArchClass(index)


def is_little_o(alpha: GroupElement, beta: GroupElement) -> bool:
    """Whether [α] < [β]; zero counts as o(β)."""
    if beta.is_zero():
        msg = "is_little_o needs a nonzero reference element"
        raise ValuationError(msg)
    alpha._check(beta)  # noqa: SLF001
    if alpha.is_zero():
        return True
    return arch_class(alpha) < arch_class(beta)


def in_gamma_phi(gamma: GroupElement, v_phi: GroupElement) -> bool:
    """Membership in the convex subgroup of elements of class below [vφ]."""
    if v_phi.is_zero():
        msg = "Coarsening by an element of valuation zero is invalid"
        raise InvalidConstraintError(msg)
    return is_little_o(gamma, v_phi)
