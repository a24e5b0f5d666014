"""Shared storage for polynomials in Y, Y', Y'', ... keyed by multi-index."""

from __future__ import annotations

from abc import ABC, abstractmethod
from math import comb, factorial
from typing import TYPE_CHECKING, Any, Self

from .errors import OrderBoundError, ZeroPolynomialError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

type MultiIndex = tuple[int, ...]


def pad_index(index: MultiIndex, length: int) -> MultiIndex:
    """Extend a multi-index with zeros to `length` entries."""
    if len(index) >= length:
        return index
    return index + (0,) * (length - len(index))


def strip_index(index: MultiIndex) -> MultiIndex:
    """Drop trailing zeros, keeping at least one entry."""
    end = len(index)
    while end > 1 and index[end - 1] == 0:
        end -= 1
    return index[:end]


def index_order(index: MultiIndex) -> int:
    """Highest derivative that occurs, or 0 for Y^i0 and constants."""
    stripped = strip_index(index)
    return len(stripped) - 1 if any(stripped) else 0


def index_factorial(index: MultiIndex) -> int:
    result = 1
    for entry in index:
        result *= factorial(entry)
    return result


def render_monomial(index: MultiIndex) -> str:
    """Y^2*(Y')^3 style text for a multi-index; empty for degree 0."""
    parts = []
    for order, power in enumerate(index):
        if not power:
            continue
        name = "Y" + "'" * order
        if power == 1:
            parts.append(name)
        elif order == 0:
            parts.append(f"{name}^{power}")
        else:
            parts.append(f"({name})^{power}")
    return "*".join(parts)


class MultiIndexPoly[C](ABC):
    """
    Polynomial in Y, Y', ..., Y^(r) with coefficients of type C.

    Coefficients are kept in a dict keyed by multi-indices of length r + 1;
    zero coefficients are never stored.
    """

    __slots__ = ("_coeffs", "_order")

    def __init__(self, order: int, coeffs: Mapping[MultiIndex, C]) -> None:
        """Store coefficients, padding indices and dropping zeros."""
        self._order = order
        cleaned: dict[MultiIndex, C] = {}
        for index, coeff in coeffs.items():
            if len(index) > order + 1 and any(index[order + 1 :]):
                msg = f"Multi-index {index} exceeds order bound {order}"
                raise OrderBoundError(msg)
            key = pad_index(index[: order + 1], order + 1)
            if key in cleaned:
                coeff = cleaned[key] + coeff  # type: ignore[operator]
            cleaned[key] = coeff
        self._coeffs = {
            key: value for key, value in sorted(cleaned.items()) if not self._drop(value)
        }

    # Hooks for the coefficient ring

    @abstractmethod
    def _drop(self, coeff: C) -> bool:
        """Whether a coefficient counts as zero and is not stored."""

    @abstractmethod
    def _zero_coeff(self) -> C:
        """The zero coefficient."""

    @abstractmethod
    def _one_coeff(self) -> C:
        """The unit coefficient."""

    def _known(self, coeff: C) -> bool:  # noqa: ARG002
        """Whether a stored coefficient is part of the visible support."""
        return True

    def _support(self) -> dict[MultiIndex, C]:
        return {i: c for i, c in self._coeffs.items() if self._known(c)}

    @abstractmethod
    def _new(self, order: int, coeffs: Mapping[MultiIndex, C]) -> Self:
        """Build a sibling polynomial over the same coefficient ring."""

    # Structure

    @property
    def order_bound(self) -> int:
        return self._order

    @property
    def coeffs(self) -> Mapping[MultiIndex, C]:
        return self._support()

    def items(self) -> Iterator[tuple[MultiIndex, C]]:
        return iter(self._support().items())

    def stored_items(self) -> Iterator[tuple[MultiIndex, C]]:
        """All stored terms, including coefficients outside the visible support."""
        return iter(self._coeffs.items())

    def coeff(self, index: MultiIndex) -> C:
        key = pad_index(index[: self._order + 1], self._order + 1)
        return self._coeffs.get(key, self._zero_coeff())

    def is_zero(self) -> bool:
        return not self._support()

    def degrees(self) -> list[int]:
        """Sorted degrees d with a nonzero homogeneous part."""
        return sorted({sum(index) for index in self._support()})

    def degree(self) -> int:
        self._require_nonzero("degree")
        return max(sum(index) for index in self._support())

    def multiplicity(self) -> int:
        """mul P, the least degree of a nonzero homogeneous part."""
        self._require_nonzero("multiplicity")
        return min(sum(index) for index in self._support())

    def order(self) -> int:
        """Highest derivative of Y that actually occurs."""
        return max((index_order(index) for index in self._support()), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, degree: int) -> Self:
        return self._new(
            self._order,
            {i: c for i, c in self._coeffs.items() if sum(i) == degree},
        )

    def truncate_deg(self, degree: int) -> Self:
        """P_{<=d}: the sum of homogeneous parts of degree at most d."""
        return self._new(
            self._order,
            {i: c for i, c in self._coeffs.items() if sum(i) <= degree},
        )

    def has_derivatives(self) -> bool:
        return any(index_order(index) > 0 for index in self._support())

    def _require_nonzero(self, what: str) -> None:
        if not self._support():
            msg = f"{what} is undefined for the zero polynomial"
            raise ZeroPolynomialError(msg)

    # Ring operations

    def constant(self, coeff: C) -> Self:
        return self._new(self._order, {(0,) * (self._order + 1): coeff})

    def variable(self, order: int) -> Self:
        """The monomial Y^(order)."""
        bound = max(self._order, order)
        index = tuple(int(k == order) for k in range(bound + 1))
        return self._new(bound, {index: self._one_coeff()})

    def __add__(self, other: Self) -> Self:
        bound = max(self._order, other._order)
        coeffs: dict[MultiIndex, C] = {}
        for source in (self._coeffs, other._coeffs):
            for index, coeff in source.items():
                key = pad_index(index, bound + 1)
                coeffs[key] = coeffs[key] + coeff if key in coeffs else coeff  # type: ignore[operator]
        return self._new(bound, coeffs)

    def __neg__(self) -> Self:
        return self._new(self._order, {i: -c for i, c in self._coeffs.items()})  # type: ignore[operator]

    def __sub__(self, other: Self) -> Self:
        return self + (-other)

    def __mul__(self, other: Self) -> Self:
        bound = max(self._order, other._order)
        coeffs: dict[MultiIndex, C] = {}
        for left, a in self._coeffs.items():
            left_key = pad_index(left, bound + 1)
            for right, b in other._coeffs.items():
                right_key = pad_index(right, bound + 1)
                key = tuple(x + y for x, y in zip(left_key, right_key, strict=True))
                product = a * b  # type: ignore[operator]
                coeffs[key] = coeffs[key] + product if key in coeffs else product
        return self._new(bound, coeffs)

    def scale(self, factor: C) -> Self:
        """Multiply every coefficient by a ring element."""
        return self._new(
            self._order, {i: factor * c for i, c in self._coeffs.items()}  # type: ignore[operator]
        )

    def __pow__(self, exponent: int) -> Self:
        if exponent < 0:
            msg = "Negative powers of differential polynomials are undefined"
            raise OrderBoundError(msg)
        result = self.constant(self._one_coeff())
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def substitute(self, forms: list[Self]) -> Self:
        """Replace each Y^(k) by forms[k] and expand."""
        cache: dict[tuple[int, int], Self] = {}
        result = self._new(max(self._order, *(f._order for f in forms)), {})
        for index, coeff in self._coeffs.items():
            term = self.constant(coeff)
            for order, power in enumerate(index):
                if not power:
                    continue
                key = (order, power)
                if key not in cache:
                    cache[key] = forms[order] ** power
                term = term * cache[key]
            result = result + term
        return result

    def partial(self, index: MultiIndex) -> Self:
        """Iterated formal partial derivative with respect to Y, Y', ..."""
        length = max(len(index), self._order + 1)
        wanted = pad_index(index, length)
        coeffs: dict[MultiIndex, C] = {}
        for key, coeff in self._coeffs.items():
            current = pad_index(key, length)
            if any(c < w for c, w in zip(current, wanted, strict=True)):
                continue
            factor = 1
            for c, w in zip(current, wanted, strict=True):
                factor *= factorial(c) // factorial(c - w)
            reduced = tuple(c - w for c, w in zip(current, wanted, strict=True))
            coeffs[reduced] = coeff * factor  # type: ignore[operator]
        return self._new(length - 1, coeffs)

    @staticmethod
    def binomial_shift(index: MultiIndex) -> Iterable[tuple[MultiIndex, int]]:
        """Pairs (i, prod C(j_k, i_k)) for all i <= index, the Taylor weights."""
        ranges: list[list[tuple[int, int]]] = [
            [(i, comb(j, i)) for i in range(j + 1)] for j in index
        ]
        combos: list[tuple[MultiIndex, int]] = [((), 1)]
        for choices in ranges:
            combos = [
                ((*prefix, i), weight * w) for prefix, weight in combos for i, w in choices
            ]
        return combos

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiIndexPoly):
            return NotImplemented
        bound = max(self._order, other._order) + 1
        mine = {pad_index(i, bound): c for i, c in self._support().items()}
        theirs = {pad_index(i, bound): c for i, c in other._support().items()}
        return mine == theirs

    def __hash__(self) -> int:
        return hash(tuple((strip_index(i), c) for i, c in self._support().items()))

    def sorted_terms(self) -> list[tuple[MultiIndex, C]]:
        """Terms in canonical order: by degree, then multi-index lex."""
        return sorted(self._support().items(), key=lambda item: (sum(item[0]), item[0]))

    def describe(self) -> Any:
        return {strip_index(i): c for i, c in self._support().items()}
