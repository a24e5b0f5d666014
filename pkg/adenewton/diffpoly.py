"""Differential polynomials K{Y} over a field preset."""

from __future__ import annotations

from math import comb
from typing import TYPE_CHECKING, Any, NamedTuple, Self

from .errors import (
    PrecisionExhaustedError,
    PresetMismatchError,
    ValuationError,
    ZeroDivisionSeriesError,
)
from .polybase import MultiIndexPoly, pad_index, render_monomial
from .series import BelowPrecision, FieldPreset, Series
from .valgroup import ExtGroupElement, GroupElement, ext_min

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .polybase import MultiIndex


class Complexity(NamedTuple):
    """c(P) = (order, degree in the highest derivative, total degree)."""

    order: int
    top_degree: int
    degree: int


class DiffPoly(MultiIndexPoly[Series]):
    """
    A differential polynomial with Series coefficients.

    Coefficients that are zero at their precision stay stored so arithmetic
    keeps their error terms, but they are not part of the support; the
    least such precision is the polynomial's precision floor.
    """

    __slots__ = ("_preset",)

    def __init__(
        self, preset: FieldPreset, order: int, coeffs: Mapping[MultiIndex, Series]
    ) -> None:
        """Attach the preset, then store coefficients."""
        self._preset = preset
        for coeff in coeffs.values():
            if coeff.preset != preset:
                msg = f"Coefficient {coeff} is not over preset {preset.name}/{preset.dim}"
                raise PresetMismatchError(msg)
        super().__init__(order, coeffs)

    def _drop(self, coeff: Series) -> bool:
        return coeff.is_exact_zero()

    def _known(self, coeff: Series) -> bool:
        return coeff.has_terms()

    def _zero_coeff(self) -> Series:
        return self._preset.zero()

    def _one_coeff(self) -> Series:
        return self._preset.one()

    def _new(self, order: int, coeffs: Mapping[MultiIndex, Series]) -> Self:
        return type(self)(self._preset, order, coeffs)

    @classmethod
    def y(cls, preset: FieldPreset, order: int = 0) -> DiffPoly:
        """The polynomial Y^(order)."""
        return cls(preset, order, {}).variable(order)

    @classmethod
    def from_series(cls, value: Series, order: int = 0) -> DiffPoly:
        return cls(value.preset, order, {(0,) * (order + 1): value})

    @property
    def preset(self) -> FieldPreset:
        return self._preset

    @property
    def precision_floor(self) -> ExtGroupElement:
        """Least precision of a coefficient that is zero at its precision."""
        return ext_min(
            *(c.precision for _, c in self.stored_items() if not c.has_terms())
        )

    def is_exact(self) -> bool:
        return all(c.is_exact() for _, c in self.stored_items())

    # Decompositions

    def complexity(self) -> Complexity:
        self._require_nonzero("complexity")
        order = self.order()
        top = max(pad_index(i, order + 1)[order] for i, _ in self.items())
        return Complexity(order, top, self.degree())

    def mul_at_zero(self) -> int:
        return self.multiplicity()

    def homogeneous_parts(self) -> dict[int, DiffPoly]:
        return {d: self.homogeneous_part(d) for d in self.degrees()}

    # Valuation

    def v_of(self) -> ExtGroupElement | BelowPrecision:
        """Least coefficient valuation, or a sentinel when truncation hides it."""
        known = ext_min(*(c.nonzero_valuation() for _, c in self.items()))
        floor = self.precision_floor
        if isinstance(floor, GroupElement) and floor <= known:
            return BelowPrecision(floor)
        return known

    def known_v(self) -> GroupElement:
        """v(P) for a nonzero polynomial whose valuation is decidable."""
        value = self.v_of()
        if isinstance(value, BelowPrecision):
            msg = f"v(P) is {value}"
            raise PrecisionExhaustedError(msg, value.bound)
        if not isinstance(value, GroupElement):
            msg = "The zero polynomial has no finite valuation"
            raise ValuationError(msg)
        return value

    # Coefficient-wise operations

    def shift(self, exponent: GroupElement) -> DiffPoly:
        """t^exponent·P."""
        return self._new(self._order, {i: c.shift(exponent) for i, c in self.stored_items()})

    def times(self, value: Series) -> DiffPoly:
        """value·P for a series value."""
        return self._new(self._order, {i: value * c for i, c in self.stored_items()})

    def truncate_coefficients(self, bound: ExtGroupElement) -> DiffPoly:
        return self._new(
            self._order, {i: c.truncate(bound) for i, c in self.stored_items()}
        )

    # Evaluation and conjugation

    def _derivatives(self, a: Series, count: int) -> list[Series]:
        values = [a]
        for _ in range(count):
            values.append(values[-1].derive())
        return values

    def evaluate(self, y: Series) -> Series:
        """P(y), substituting y, y', ..., y^(r)."""
        derivatives = self._derivatives(y, self._order)
        total = self._preset.zero()
        for index, coeff in self.stored_items():
            term = coeff
            for order, power in enumerate(index):
                if power:
                    term = term * derivatives[order] ** power
            total = total + term
        return total

    def add_conjugate(self, a: Series) -> DiffPoly:
        """P(a + Y) by Taylor expansion: Σ (∂^i P)(a)/i! · Y^i."""
        derivatives = self._derivatives(a, self._order)
        powers: dict[tuple[int, int], Series] = {}

        def power(order: int, exponent: int) -> Series:
            key = (order, exponent)
            if key not in powers:
                powers[key] = derivatives[order] ** exponent
            return powers[key]

        coeffs: dict[MultiIndex, Series] = {}
        for index, coeff in self.stored_items():
            for lower, weight in self.binomial_shift(index):
                term = coeff * weight
                for order, (full, kept) in enumerate(zip(index, lower, strict=True)):
                    if full > kept:
                        term = term * power(order, full - kept)
                coeffs[lower] = coeffs[lower] + term if lower in coeffs else term
        return self._new(self._order, coeffs)

    def mul_conjugate(self, a: Series) -> DiffPoly:
        """P(aY), expanding (aY)^(j) = Σ C(j,l) a^(j-l) Y^(l)."""
        if not a.has_terms():
            msg = f"Cannot conjugate by {a}: not detectably nonzero"
            raise ZeroDivisionSeriesError(msg)
        derivatives = self._derivatives(a, self._order)
        forms = []
        for order in range(self._order + 1):
            form = self._new(self._order, {})
            for lower in range(order + 1):
                form = form + self.variable(lower).times(
                    derivatives[order - lower] * comb(order, lower)
                )
            forms.append(form)
        return self.substitute(forms)

    def partial_mult_conjugated(self, index: MultiIndex, monomial: Series) -> DiffPoly:
        """(∂^i)_{×f} P, computed as (∂^i(P_{×f}))_{×f⁻¹} for a monomial f = t^γ."""
        if not monomial.is_pure_monomial():
            msg = f"Expected a monomial t^γ with coefficient one, got {monomial}"
            raise ValuationError(msg)
        return self.mul_conjugate(monomial).partial(index).mul_conjugate(monomial.invert())

    def derive_poly(self) -> DiffPoly:
        """P' with δ on coefficients and Y^(j) ↦ Y^(j+1); order grows by one."""
        order = self._order + 1
        coeffs: dict[MultiIndex, Series] = {}

        def put(index: MultiIndex, value: Series) -> None:
            coeffs[index] = coeffs[index] + value if index in coeffs else value

        for index, coeff in self.stored_items():
            padded = pad_index(index, order + 1)
            put(padded, coeff.derive())
            for position, power in enumerate(padded[:-1]):
                if not power:
                    continue
                moved = list(padded)
                moved[position] -= 1
                moved[position + 1] += 1
                put(tuple(moved), coeff * power)
        return self._new(order, coeffs)

    # Rendering

    def render(self) -> str:
        """Canonical text, highest degree first."""
        terms = sorted(
            self.stored_items(), key=lambda item: (sum(item[0]), item[0]), reverse=True
        )
        if not terms:
            return "0"
        parts: list[str] = []
        for index, coeff in terms:
            monomial = render_monomial(index)
            text = coeff.render()
            simple = len(coeff.terms) == 1 and coeff.is_exact()
            negative = simple and text.startswith("-")
            if negative:
                text = text[1:]
            if not simple:
                text = f"({text})"
            if not monomial:
                body = text
            elif text == "1":
                body = monomial
            else:
                body = f"{text}*{monomial}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"{'-' if negative else '+'} {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"DiffPoly({self.render()})"


def complexity(p: DiffPoly) -> Complexity:
    return p.complexity()


def mul_at_zero(p: DiffPoly) -> int:
    return p.mul_at_zero()


def homogeneous_part(p: DiffPoly, degree: int) -> DiffPoly:
    return p.homogeneous_part(degree)


def truncate_deg(p: DiffPoly, degree: int) -> DiffPoly:
    return p.truncate_deg(degree)


def v_of(p: DiffPoly) -> ExtGroupElement | BelowPrecision:
    return p.v_of()


def add_conjugate(p: DiffPoly, a: Series) -> DiffPoly:
    return p.add_conjugate(a)


def mul_conjugate(p: DiffPoly, a: Series) -> DiffPoly:
    return p.mul_conjugate(a)


def evaluate(p: DiffPoly, y: Series) -> Series:
    return p.evaluate(y)


def partial(index: MultiIndex, p: DiffPoly) -> DiffPoly:
    return p.partial(index)


def partial_mult_conjugated(index: MultiIndex, monomial: Series, p: DiffPoly) -> DiffPoly:
    return p.partial_mult_conjugated(index, monomial)


def derive_poly(p: DiffPoly) -> DiffPoly:
    return p.derive_poly()


def monomial_poly(preset: FieldPreset, index: MultiIndex, coeff: Any = 1) -> DiffPoly:
    """coeff·Y^index as a differential polynomial."""
    value = coeff if isinstance(coeff, Series) else preset.constant(coeff)
    return DiffPoly(preset, max(len(index) - 1, 0), {index: value})
