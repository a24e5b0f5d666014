"""
Truncated Hahn series over a residue field with a small derivation.

Every Series carries a precision: stored exponents lie below it and the
tail at or above it is unknown. Ring operations propagate precision by the
minimum rules, so exact inputs give exact results.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cache
from typing import TYPE_CHECKING, Any

from .const import LOGGER, PRESET_H_TYPE, PRESET_MONOTONE, PRESETS
from .errors import (
    AdeNewtonError,
    PrecisionExhaustedError,
    PresetMismatchError,
    ValuationError,
    ZeroDivisionSeriesError,
)
from .log_utils import log_debug
from .residue import (
    ResidueField,
    rational_function_residues,
    rational_residues,
)
from .valgroup import (
    INFINITY,
    ExtGroupElement,
    GroupElement,
    ext_min,
    fmt_rational,
    in_gamma_phi,
    to_fraction,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping


@dataclass(frozen=True)
class BelowPrecision:
    """Valuation sentinel: no term is known below `bound`."""

    bound: GroupElement

    def __str__(self) -> str:
        return f"unknown below precision {self.bound}"


@dataclass(frozen=True)
class FieldPreset:
    """
    A concrete valued differential field k((t^Γ)) with Γ = ℚ^dim.

    h-type: δ(c·t^γ) = -γ₀·c·t^(γ+ε) with ε the last unit vector, k = ℚ.
    monotone: δ(c·t^γ) = c'·t^γ with k = ℚ(z) and c' = dc/dz.
    """

    name: str
    dim: int
    residue: ResidueField = field(compare=False, repr=False)

    @property
    def epsilon(self) -> GroupElement:
        return GroupElement.unit(self.dim, self.dim - 1)

    @property
    def is_h_type(self) -> bool:
        return self.name == PRESET_H_TYPE

    def zero_exponent(self) -> GroupElement:
        return GroupElement.zero(self.dim)

    def exponent(self, value: Any) -> GroupElement:
        """Coerce a rational (dimension 1) or a GroupElement into Γ."""
        if isinstance(value, GroupElement):
            if value.dim != self.dim:
                msg = f"Exponent {value} does not have dimension {self.dim}"
                raise PresetMismatchError(msg)
            return value
        if isinstance(value, tuple | list):
            return GroupElement.of(*value)
        if self.dim != 1:
            msg = f"A scalar exponent needs dimension 1, preset has {self.dim}"
            raise PresetMismatchError(msg)
        return GroupElement((to_fraction(value),))

    def derive_term(self, exponent: GroupElement, coeff: Any) -> list[tuple[GroupElement, Any]]:
        """δ(coeff·t^exponent) as a list of terms."""
        if self.is_h_type:
            weight = exponent.coords[0]
            if not weight:
                return []
            return [(exponent + self.epsilon, -weight * coeff)]
        derived = self.residue.derive(coeff)
        return [] if self.residue.is_zero(derived) else [(exponent, derived)]

    def derivation_shift(self) -> GroupElement:
        """How far derivation moves the precision bound."""
        return self.epsilon if self.is_h_type else self.zero_exponent()

    def power_derivative(self, order: int) -> tuple[Fraction, ...]:
        """
        Coefficients of p_m with (t^γ)^(m) = p_m(γ)·t^(γ + m·shift), lowest first.

        Only meaningful for dimension 1. h-type: p_(m+1)(γ) = -(γ + m)·p_m(γ);
        monotone: p_m = 0 for m >= 1.
        """
        poly: tuple[Fraction, ...] = (Fraction(1),)
        for step in range(order):
            if not self.is_h_type:
                return ()
            shifted = [Fraction(0), *poly]
            for position, value in enumerate(poly):
                shifted[position] += step * value
            poly = tuple(-value for value in shifted)
        return poly

    # Constructors

    def zero(self) -> Series:
        return Series(self, {})

    def one(self) -> Series:
        return Series(self, {self.zero_exponent(): self.residue.one})

    def constant(self, value: Any) -> Series:
        return Series(self, {self.zero_exponent(): self.residue.convert(value)})

    def monomial(self, exponent: Any, coeff: Any = 1) -> Series:
        """coeff·t^exponent, exact."""
        return Series(self, {self.exponent(exponent): self.residue.convert(coeff)})

    def big_o(self, exponent: Any) -> Series:
        """The zero series known only up to t^exponent."""
        return Series(self, {}, self.exponent(exponent))

    def random_series(
        self,
        rng: random.Random,
        *,
        terms: int = 3,
        min_exponent: int = 0,
        max_exponent: int = 4,
        denominator: int = 2,
        positive: bool = False,
    ) -> Series:
        """A random exact series; `positive` restricts to exponents > 0."""
        collected: dict[GroupElement, Any] = {}
        for _ in range(rng.randint(1, terms)):
            coords = []
            for _axis in range(self.dim):
                value = Fraction(
                    rng.randint(min_exponent * denominator, max_exponent * denominator),
                    denominator,
                )
                coords.append(value)
            exponent = GroupElement(tuple(coords))
            if positive and exponent.sign() <= 0:
                exponent = GroupElement.unit(self.dim, 0) + abs(exponent)
            collected[exponent] = self.residue.random_element(rng)
        return Series(self, collected)


@cache
def get_preset(name: str, dim: int = 1) -> FieldPreset:
    """Look up a named field preset of the given group dimension."""
    if name not in PRESETS:
        msg = f"Unknown field preset {name!r}; choose one of {', '.join(PRESETS)}"
        raise AdeNewtonError(msg)
    if dim < 1:
        msg = f"Group dimension must be positive, got {dim}"
        raise AdeNewtonError(msg)
    residue = rational_residues() if name == PRESET_H_TYPE else rational_function_residues()
    return FieldPreset(name, dim, residue)


class Relation(StrEnum):
    """Dominance relation of a to b."""

    PREC = "≺"
    PRECEQ = "≼"
    ASYMP = "≍"
    SIM = "∼"
    SUCC = "≻"
    INCOMPARABLE = "incomparable-at-precision"


class Series:
    """Finite-support Hahn series with a precision certificate."""

    __slots__ = ("_hash", "_precision", "_preset", "_terms")

    def __init__(
        self,
        preset: FieldPreset,
        terms: Mapping[GroupElement, Any] | Iterable[tuple[GroupElement, Any]],
        precision: ExtGroupElement = INFINITY,
    ) -> None:
        """Keep nonzero terms below the precision, in increasing order."""
        self._preset = preset
        self._precision = precision
        pairs = terms.items() if hasattr(terms, "items") else terms
        residue = preset.residue
        kept = {}
        for exponent, coeff in pairs:
            if residue.is_zero(coeff) or not exponent < precision:
                continue
            kept[exponent] = coeff
        self._terms = dict(sorted(kept.items()))
        self._hash: int | None = None

    # Accessors

    @property
    def preset(self) -> FieldPreset:
        return self._preset

    @property
    def precision(self) -> ExtGroupElement:
        return self._precision

    @property
    def terms(self) -> dict[GroupElement, Any]:
        return dict(self._terms)

    def is_exact(self) -> bool:
        return self._precision is INFINITY

    def is_exact_zero(self) -> bool:
        return not self._terms and self._precision is INFINITY

    def has_terms(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exponent: GroupElement) -> Any:
        return self._terms.get(exponent, self._preset.residue.zero)

    def is_monomial(self) -> bool:
        """Exactly c·t^γ with no unknown tail."""
        return self.is_exact() and len(self._terms) == 1

    def is_pure_monomial(self) -> bool:
        """Exactly t^γ with coefficient one."""
        return self.is_monomial() and next(iter(self._terms.values())) == self._preset.residue.one

    def valuation(self) -> ExtGroupElement | BelowPrecision:
        """Least exponent; INFINITY for exact zero; a sentinel when unknown."""
        if self._terms:
            return next(iter(self._terms))
        if self._precision is INFINITY:
            return INFINITY
        return BelowPrecision(self._precision)  # type: ignore[arg-type]

    def known_valuation(self) -> ExtGroupElement:
        """Valuation, raising when it lies below the precision."""
        value = self.valuation()
        if isinstance(value, BelowPrecision):
            msg = f"Valuation is {value}"
            raise PrecisionExhaustedError(msg, value.bound)
        return value

    def nonzero_valuation(self) -> GroupElement:
        """Valuation of a detectably nonzero series."""
        value = self.known_valuation()
        if not isinstance(value, GroupElement):
            msg = "The zero series has no finite valuation"
            raise ZeroDivisionSeriesError(msg)
        return value

    def lower_bound(self) -> ExtGroupElement:
        """A guaranteed lower bound for the valuation."""
        if self._terms:
            return next(iter(self._terms))
        return self._precision

    # Arithmetic

    def _check(self, other: Series) -> None:
        if self._preset != other._preset:
            mine, theirs = self._preset, other._preset
            msg = f"Preset mismatch: {mine.name}/{mine.dim} vs {theirs.name}/{theirs.dim}"
            raise PresetMismatchError(msg)

    def _coerce(self, other: object) -> Series | None:
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, int | Fraction) and not isinstance(other, bool):
            return self._preset.constant(other)
        return None

    def __add__(self, other: object) -> Series:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        residue = self._preset.residue
        terms = dict(self._terms)
        for exponent, coeff in rhs._terms.items():
            terms[exponent] = terms[exponent] + coeff if exponent in terms else coeff
        return Series(
            self._preset,
            {e: c for e, c in terms.items() if not residue.is_zero(c)},
            ext_min(self._precision, rhs._precision),
        )

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(self._preset, {e: -c for e, c in self._terms.items()}, self._precision)

    def __sub__(self, other: object) -> Series:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> Series:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> Series:
        if isinstance(other, int | Fraction) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        precision = ext_min(
            self._precision + other.lower_bound(),
            other._precision + self.lower_bound(),
            self._precision + other._precision,
        )
        residue = self._preset.residue
        terms: dict[GroupElement, Any] = {}
        for left, a in self._terms.items():
            for right, b in other._terms.items():
                exponent = left + right
                if not exponent < precision:
                    continue
                product = a * b
                terms[exponent] = terms[exponent] + product if exponent in terms else product
        return Series(
            self._preset, {e: c for e, c in terms.items() if not residue.is_zero(c)}, precision
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Series:
        result = self._preset.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: Any) -> Series:
        """Multiply by a residue field element."""
        factor = self._preset.residue.convert(factor)
        return Series(
            self._preset, {e: factor * c for e, c in self._terms.items()}, self._precision
        )

    def shift(self, exponent: GroupElement) -> Series:
        """Multiply by the monomial t^exponent."""
        return Series(
            self._preset,
            {e + exponent: c for e, c in self._terms.items()},
            self._precision + exponent,
        )

    def truncate(self, bound: ExtGroupElement) -> Series:
        """Forget everything at or above `bound`."""
        return Series(self._preset, self._terms, ext_min(self._precision, bound))

    def invert(self, out_precision: GroupElement | None = None) -> Series:
        """
        1/a by geometric-series expansion, known below `out_precision`.

        Exact monomials invert exactly and need no bound.
        """
        if not self._terms:
            msg = "Cannot invert at this precision: no known term"
            raise ZeroDivisionSeriesError(msg)
        lead_exp, lead_coeff = next(iter(self._terms.items()))
        inverse_coeff = self._preset.residue.one / lead_coeff
        unit = self.shift(-lead_exp).scale(inverse_coeff)
        rest = unit - self._preset.one()
        if rest.is_exact_zero():
            return self._preset.monomial(-lead_exp, inverse_coeff)
        if out_precision is None:
            msg = "Inverting a non-monomial series needs an output precision"
            raise PrecisionExhaustedError(msg)
        relative = ext_min(out_precision + lead_exp, unit.precision)
        if isinstance(relative, GroupElement) and relative.sign() <= 0:
            return Series(self._preset, {}, relative).shift(-lead_exp)
        step = rest.lower_bound()
        if not isinstance(step, GroupElement):
            step = relative  # type: ignore[assignment]
        if (
            isinstance(relative, GroupElement)
            and step < relative
            and step.leading_index() > relative.leading_index()
        ):
            msg = f"Geometric expansion with step {step} never reaches {relative}"
            raise PrecisionExhaustedError(msg, out_precision)
        rest = rest.truncate(relative)
        result = self._preset.one().truncate(relative)
        power = self._preset.one()
        rounds = 0
        while True:
            power = (power * -rest).truncate(relative)
            if not power.has_terms():
                break
            result = result + power
            rounds += 1
        log_debug(LOGGER, "invert_truncated", rounds=rounds, precision=relative)
        return Series(self._preset, result._terms, relative).shift(-lead_exp).scale(inverse_coeff)

    def derive(self) -> Series:
        """Termwise derivation; precision moves by the preset's shift."""
        terms: dict[GroupElement, Any] = {}
        for exponent, coeff in self._terms.items():
            for new_exp, new_coeff in self._preset.derive_term(exponent, coeff):
                terms[new_exp] = terms[new_exp] + new_coeff if new_exp in terms else new_coeff
        residue = self._preset.residue
        return Series(
            self._preset,
            {e: c for e, c in terms.items() if not residue.is_zero(c)},
            self._precision + self._preset.derivation_shift(),
        )

    def nth_derivative(self, n: int) -> Series:
        value = self
        for _ in range(n):
            value = value.derive()
        return value

    # Comparison and rendering

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self._preset == other._preset
            and self._precision == other._precision
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._precision, tuple(self._terms.items())))
        return self._hash

    def render(self) -> str:
        """Sum of coeff*t^e terms in increasing order, plus O(t^p) if truncated."""
        residue = self._preset.residue
        parts: list[str] = []
        for exponent, coeff in self._terms.items():
            monomial = render_power(exponent)
            text = residue.render(coeff)
            atomic = residue.is_atomic(coeff)
            negative = atomic and text.startswith("-")
            if negative:
                text = text[1:]
            if not atomic:
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
        if self._precision is not INFINITY:
            big_o = f"O({render_power(self._precision, bare=False)})"  # type: ignore[arg-type]
            parts.append(f"+ {big_o}" if parts else big_o)
        return " ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Series({self.render()})"


def render_power(exponent: GroupElement, *, bare: bool = True) -> str:
    """t, t^2, t^(1/2), t^(1,-5); empty for t^0 unless `bare` is False."""
    if exponent.is_zero() and bare:
        return ""
    if exponent.dim > 1:
        return "t^(" + ",".join(exponent.render()) + ")"
    value = exponent.scalar
    if value == 1:
        return "t"
    if value.denominator == 1 and value > 0:
        return f"t^{value.numerator}"
    return f"t^({fmt_rational(value)})"


# Operations on series


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    return a * b


def negate(a: Series) -> Series:
    return -a


def invert(a: Series, out_precision: GroupElement | None = None) -> Series:
    return a.invert(out_precision)


def valuation(a: Series) -> ExtGroupElement | BelowPrecision:
    return a.valuation()


def derive(a: Series) -> Series:
    return a.derive()


def dominant_split(f: Series) -> tuple[GroupElement, Series]:
    """f = t^v(f)·u_f with u_f ≍ 1."""
    value = f.valuation()
    if not isinstance(value, GroupElement):
        msg = f"Cannot split a zero or below-precision series ({value})"
        raise ZeroDivisionSeriesError(msg)
    return value, f.shift(-value)


def residue(a: Series) -> Any:
    """Image in the residue field; requires v(a) >= 0."""
    bound = a.lower_bound()
    zero = a.preset.zero_exponent()
    if bound < zero:
        msg = f"Residue needs v(a) >= 0, got {bound}"
        raise ValuationError(msg)
    if not a.precision > zero:
        msg = "Residue is below the available precision"
        raise PrecisionExhaustedError(msg, zero)
    return a.coefficient(zero)


def dominance(a: Series, b: Series) -> Relation:
    """Strongest dominance relation of a to b, if decidable."""
    va, vb = a.valuation(), b.valuation()
    if isinstance(va, BelowPrecision) or isinstance(vb, BelowPrecision):
        return Relation.INCOMPARABLE
    if va > vb:
        return Relation.PREC
    if va < vb:
        return Relation.SUCC
    if va is INFINITY:
        return Relation.ASYMP
    difference = (a - b).valuation()
    if isinstance(difference, BelowPrecision):
        return Relation.SIM
    return Relation.SIM if difference > vb else Relation.ASYMP


def precedes(a: Series, b: Series) -> bool:
    return dominance(a, b) is Relation.PREC


def preceq(a: Series, b: Series) -> bool:
    return dominance(a, b) in {Relation.PREC, Relation.ASYMP, Relation.SIM}


def coarse_relation(va: GroupElement, vb: GroupElement, v_phi: GroupElement) -> Relation:
    """Coarsened dominance from valuations: ≍_φ, ≺_φ or ≻_φ."""
    if in_gamma_phi(va - vb, v_phi):
        return Relation.ASYMP
    return Relation.PREC if va > vb else Relation.SUCC


def coarse_dominance(a: Series, b: Series, phi_value: GroupElement) -> Relation:
    """a ≼_φ b iff v(a)-v(b) ∈ Γ_φ or v(a) > v(b)."""
    return coarse_relation(a.nonzero_valuation(), b.nonzero_valuation(), phi_value)


@dataclass(frozen=True)
class FieldCheckReport:
    """Outcome of a sampled field-axiom check."""

    check: str
    preset: str
    dim: int
    samples: int
    passed: bool
    counterexample: str | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "preset": self.preset,
            "dim": self.dim,
            "samples": self.samples,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def check_small_derivation(
    preset: FieldPreset, sample_count: int, seed: int = 0
) -> FieldCheckReport:
    """Sample f in the maximal ideal and check v(f') > 0."""
    rng = random.Random(seed)
    zero = preset.zero_exponent()
    for _ in range(sample_count):
        f = preset.random_series(rng, positive=True)
        value = f.derive().known_valuation()
        if not value > zero:
            return FieldCheckReport(
                "small-derivation", preset.name, preset.dim, sample_count, passed=False,
                counterexample=f"f = {f.render()}, f' = {f.derive().render()}",
            )
    return FieldCheckReport("small-derivation", preset.name, preset.dim, sample_count, passed=True)


def check_asymptotic(preset: FieldPreset, sample_count: int, seed: int = 0) -> FieldCheckReport:
    """Sample nonzero f, g in the maximal ideal and check f ≺ g iff f' ≺ g'."""
    rng = random.Random(seed)
    for _ in range(sample_count):
        f = preset.random_series(rng, positive=True)
        g = preset.random_series(rng, positive=True)
        before = precedes(f, g)
        after = precedes(f.derive(), g.derive())
        if before != after:
            return FieldCheckReport(
                "asymptotic", preset.name, preset.dim, sample_count, passed=False,
                counterexample=f"f = {f.render()}, g = {g.render()}",
            )
    return FieldCheckReport("asymptotic", preset.name, preset.dim, sample_count, passed=True)


__all__ = [
    "PRESET_H_TYPE",
    "PRESET_MONOTONE",
    "BelowPrecision",
    "FieldCheckReport",
    "FieldPreset",
    "Relation",
    "Series",
    "add",
    "check_asymptotic",
    "check_small_derivation",
    "coarse_dominance",
    "derive",
    "dominance",
    "dominant_split",
    "get_preset",
    "invert",
    "mul",
    "negate",
    "residue",
    "valuation",
]
