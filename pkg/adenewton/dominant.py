"""Dominant parts, dominant degree and multiplicity, and ≼-closed constraints."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Any

from .errors import DimensionMismatchError, InvalidConstraintError, ValuationError
from .residue import ResiduePoly, ResidueSolverReport, residue_solve
from .series import Series, render_power, residue
from .valgroup import INFINITY, GroupElement

if TYPE_CHECKING:
    from .diffpoly import DiffPoly


class ConstraintKind(StrEnum):
    ALL = "all"
    VAL_GE = "val_ge"
    VAL_GT = "val_gt"


@dataclass(frozen=True)
class EConstraint:
    """
    A ≼-closed set ℰ ⊆ K^×.

    ALL is K^×, VAL_GE(γ) is {f : v(f) >= γ} ("Y ≼ t^γ") and VAL_GT(γ) is
    {f : v(f) > γ} ("Y ≺ t^γ").
    """

    kind: ConstraintKind
    gamma: GroupElement | None = None

    def __post_init__(self) -> None:
        """Check that gamma is present exactly for the bounded kinds."""
        if (self.kind is ConstraintKind.ALL) != (self.gamma is None):
            msg = f"Constraint {self.kind} has an inconsistent bound {self.gamma}"
            raise InvalidConstraintError(msg)

    @classmethod
    def all(cls) -> EConstraint:
        return cls(ConstraintKind.ALL)

    @classmethod
    def val_ge(cls, gamma: GroupElement) -> EConstraint:
        return cls(ConstraintKind.VAL_GE, gamma)

    @classmethod
    def val_gt(cls, gamma: GroupElement) -> EConstraint:
        return cls(ConstraintKind.VAL_GT, gamma)

    def contains_exponent(self, value: GroupElement) -> bool:
        if self.kind is ConstraintKind.VAL_GE:
            return value >= self.gamma  # type: ignore[operator]
        if self.kind is ConstraintKind.VAL_GT:
            return value > self.gamma  # type: ignore[operator]
        return True

    def contains(self, y: Series) -> bool:
        """Membership of y; zero is never a member."""
        value = y.known_valuation()
        if value is INFINITY:
            return False
        return self.contains_exponent(value)  # type: ignore[arg-type]

    def is_subset_of(self, other: EConstraint) -> bool:
        if other.kind is ConstraintKind.ALL:
            return True
        if self.kind is ConstraintKind.ALL:
            return False
        if self.kind is ConstraintKind.VAL_GE and other.kind is ConstraintKind.VAL_GT:
            return self.gamma > other.gamma  # type: ignore[operator]
        return self.gamma >= other.gamma  # type: ignore[operator]

    def shifted(self, delta: GroupElement) -> EConstraint:
        """aℰ for v(a) = delta."""
        if self.gamma is None:
            return self
        return EConstraint(self.kind, self.gamma + delta)

    def render(self) -> str:
        if self.gamma is None:
            return "Y in K*"
        relation = "≼" if self.kind is ConstraintKind.VAL_GE else "≺"
        return f"Y {relation} {render_power(self.gamma) or '1'}"

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": str(self.kind),
            "gamma": self.gamma.render() if self.gamma is not None else None,
        }

    def __str__(self) -> str:
        return self.render()


def _require_dim_one(p: DiffPoly) -> None:
    if p.preset.dim != 1:
        msg = f"Dominant degree on constraints needs Γ = ℚ, preset has dimension {p.preset.dim}"
        raise DimensionMismatchError(msg)


def mul_conjugate_exponent(p: DiffPoly, gamma: GroupElement) -> DiffPoly:
    """P_{×t^γ}."""
    return p.mul_conjugate(p.preset.monomial(gamma))


def dominant_monomial(p: DiffPoly) -> GroupElement:
    """Exponent of 𝔡_P, i.e. v(P)."""
    if p.is_zero() and p.is_exact():
        msg = "The zero polynomial has no dominant monomial"
        raise ValuationError(msg)
    return p.known_v()


def dominant_part(p: DiffPoly) -> ResiduePoly:
    """D_P, the residue image of 𝔡_P⁻¹·P."""
    lead = dominant_monomial(p)
    zero = p.preset.zero_exponent()
    coeffs = {}
    for index, coeff in p.items():
        value = coeff.shift(-lead).coefficient(zero)
        if not p.preset.residue.is_zero(value):
            coeffs[index] = value
    return ResiduePoly(p.preset.residue, p.order_bound, coeffs, truncated=not p.is_exact())


def ddeg(p: DiffPoly) -> int:
    return dominant_part(p).degree()


def dmul(p: DiffPoly) -> int:
    return dominant_part(p).multiplicity()


def ddeg_on(p: DiffPoly, constraint: EConstraint) -> int:
    """ddeg_ℰ P; the ALL case is deg P."""
    _require_dim_one(p)
    if constraint.kind is ConstraintKind.ALL:
        return p.degree()
    conjugated = mul_conjugate_exponent(p, constraint.gamma)  # type: ignore[arg-type]
    if constraint.kind is ConstraintKind.VAL_GE:
        return ddeg(conjugated)
    return dmul(conjugated)


def dmul_on(p: DiffPoly, constraint: EConstraint) -> int:
    """Least dominant multiplicity over ℰ; the ALL case is mul P."""
    _require_dim_one(p)
    if constraint.kind is ConstraintKind.ALL:
        return p.multiplicity()
    return dmul(mul_conjugate_exponent(p, constraint.gamma))  # type: ignore[arg-type]


def residue_multiplicity_at(p: DiffPoly, u: Series) -> int:
    """mul (D_P)_{+ū} for a unit u."""
    if u.known_valuation() != u.preset.zero_exponent():
        msg = f"Expected v(u) = 0, got {u.valuation()}"
        raise ValuationError(msg)
    return dominant_part(p).add_conjugate(residue(u)).multiplicity()


__all__ = [
    "ConstraintKind",
    "EConstraint",
    "ResiduePoly",
    "ResidueSolverReport",
    "ddeg",
    "ddeg_on",
    "dmul",
    "dmul_on",
    "dominant_monomial",
    "dominant_part",
    "mul_conjugate_exponent",
    "residue_multiplicity_at",
    "residue_solve",
]
