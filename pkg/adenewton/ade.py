"""Asymptotic differential equations P(Y) = 0, Y ∈ ℰ."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Any

from .const import LOGGER
from .dominant import (
    EConstraint,
    ddeg,
    ddeg_on,
    dmul,
    dominant_part,
    mul_conjugate_exponent,
)
from .errors import (
    AdeNewtonError,
    InvalidChainError,
    InvalidConstraintError,
    ValuationError,
)
from .log_utils import log_debug, log_warning
from .newton import algebraic_starting_monomials
from .residue import ResidueSolverReport, residue_solve
from .series import BelowPrecision, Series, render_power
from .valgroup import INFINITY, GroupElement, fmt_rational

if TYPE_CHECKING:
    from .diffpoly import DiffPoly


@dataclass(frozen=True)
class ADE:
    """The equation P(Y) = 0 with Y ∈ ℰ."""

    poly: DiffPoly
    constraint: EConstraint

    def ddeg(self) -> int:
        return ddeg_on(self.poly, self.constraint)

    def truncated(self, degree: int) -> ADE:
        """(P_{<=d}, ℰ)."""
        return ADE(self.poly.truncate_deg(degree), self.constraint)

    def render(self) -> str:
        return f"{self.poly.render()} = 0 where {self.constraint.render()}"

    def __str__(self) -> str:
        return self.render()


def ddeg_of(eq: ADE) -> int:
    return eq.ddeg()


@dataclass(frozen=True)
class CutChain:
    """A finite chain a_0, ..., a_m with strictly increasing v(a_(ρ+1) - a_ρ)."""

    points: tuple[Series, ...]

    def __post_init__(self) -> None:
        """Reject empty chains and non-increasing steps."""
        if not self.points:
            msg = "A cut chain needs at least one point"
            raise InvalidChainError(msg)
        self.steps()

    def steps(self) -> list[GroupElement]:
        gammas: list[GroupElement] = []
        for current, following in zip(self.points, self.points[1:], strict=False):
            value = (following - current).valuation()
            if not isinstance(value, GroupElement):
                msg = f"Consecutive chain points {current} and {following} are not distinguishable"
                raise InvalidChainError(msg)
            if gammas and value <= gammas[-1]:
                msg = f"Chain steps must increase strictly, got {gammas[-1]} then {value}"
                raise InvalidChainError(msg)
            gammas.append(value)
        return gammas


def refine(eq: ADE, f: Series, constraint: EConstraint) -> ADE:
    """(P_{+f}, ℰ') for ℰ' ⊆ ℰ and f ∈ ℰ ∪ {0}."""
    if not constraint.is_subset_of(eq.constraint):
        msg = f"Refinement constraint {constraint} is not contained in {eq.constraint}"
        raise InvalidConstraintError(msg)
    if not f.is_exact_zero() and not eq.constraint.contains(f):
        msg = f"Refinement shift {f} does not lie in {eq.constraint}"
        raise InvalidConstraintError(msg)
    return ADE(eq.poly.add_conjugate(f), constraint)


def is_approx_solution(eq: ADE, y: Series) -> tuple[bool, int]:
    """(ddeg_{≺y} P_{+y} >= 1, ddeg_{≺y} P_{+y})."""
    if y.is_exact_zero():
        msg = "Approximate solutions are nonzero"
        raise ValuationError(msg)
    if not eq.constraint.contains(y):
        msg = f"{y} does not lie in {eq.constraint}"
        raise InvalidConstraintError(msg)
    exponent = y.nonzero_valuation()
    multiplicity = dmul(mul_conjugate_exponent(eq.poly.add_conjugate(y), exponent))
    return multiplicity >= 1, multiplicity


@dataclass(frozen=True)
class ApproxSolution:
    """y = ū·t^m with its multiplicity ddeg_{≺y} P_{+y}."""

    exponent: GroupElement
    root: Any
    multiplicity: int
    y: Series

    def as_dict(self) -> dict[str, Any]:
        return {
            "exponent": fmt_rational(self.exponent.scalar),
            "root": self.y.preset.residue.render(self.root),
            "multiplicity": self.multiplicity,
            "y": self.y.render(),
        }


@dataclass(frozen=True)
class UnsolvedMonomial:
    """A starting monomial whose dominant part the residue solver could not handle."""

    exponent: GroupElement
    degree: int
    report: ResidueSolverReport

    def as_dict(self) -> dict[str, Any]:
        return {
            "exponent": fmt_rational(self.exponent.scalar),
            "degree": self.degree,
            "reason": self.report.reason,
        }


@dataclass(frozen=True)
class ApproxEnumeration:
    """Approximate solutions, plus monomials that produced none."""

    solutions: tuple[ApproxSolution, ...] = ()
    unsolved: tuple[UnsolvedMonomial, ...] = ()
    rootless: tuple[GroupElement, ...] = ()


def _monomial_roots(eq: ADE, exponent: GroupElement) -> tuple[Any, ResidueSolverReport]:
    dominant = dominant_part(mul_conjugate_exponent(eq.poly, exponent))
    return dominant, residue_solve(dominant)


def enumerate_approx_solutions(eq: ADE, min_multiplicity: int = 1) -> ApproxEnumeration:
    """Approximate solutions ū·t^m over the algebraic starting monomials in ℰ."""
    preset = eq.poly.preset
    solutions: list[ApproxSolution] = []
    unsolved: list[UnsolvedMonomial] = []
    rootless: list[GroupElement] = []
    for exponent in sorted(algebraic_starting_monomials(eq.poly, eq.constraint)):
        dominant, report = _monomial_roots(eq, exponent)
        if not report.ok:
            log_warning(
                LOGGER, "residue_unsolvable", exponent=exponent, dominant=dominant,
                reason=report.reason,
            )
            unsolved.append(UnsolvedMonomial(exponent, dominant.degree(), report))
            continue
        if not any(not preset.residue.is_zero(root) for root in report.roots):
            rootless.append(exponent)
        for root in report.roots:
            if preset.residue.is_zero(root):
                continue
            multiplicity = dominant.add_conjugate(root).multiplicity()
            if multiplicity >= min_multiplicity:
                solutions.append(
                    ApproxSolution(exponent, root, multiplicity, preset.monomial(exponent, root))
                )
    return ApproxEnumeration(tuple(solutions), tuple(unsolved), tuple(rootless))


def is_unravelled(eq: ADE) -> bool:
    """No approximate solution of multiplicity ddeg_ℰ P; unknown roots count against it."""
    degree = ddeg_of(eq)
    if degree == 0:
        msg = "Unravelledness needs dominant degree at least 1"
        raise ValuationError(msg)
    found = enumerate_approx_solutions(eq, degree)
    if found.solutions:
        return False
    blocking = [u for u in found.unsolved if u.degree >= degree]
    if blocking:
        log_warning(
            LOGGER, "unravelled_unknown", equation=eq,
            monomials=[u.exponent for u in blocking],
        )
        return False
    return True


class UnravelStatus(StrEnum):
    UNRAVELLED = "Unravelled"
    DEPTH_EXCEEDED = "DepthExceeded"
    RESIDUE_UNSOLVABLE = "ResidueUnsolvable"
    EXACT_MULTIPLICITY_HIT = "ExactMultiplicityHit"


@dataclass(frozen=True)
class UnravelResult:
    """A partial unraveller (f, ℰ') and why the loop stopped."""

    f: Series
    constraint: EConstraint
    status: UnravelStatus
    ddeg: int
    steps: tuple[ApproxSolution, ...] = field(default=())
    truncated: bool = False

    def refined(self, eq: ADE) -> ADE:
        return ADE(eq.poly.add_conjugate(self.f), self.constraint)

    def as_dict(self) -> dict[str, Any]:
        return {
            "f": self.f.render(),
            "constraint": self.constraint.render(),
            "status": str(self.status),
            "ddeg": self.ddeg,
            "steps": [step.as_dict() for step in self.steps],
            "truncated": self.truncated,
        }


def unravel(eq: ADE, depth: int, *, truncated: bool = False) -> UnravelResult:
    """
    Refine by approximate solutions of full multiplicity until none is left.

    With `truncated`, the loop runs on (P_{<=d}, ℰ) instead of (P, ℰ).
    """
    degree = ddeg_of(eq)
    if degree == 0:
        msg = "Unravelling needs dominant degree at least 1"
        raise ValuationError(msg)
    base = eq.truncated(degree) if truncated else eq
    f = base.poly.preset.zero()
    current = base
    taken: list[ApproxSolution] = []
    while True:
        if current.poly.multiplicity() == degree:
            status = UnravelStatus.EXACT_MULTIPLICITY_HIT
            break
        found = enumerate_approx_solutions(current, degree)
        if not found.solutions:
            blocking = any(u.degree >= degree for u in found.unsolved)
            status = (
                UnravelStatus.RESIDUE_UNSOLVABLE if blocking else UnravelStatus.UNRAVELLED
            )
            break
        if len(taken) >= depth:
            status = UnravelStatus.DEPTH_EXCEEDED
            break
        choice = found.solutions[0]
        current = refine(current, choice.y, EConstraint.val_gt(choice.exponent))
        f = f + choice.y
        taken.append(choice)
        if ddeg_of(current) != degree:
            msg = f"Refinement by {choice.y} changed the dominant degree of {eq}"
            raise AdeNewtonError(msg)
        log_debug(
            LOGGER, "unravel_step", step=len(taken), y=choice.y,
            constraint=current.constraint,
        )
    log_debug(LOGGER, "unravel_done", status=status, steps=len(taken), f=f)
    return UnravelResult(f, current.constraint, status, degree, tuple(taken), truncated)


def shift_multiplicative(
    a: Series, eq: ADE, precision: GroupElement | None = None
) -> ADE:
    """(P_{×a⁻¹}, aℰ); a non-monomial a needs an inversion precision."""
    if not a.has_terms():
        msg = f"Cannot shift by {a}: not detectably nonzero"
        raise ValuationError(msg)
    inverse = a.invert(precision)
    return ADE(eq.poly.mul_conjugate(inverse), eq.constraint.shifted(a.nonzero_valuation()))


@dataclass(frozen=True)
class WitnessDdeg:
    a: Series
    v: Series
    ddeg: int

    @property
    def vanishes(self) -> bool:
        return self.ddeg >= 1

    def as_dict(self) -> dict[str, Any]:
        return {
            "a": self.a.render(),
            "v": self.v.render(),
            "ddeg": self.ddeg,
            "vanishes": self.vanishes,
        }


@dataclass(frozen=True)
class VanishingReport:
    witnesses: tuple[WitnessDdeg, ...]

    @property
    def results(self) -> list[bool]:
        return [w.vanishes for w in self.witnesses]

    @property
    def upper_bound(self) -> int | None:
        """min ddeg_{≺𝔳} P_{+a}; an upper bound for the dominant degree in the cut."""
        return min((w.ddeg for w in self.witnesses), default=None)


def vanishes_along(
    p: DiffPoly, chain: CutChain, witnesses: list[tuple[Series, Series]]
) -> VanishingReport:
    """ddeg_{≺𝔳} P_{+a} for witnesses with a - ℓ ≺ 𝔳 certified by the chain."""
    steps = chain.steps()
    last = chain.points[-1]
    results = []
    for a, v in witnesses:
        scale = v.nonzero_valuation()
        gap = (a - last).valuation()
        if isinstance(gap, BelowPrecision) or not steps:
            msg = f"Witness ({a}, {v}) cannot be certified at the chain's precision"
            raise InvalidChainError(msg)
        if not (gap is INFINITY or gap > scale) or steps[-1] < scale:
            msg = f"Witness ({a}, {v}) is not within {render_power(scale) or '1'} of the chain"
            raise InvalidChainError(msg)
        results.append(WitnessDdeg(a, v, dmul(mul_conjugate_exponent(p.add_conjugate(a), scale))))
    return VanishingReport(tuple(results))


def truncate_equation(eq: ADE, degree: int) -> ADE:
    return eq.truncated(degree)


def reduced_for_refinement(p: DiffPoly, g: Series, degree: int) -> DiffPoly:
    """P_{<=d}, valid for refinements by g when ddeg P = ddeg P_{×g} = d."""
    if ddeg(p) != degree or ddeg(p.mul_conjugate(g)) != degree:
        msg = f"Degree reduction needs ddeg P = ddeg P×g = {degree}"
        raise ValuationError(msg)
    return p.truncate_deg(degree)
