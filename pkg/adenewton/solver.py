"""Quasilinear lifting and the Newton-diagram branching solver."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Any

from .ade import ADE, ddeg_of, enumerate_approx_solutions, is_unravelled, refine
from .const import DEFAULT_BRANCH_BOUND, DEFAULT_DEPTH, DEFAULT_LIFT_STEPS, LOGGER
from .dominant import EConstraint, ddeg, dominant_part, mul_conjugate_exponent
from .errors import AdeNewtonError, ValuationError
from .log_utils import log_debug, log_warning
from .newton import algebraic_starting_monomials
from .residue import ResidueFragment, ResiduePoly, ResidueSolverReport, residue_solve
from .series import BelowPrecision, Series
from .valgroup import INFINITY, ExtGroupElement, GroupElement, fmt_rational

if TYPE_CHECKING:
    from .diffpoly import DiffPoly
    from .polybase import MultiIndex


class BranchStatus(StrEnum):
    SOLVED_TO_PRECISION = "SolvedToPrecision"
    EXACT_ROOT = "ExactRoot"
    STUCK_RESIDUE = "StuckResidue"
    STUCK_NO_STARTING_MONOMIAL = "StuckNoStartingMonomial"
    NON_QUASILINEAR_UNRAVELLED = "NonQuasilinearUnravelled"
    DEPTH_EXCEEDED = "DepthExceeded"


SOLVED = frozenset({BranchStatus.SOLVED_TO_PRECISION, BranchStatus.EXACT_ROOT})


@dataclass(frozen=True)
class TraceStep:
    """One choice: the term root·t^exponent."""

    exponent: GroupElement
    root: Any


@dataclass(frozen=True)
class SolutionBranch:
    """
    A leaf of the solver tree.

    `y` is exact and equals the sum of the trace terms; `precision` is where
    the reported solution is cut off (INFINITY for exact roots).
    """

    y: Series
    status: BranchStatus
    trace: tuple[TraceStep, ...]
    residual_valuation: ExtGroupElement | BelowPrecision
    precision: ExtGroupElement = INFINITY
    reason: str | None = None

    @property
    def solved(self) -> bool:
        return self.status in SOLVED

    @property
    def reported(self) -> Series:
        """y as reported: cut off at the target for SolvedToPrecision."""
        return self.y.truncate(self.precision)

    def trace_key(self) -> tuple:
        residue = self.y.preset.residue
        return tuple((step.exponent.coords, residue.sort_key(step.root)) for step in self.trace)

    def prefixed(self, f: Series, trace: tuple[TraceStep, ...]) -> SolutionBranch:
        return SolutionBranch(
            f + self.y,
            self.status,
            trace + self.trace,
            self.residual_valuation,
            self.precision,
            self.reason,
        )

    def as_dict(self) -> dict[str, Any]:
        residue = self.y.preset.residue
        residual = self.residual_valuation
        if isinstance(residual, GroupElement):
            rendered = fmt_rational(residual.scalar) if residual.dim == 1 else str(residual)
        else:
            rendered = str(residual) if residual is INFINITY else f">={residual.bound}"
        return {
            "y": self.reported.render(),
            "status": str(self.status),
            "residual_valuation": rendered,
            "trace": [
                {"exponent": str(step.exponent), "root": residue.render(step.root)}
                for step in self.trace
            ],
            "reason": self.reason,
        }


def is_quasilinear(eq: ADE) -> bool:
    return ddeg_of(eq) == 1


def _solved_to(residual: Series, target: GroupElement) -> bool:
    value = residual.valuation()
    if isinstance(value, BelowPrecision):
        return value.bound >= target
    return value >= target


def lift_quasilinear(
    eq: ADE, target: GroupElement, max_steps: int = DEFAULT_LIFT_STEPS
) -> SolutionBranch:
    """
    Newton-lift a quasilinear equation term by term.

    Each step takes the starting monomial t^m of the refined equation,
    solves its residue equation for ū and refines by ū·t^m with ℰ' = {v > m}.
    """
    if not is_quasilinear(eq):
        msg = f"lift_quasilinear needs dominant degree 1, got {ddeg_of(eq)} for {eq}"
        raise ValuationError(msg)
    preset = eq.poly.preset
    y = preset.zero()
    current = eq
    trace: list[TraceStep] = []
    previous: ExtGroupElement | None = None

    def leaf(status: BranchStatus, residual: Any, reason: str | None = None) -> SolutionBranch:
        precision = target if status is BranchStatus.SOLVED_TO_PRECISION else INFINITY
        return SolutionBranch(y, status, tuple(trace), residual, precision, reason)

    for _ in range(max_steps):
        residual = eq.poly.evaluate(y)
        value = residual.valuation()
        if value is INFINITY:
            return leaf(BranchStatus.EXACT_ROOT, value)
        if isinstance(value, GroupElement):
            if previous is not None and not value > previous:
                msg = f"Residual valuation did not increase: {previous} then {value}"
                raise AdeNewtonError(msg)
            previous = value
        reached = _solved_to(residual, target)
        monomials = algebraic_starting_monomials(current.poly, current.constraint)
        if not monomials:
            if reached:
                return leaf(BranchStatus.SOLVED_TO_PRECISION, value)
            return leaf(BranchStatus.STUCK_NO_STARTING_MONOMIAL, value)
        exponent = monomials[-1]
        if reached and exponent >= target:
            return leaf(BranchStatus.SOLVED_TO_PRECISION, value)
        dominant = dominant_part(mul_conjugate_exponent(current.poly, exponent))
        report = residue_solve(dominant)
        roots = [r for r in report.roots if not preset.residue.is_zero(r)]
        if not roots:
            return leaf(
                BranchStatus.STUCK_RESIDUE, value, report.reason or "no nonzero residue root"
            )
        term = preset.monomial(exponent, roots[0])
        y = y + term
        trace.append(TraceStep(exponent, roots[0]))
        current = refine(current, term, EConstraint.val_gt(exponent))
        log_debug(LOGGER, "lift_step", exponent=exponent, root=preset.residue.render(roots[0]))
    return leaf(BranchStatus.DEPTH_EXCEEDED, eq.poly.evaluate(y).valuation(), "lift step bound")


@dataclass(frozen=True)
class _Node:
    eq: ADE
    f: Series
    trace: tuple[TraceStep, ...]
    depth: int


def solve(
    eq: ADE,
    target: GroupElement,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
    depth: int = DEFAULT_DEPTH,
) -> list[SolutionBranch]:
    """Breadth-first branching over starting monomials and residue roots."""
    preset = eq.poly.preset
    queue: deque[_Node] = deque([_Node(eq, preset.zero(), (), 0)])
    leaves: list[SolutionBranch] = []
    warned = False

    def room() -> bool:
        nonlocal warned
        if len(leaves) + len(queue) < branch_bound:
            return True
        if not warned:
            log_warning(LOGGER, "branch_bound_reached", bound=branch_bound)
            warned = True
        return False

    def stuck(node: _Node, status: BranchStatus, reason: str | None = None) -> None:
        if room():
            residual = eq.poly.evaluate(node.f).valuation()
            leaves.append(SolutionBranch(node.f, status, node.trace, residual, INFINITY, reason))

    while queue:
        node = queue.popleft()
        degree = ddeg_of(node.eq)
        if degree <= 1:
            if degree == 0:
                residual = eq.poly.evaluate(node.f)
                status = (
                    BranchStatus.EXACT_ROOT
                    if residual.is_exact_zero()
                    else BranchStatus.STUCK_NO_STARTING_MONOMIAL
                )
                stuck(node, status)
            elif room():
                leaves.append(lift_quasilinear(node.eq, target).prefixed(node.f, node.trace))
            continue
        if node.depth >= depth:
            status = (
                BranchStatus.NON_QUASILINEAR_UNRAVELLED
                if is_unravelled(node.eq)
                else BranchStatus.DEPTH_EXCEEDED
            )
            stuck(node, status)
            continue
        found = enumerate_approx_solutions(node.eq, 1)
        for unsolved in found.unsolved:
            stuck(node, BranchStatus.STUCK_RESIDUE, unsolved.report.reason)
        for _exponent in found.rootless:
            stuck(node, BranchStatus.STUCK_RESIDUE, "no nonzero residue root")
        if not found.solutions and not found.unsolved and not found.rootless:
            stuck(node, BranchStatus.STUCK_NO_STARTING_MONOMIAL)
        for choice in found.solutions:
            if not room():
                break
            queue.append(
                _Node(
                    refine(node.eq, choice.y, EConstraint.val_gt(choice.exponent)),
                    node.f + choice.y,
                    (*node.trace, TraceStep(choice.exponent, choice.root)),
                    node.depth + 1,
                )
            )

    results = []
    for branch in leaves:
        if branch.solved and branch.y.is_exact_zero():
            log_debug(LOGGER, "branch_leaf", status=branch.status, skipped="zero")
            continue
        if branch.solved and not verify_solution(eq.poly, branch.y, eq.constraint, target):
            msg = f"Branch {branch.y} failed verification for {eq}"
            raise AdeNewtonError(msg)
        log_debug(LOGGER, "branch_leaf", status=branch.status, y=branch.reported)
        results.append(branch)
    return sorted(results, key=SolutionBranch.trace_key)


def best_approx(branches: list[SolutionBranch], f: Series) -> SolutionBranch:
    """The solved branch maximizing v(y - f); the first one wins ties."""
    solved = [b for b in branches if b.solved]
    if not solved:
        msg = "best_approx needs at least one solved branch"
        raise AdeNewtonError(msg)
    best = solved[0]
    best_value = (best.y - f).known_valuation()
    for branch in solved[1:]:
        value = (branch.y - f).known_valuation()
        if value > best_value:
            best, best_value = branch, value
    return best


@dataclass(frozen=True)
class DeltaCompanion:
    """ΔP = (∂^i)_{×𝔣} P with the chosen j and i."""

    delta: DiffPoly
    index: MultiIndex
    j_index: MultiIndex
    exponent: GroupElement

    def as_dict(self) -> dict[str, Any]:
        return {
            "delta": self.delta.render(),
            "i": list(self.index),
            "j": list(self.j_index),
            "exponent": str(self.exponent),
        }


def delta_companion(p: DiffPoly, exponent: GroupElement) -> DeltaCompanion:
    """
    Quasilinear companion of P at 𝔣 = t^exponent.

    j is the lex-least multi-index of degree d = ddeg P_{×𝔣} whose coefficient
    is dominant in P_{×𝔣}; i is j with one unit removed at its last nonzero entry.
    """
    monomial = p.preset.monomial(exponent)
    conjugated = p.mul_conjugate(monomial)
    degree = ddeg(conjugated)
    if degree == 0:
        msg = f"delta_companion needs ddeg P×t^{exponent} >= 1"
        raise ValuationError(msg)
    lead = conjugated.known_v()
    j_index = min(
        index
        for index, coeff in conjugated.items()
        if sum(index) == degree and coeff.nonzero_valuation() == lead
    )
    last = max(k for k, power in enumerate(j_index) if power)
    index = tuple(power - int(k == last) for k, power in enumerate(j_index))
    delta = p.partial_mult_conjugated(index, monomial)
    if ddeg(delta.mul_conjugate(monomial)) != 1:
        msg = f"Companion {delta} of {p} is not quasilinear at t^{exponent}"
        raise AdeNewtonError(msg)
    return DeltaCompanion(delta, index, j_index, exponent)


def verify_solution(
    p: DiffPoly, y: Series, constraint: EConstraint, target: GroupElement
) -> bool:
    """y ∈ ℰ and v(P(y)) >= target, or P(y) exactly zero."""
    if y.is_exact_zero() or not y.has_terms() or not constraint.contains(y):
        return False
    residual = p.evaluate(y)
    if residual.is_exact_zero():
        return True
    return _solved_to(residual, target)


__all__ = [
    "BranchStatus",
    "DeltaCompanion",
    "ResidueFragment",
    "ResiduePoly",
    "ResidueSolverReport",
    "SolutionBranch",
    "TraceStep",
    "best_approx",
    "delta_companion",
    "is_quasilinear",
    "lift_quasilinear",
    "residue_solve",
    "solve",
    "verify_solution",
]
