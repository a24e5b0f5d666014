"""Report types returned by the command dispatcher."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from .series import BelowPrecision

if TYPE_CHECKING:
    from .ade import ADE, ApproxEnumeration, UnravelResult
    from .diffpoly import Complexity, DiffPoly
    from .newton import ChainDdeg, NewtonDiagram, VPFunction
    from .residue import ResiduePoly
    from .series import FieldCheckReport, Series
    from .solver import SolutionBranch
    from .valgroup import ExtGroupElement, GroupElement


def render_value(value: ExtGroupElement | BelowPrecision) -> str:
    """A valuation as text: "3/2", "(1,-5)", "inf" or ">=p"."""
    if isinstance(value, BelowPrecision):
        return f">={value.bound}"
    return str(value)


@dataclass(frozen=True)
class AnalyzeReport:
    """Everything the library can say about one ADE."""

    equation: ADE
    complexity: Complexity
    multiplicity: int
    valuation: ExtGroupElement | BelowPrecision
    dominant: ResiduePoly
    ddeg: int
    quasilinear: bool
    diagram: NewtonDiagram | None = None
    approx: ApproxEnumeration | None = None
    unravelled: bool | None = None
    unravel: UnravelResult | None = None

    @property
    def stuck(self) -> bool:
        return False

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": "analyze",
            "equation": self.equation.poly.render(),
            "constraint": self.equation.constraint.render(),
            "complexity": list(self.complexity),
            "mul": self.multiplicity,
            "valuation": render_value(self.valuation),
            "dominant_part": self.dominant.render(),
            "ddeg": self.ddeg,
            "quasilinear": self.quasilinear,
            "diagram": self.diagram.as_dict() if self.diagram else None,
            "approx_solutions": (
                [s.as_dict() for s in self.approx.solutions] if self.approx else []
            ),
            "unsolved_monomials": (
                [u.as_dict() for u in self.approx.unsolved] if self.approx else []
            ),
            "unravelled": self.unravelled,
            "unravel": self.unravel.as_dict() if self.unravel else None,
        }

    def text_lines(self) -> list[str]:
        lines = [
            f"equation: {self.equation.render()}",
            f"complexity: {tuple(self.complexity)}",
            f"mul: {self.multiplicity}",
            f"v(P): {render_value(self.valuation)}",
            f"D_P: {self.dominant.render()}",
            f"ddeg: {self.ddeg}",
            f"quasilinear: {'yes' if self.quasilinear else 'no'}",
        ]
        if self.diagram is not None:
            lines.append(
                f"diagram: i = {list(self.diagram.i_sequence)}, "
                f"equalizers = {[str(e) for e in self.diagram.equalizers]}"
            )
        if self.approx is not None:
            lines.extend(
                f"approx solution: {s.y.render()} (multiplicity {s.multiplicity})"
                for s in self.approx.solutions
            )
            lines.extend(
                f"unsolved monomial: t^{u.exponent} ({u.report.reason})"
                for u in self.approx.unsolved
            )
        if self.unravelled is not None:
            lines.append(f"unravelled: {'yes' if self.unravelled else 'no'}")
        if self.unravel is not None:
            lines.append(
                f"unravel: {self.unravel.status} f = {self.unravel.f.render()}, "
                f"{self.unravel.constraint.render()}"
            )
        return lines


@dataclass(frozen=True)
class SolveReport:
    equation: ADE
    target: GroupElement
    branches: tuple[SolutionBranch, ...]

    @property
    def stuck(self) -> bool:
        """Every branch is stuck, including the case of no branches."""
        return not any(branch.solved for branch in self.branches)

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": "solve",
            "equation": self.equation.poly.render(),
            "constraint": self.equation.constraint.render(),
            "target": str(self.target),
            "branches": [branch.as_dict() for branch in self.branches],
        }

    def text_lines(self) -> list[str]:
        lines = [f"equation: {self.equation.render()}", f"target: {self.target}"]
        if not self.branches:
            lines.append("no branches")
        for number, branch in enumerate(self.branches, start=1):
            line = f"y{number} = {branch.reported.render()}  [{branch.status}]"
            if branch.reason:
                line += f" ({branch.reason})"
            lines.append(line)
        return lines


@dataclass(frozen=True)
class EqualizerReport:
    high: DiffPoly
    low: DiffPoly
    exponent: GroupElement
    vp_high: VPFunction
    vp_low: VPFunction

    @property
    def stuck(self) -> bool:
        return False

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": "equalizer",
            "p": self.high.render(),
            "q": self.low.render(),
            "exponent": str(self.exponent),
            "value": str(self.vp_high(self.exponent)),
            "v_p": self.vp_high.as_dict(),
            "v_q": self.vp_low.as_dict(),
        }

    def text_lines(self) -> list[str]:
        return [
            f"P: {self.high.render()}",
            f"Q: {self.low.render()}",
            f"equalizer: t^{self.exponent}",
            f"v(P×e) = v(Q×e) = {self.vp_high(self.exponent)}",
        ]


@dataclass(frozen=True)
class DiagramReport:
    poly: DiffPoly
    diagram: NewtonDiagram

    @property
    def stuck(self) -> bool:
        return False

    def as_dict(self) -> dict[str, Any]:
        return {"command": "diagram", "polynomial": self.poly.render(), **self.diagram.as_dict()}

    def text_lines(self) -> list[str]:
        return [
            f"P: {self.poly.render()}",
            f"constraint: {self.diagram.constraint.render()}",
            f"i_sequence: {list(self.diagram.i_sequence)}",
            f"equalizers: {[str(e) for e in self.diagram.equalizers]}",
        ]


@dataclass(frozen=True)
class CheckFieldReport:
    preset: str
    dim: int
    samples: int
    seed: int
    checks: tuple[FieldCheckReport, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def stuck(self) -> bool:
        return False

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": "check-field",
            "preset": self.preset,
            "dim": self.dim,
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [check.as_dict() for check in self.checks],
        }

    def text_lines(self) -> list[str]:
        lines = [
            f"preset: {self.preset} (dim {self.dim}), {self.samples} samples, seed {self.seed}"
        ]
        for check in self.checks:
            verdict = "pass" if check.passed else f"FAIL: {check.counterexample}"
            lines.append(f"{check.check}: {verdict}")
        return lines


@dataclass(frozen=True)
class ChainDdegReport:
    poly: DiffPoly
    chain: tuple[Series, ...]
    result: ChainDdeg

    @property
    def stuck(self) -> bool:
        return False

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": "chain-ddeg",
            "polynomial": self.poly.render(),
            "chain": [point.render() for point in self.chain],
            **self.result.as_dict(),
        }

    def text_lines(self) -> list[str]:
        stabilized = "yes" if self.result.stabilized else "no"
        return [
            f"P: {self.poly.render()}",
            f"chain: {'; '.join(point.render() for point in self.chain)}",
            f"ddeg: {list(self.result.values)}",
            f"stabilized: {stabilized} at {self.result.value}",
        ]


type Report = (
    AnalyzeReport
    | SolveReport
    | EqualizerReport
    | DiagramReport
    | CheckFieldReport
    | ChainDdegReport
)

__all__ = [
    "AnalyzeReport",
    "ChainDdegReport",
    "CheckFieldReport",
    "DiagramReport",
    "EqualizerReport",
    "Report",
    "SolveReport",
    "render_value",
]
