"""Command-line front end for adenewton."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, TextIO

from .ade import CutChain, enumerate_approx_solutions, is_unravelled, unravel
from .config import Config, load_config
from .const import (
    CONF_BRANCH_BOUND,
    CONF_DEPTH,
    CONF_DIM,
    CONF_FORMAT,
    CONF_LOG_LEVEL,
    CONF_ORDER_BOUND,
    CONF_PRESET,
    CONF_TARGET,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    EXIT_ERROR,
    EXIT_OK,
    EXIT_STUCK,
    FORMAT_JSON,
    FORMAT_TEXT,
    LOGGER,
    PRESETS,
    PROG,
)
from .data import (
    AnalyzeReport,
    ChainDdegReport,
    CheckFieldReport,
    DiagramReport,
    EqualizerReport,
    SolveReport,
)
from .dominant import ddeg, dominant_part
from .errors import AdeNewtonError
from .log_utils import log_error, log_info, setup_logging
from .newton import ddeg_along_chain, equalizer, newton_diagram, vp_function
from .parser import parse_ade, parse_chain, parse_constraint, parse_poly
from .series import check_asymptotic, check_small_derivation, get_preset
from .solver import solve
from .valgroup import GroupElement

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .ade import ADE
    from .data import Report
    from .series import FieldPreset

COMMANDS = ("analyze", "solve", "equalizer", "diagram", "check-field", "chain-ddeg")


@dataclass(frozen=True)
class Command:
    """One subcommand with its raw text inputs."""

    name: str
    sources: tuple[str, ...] = ()
    constraint: str = "all"
    chain: str = ""
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED


@dataclass(frozen=True)
class Outcome:
    exit_code: int
    report: Report | None = None
    error: str | None = None


def target_exponent(config: Config, preset: FieldPreset) -> GroupElement:
    """The configured target as an element of Γ, along the first axis."""
    return GroupElement((config.target,) + (Fraction(0),) * (preset.dim - 1))


def _analyze(eq: ADE, config: Config) -> AnalyzeReport:
    poly = eq.poly
    common = {
        "equation": eq,
        "complexity": poly.complexity(),
        "multiplicity": poly.multiplicity(),
        "valuation": poly.v_of(),
        "dominant": dominant_part(poly),
    }
    if poly.preset.dim != 1:
        degree = ddeg(poly)
        return AnalyzeReport(**common, ddeg=degree, quasilinear=degree == 1)
    degree = eq.ddeg()
    diagram = newton_diagram(poly, eq.constraint)
    if degree == 0:
        return AnalyzeReport(**common, ddeg=0, quasilinear=False, diagram=diagram)
    return AnalyzeReport(
        **common,
        ddeg=degree,
        quasilinear=degree == 1,
        diagram=diagram,
        approx=enumerate_approx_solutions(eq, 1),
        unravelled=is_unravelled(eq),
        unravel=unravel(eq, config.depth),
    )


def dispatch(command: Command, config: Config) -> Report:
    """Parse every input, then compute the report."""
    preset = get_preset(config.preset, config.dim)
    match command.name:
        case "analyze":
            eq = parse_ade(command.sources[0], preset, config.order_bound)
            return _analyze(eq, config)
        case "solve":
            eq = parse_ade(command.sources[0], preset, config.order_bound)
            target = target_exponent(config, preset)
            branches = solve(eq, target, config.branch_bound, config.depth)
            return SolveReport(eq, target, tuple(branches))
        case "equalizer":
            first, second = (parse_poly(s, preset, config.order_bound) for s in command.sources)
            high, low = (first, second) if first.degree() > second.degree() else (second, first)
            exponent = equalizer(high, low)
            return EqualizerReport(high, low, exponent, vp_function(high), vp_function(low))
        case "diagram":
            poly = parse_poly(command.sources[0], preset, config.order_bound)
            constraint = parse_constraint(command.constraint, preset)
            return DiagramReport(poly, newton_diagram(poly, constraint))
        case "check-field":
            checks = (
                check_small_derivation(preset, command.samples, command.seed),
                check_asymptotic(preset, command.samples, command.seed),
            )
            return CheckFieldReport(preset.name, preset.dim, command.samples, command.seed, checks)
        case "chain-ddeg":
            poly = parse_poly(command.sources[0], preset, config.order_bound)
            chain = CutChain(tuple(parse_chain(command.chain, preset)))
            return ChainDdegReport(poly, chain.points, ddeg_along_chain(poly, chain))
    msg = f"Unknown command {command.name!r}; choose one of {', '.join(COMMANDS)}"
    raise AdeNewtonError(msg)


def run(command: Command, config: Config) -> Outcome:
    """Exit 0 on success, 2 when every branch is stuck and 1 on errors."""
    log_info(LOGGER, "command_start", command=command.name, preset=config.preset, dim=config.dim)
    try:
        report = dispatch(command, config)
    except AdeNewtonError as err:
        log_error(LOGGER, "command_failed", command=command.name, error=type(err).__name__)
        return Outcome(EXIT_ERROR, error=f"{type(err).__name__}: {err}")
    return Outcome(EXIT_STUCK if report.stuck else EXIT_OK, report)


def format_report(report: Report, output_format: str) -> str:
    if output_format == FORMAT_JSON:
        return json.dumps(report.as_dict(), sort_keys=True, indent=2, ensure_ascii=False)
    return "\n".join(report.text_lines())


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("settings")
    group.add_argument("--config", type=Path, help="TOML configuration file")
    group.add_argument("--preset", dest=CONF_PRESET, choices=PRESETS)
    group.add_argument("--dim", dest=CONF_DIM, type=int, help="dimension n of Γ = ℚ^n")
    group.add_argument("--target", dest=CONF_TARGET, help="target valuation, e.g. 6 or 7/2")
    group.add_argument("--branch-bound", dest=CONF_BRANCH_BOUND, type=int)
    group.add_argument("--depth", dest=CONF_DEPTH, type=int, help="refinement depth bound")
    group.add_argument("--order-bound", dest=CONF_ORDER_BOUND, type=int)
    group.add_argument("--format", dest=CONF_FORMAT, choices=(FORMAT_TEXT, FORMAT_JSON))
    group.add_argument("--log-level", dest=CONF_LOG_LEVEL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Newton diagrams and solvers for asymptotic differential equations."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="describe an ADE")
    analyze.add_argument("equation", help='e.g. "Y^2 + t*Y + t^3 = 0 where Y preceq 1"')
    solve_cmd = commands.add_parser("solve", help="enumerate solution branches")
    solve_cmd.add_argument("equation")
    equalizer_cmd = commands.add_parser("equalizer", help="equalizer of two homogeneous parts")
    equalizer_cmd.add_argument("p")
    equalizer_cmd.add_argument("q")
    diagram = commands.add_parser("diagram", help="Newton diagram on a constraint")
    diagram.add_argument("poly")
    diagram.add_argument("--in", dest="constraint", default="all", help='"all" or "Y prec t"')
    check = commands.add_parser("check-field", help="sample the field axioms")
    check.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    check.add_argument("--seed", type=int, default=DEFAULT_SEED)
    chain = commands.add_parser("chain-ddeg", help="dominant degree along a cut chain")
    chain.add_argument("poly")
    chain.add_argument("--chain", required=True, help='";"-separated series, e.g. "0; -t"')

    for sub in (analyze, solve_cmd, equalizer_cmd, diagram, check, chain):
        _add_common_flags(sub)
    return parser


def command_from_args(args: argparse.Namespace) -> Command:
    sources = tuple(
        getattr(args, name) for name in ("equation", "p", "q", "poly") if hasattr(args, name)
    )
    return Command(
        name=args.command,
        sources=sources,
        constraint=getattr(args, "constraint", "all"),
        chain=getattr(args, "chain", ""),
        samples=getattr(args, "samples", DEFAULT_SAMPLES),
        seed=getattr(args, "seed", DEFAULT_SEED),
    )


def main(
    argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    flags = {
        key: getattr(args, key)
        for key in (
            CONF_PRESET, CONF_DIM, CONF_TARGET, CONF_BRANCH_BOUND,
            CONF_DEPTH, CONF_ORDER_BOUND, CONF_FORMAT, CONF_LOG_LEVEL,
        )
    }
    try:
        config = load_config(args.config, flags)
    except AdeNewtonError as err:
        print(f"error: {err}", file=stderr)
        return EXIT_ERROR
    setup_logging(LOGGER, config.log_level)
    outcome = run(command_from_args(args), config)
    if outcome.report is None:
        print(f"error: {outcome.error}", file=stderr)
        return outcome.exit_code
    print(format_report(outcome.report, config.format), file=stdout)
    return outcome.exit_code
