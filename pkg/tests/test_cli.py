"""Tests for the command-line front end and its JSON reports."""

from __future__ import annotations

import importlib.util
import io
import json

import pytest

from adenewton.cli import Command, build_parser, command_from_args, main, run
from adenewton.config import Config
from adenewton.const import EXIT_ERROR, EXIT_OK, EXIT_STUCK, LOGGER

RUNNING = "Y^2 + t*Y + t^3 = 0 where Y ≼ 1"


@pytest.fixture(scope="module")
def schema_checker(pytestconfig):
    """The report schema checker from scripts/, loaded as a module."""
    path = pytestconfig.rootpath / "scripts" / "check_report_schemas.py"
    spec = importlib.util.spec_from_file_location("check_report_schemas", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def cli():
    """Run main() and return (exit code, stdout, stderr)."""

    def invoke(*argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        code = main(list(argv), stdout=stdout, stderr=stderr)
        LOGGER.propagate = True
        return code, stdout.getvalue(), stderr.getvalue()

    return invoke


def test_solve_text(cli):
    code, out, err = cli("solve", RUNNING, "--target", "6")
    assert code == EXIT_OK
    assert err == ""
    lines = out.splitlines()
    assert lines[0] == "equation: Y^2 + t*Y + t^3 = 0 where Y ≼ 1"
    assert lines[1] == "target: 6"
    assert lines[2] == "y1 = -t + t^2 + t^3 + 2*t^4 + 5*t^5 + O(t^6)  [SolvedToPrecision]"
    assert lines[3] == "y2 = -t^2 - t^3 - 2*t^4 - 5*t^5 + O(t^6)  [SolvedToPrecision]"


def test_solve_json(cli):
    code, out, _ = cli("solve", RUNNING, "--target", "3", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["command"] == "solve"
    assert report["constraint"] == "Y ≼ 1"
    assert [b["y"] for b in report["branches"]] == ["-t + t^2 + O(t^3)", "-t^2 + O(t^3)"]


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", RUNNING),
        ("analyze", "Y + 1 = 0 where Y ≺ 1"),
        ("solve", RUNNING),
        ("solve", "Y^2 + 2*t^2 = 0 where Y ≼ 1"),
        ("equalizer", "Y^2", "t^3"),
        ("diagram", "Y^2 + t*Y + t^3", "--in", "Y ≺ t"),
        ("check-field", "--samples", "20"),
        ("chain-ddeg", "Y^2 + t*Y + t^3", "--chain", "0; -t; -t + t^2"),
    ],
)
def test_reports_match_schemas(cli, schema_checker, tmp_path, argv):
    code, out, _ = cli(*argv, "--format", "json")
    assert code in (EXIT_OK, EXIT_STUCK)
    path = tmp_path / "report.json"
    path.write_text(out, encoding="utf-8")
    assert schema_checker.check_file(path) is None
    assert schema_checker.main(["check", str(path)]) == 0


def test_schema_checker_rejects(schema_checker, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"command": "diagram", "polynomial": 3}), encoding="utf-8")
    assert schema_checker.check_file(bad) is not None
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"command": "plot"}), encoding="utf-8")
    assert schema_checker.check_file(unknown) == "no schema for command 'plot'"
    assert schema_checker.main(["check", str(bad)]) == 1
    assert "Reports do not match their schema" in capsys.readouterr().err


def test_equalizer_text(cli):
    code, out, _ = cli("equalizer", "t^3", "Y^2")
    assert code == EXIT_OK
    assert "equalizer: t^3/2" in out.splitlines()
    assert "v(P×e) = v(Q×e) = 3" in out


def test_chain_text(cli):
    code, out, _ = cli("chain-ddeg", "Y^2 + t*Y + t^3", "--chain", "0; -t; -t + t^2")
    assert code == EXIT_OK
    assert "ddeg: [2, 1, 1]" in out
    assert "stabilized: yes at 1" in out


def test_stuck_exit_code(cli):
    code, out, _ = cli("solve", "Y^2 + 2*t^2 = 0 where Y ≼ 1")
    assert code == EXIT_STUCK
    assert "[StuckResidue] (no nonzero residue root)" in out


def test_parse_error_exit_code(cli):
    code, out, err = cli("solve", "Y + #")
    assert code == EXIT_ERROR
    assert out == ""
    assert err.strip() == "error: ParseError: Unexpected character '#' (line 1, column 5)"


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "0"),
        ("analyze", "Y - Y = 0 where Y ≼ 1"),
        ("solve", "0"),
        ("diagram", "0"),
        ("equalizer", "0", "Y"),
        ("chain-ddeg", "0", "--chain", "0; -t; -t + t^2"),
    ],
)
def test_zero_polynomial_exits_with_error(cli, argv):
    code, out, err = cli(*argv)
    assert code == EXIT_ERROR
    assert out == ""
    assert err.startswith("error: ")
    assert "zero polynomial" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", RUNNING),
        ("solve", RUNNING, "--target", "5"),
        ("diagram", "Y^2 + t*Y + t^3"),
        ("chain-ddeg", "Y^2 + t*Y + t^3", "--chain", "0; -t; -t + t^2"),
    ],
)
def test_json_reports_are_byte_identical(cli, argv):
    first = cli(*argv, "--format", "json")
    second = cli(*argv, "--format", "json")
    assert first[0] == EXIT_OK
    assert first[1]
    assert first == second


def test_config_error_exit_code(cli, tmp_path):
    code, _, err = cli("diagram", "Y", "--dim", "0")
    assert code == EXIT_ERROR
    assert "command-line flags at dim" in err
    code, _, err = cli("diagram", "Y", "--config", str(tmp_path / "absent.toml"))
    assert code == EXIT_ERROR
    assert err.startswith("error: Cannot read configuration file")


def test_config_file_sets_format(cli, tmp_path):
    path = tmp_path / "adenewton.toml"
    path.write_text('[output]\nformat = "json"\n', encoding="utf-8")
    code, out, _ = cli("diagram", "Y^2 + t*Y + t^3", "--config", str(path))
    assert code == EXIT_OK
    assert json.loads(out)["i_sequence"] == [0, 1, 2]


def test_check_field_monotone_reports_failure(cli):
    code, out, _ = cli("check-field", "--preset", "monotone", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["passed"] is False
    checks = {check["check"]: check["passed"] for check in report["checks"]}
    assert checks["asymptotic"] is False


def test_analyze_report():
    outcome = run(Command("analyze", (RUNNING,)), Config())
    assert outcome.exit_code == EXIT_OK
    data = outcome.report.as_dict()
    assert data["complexity"] == [0, 2, 2]
    assert data["mul"] == 0
    assert data["valuation"] == "0"
    assert data["dominant_part"] == "Y^2"
    assert data["ddeg"] == 2
    assert data["diagram"]["i_sequence"] == [0, 1, 2]
    assert [s["y"] for s in data["approx_solutions"]] == ["-t", "-t^2"]
    assert data["unravelled"] is True
    assert data["unravel"]["status"] == "Unravelled"
    assert data["unravel"]["f"] == "0"


def test_analyze_without_approximate_solutions():
    outcome = run(Command("analyze", ("Y + 1 = 0 where Y ≺ 1",)), Config())
    data = outcome.report.as_dict()
    assert data["ddeg"] == 0
    assert data["approx_solutions"] == []
    assert data["unravel"] is None


def test_analyze_in_dimension_two():
    outcome = run(Command("analyze", ("Y^2 + t",)), Config(dim=2))
    data = outcome.report.as_dict()
    assert data["ddeg"] == 2
    assert data["diagram"] is None
    assert data["quasilinear"] is False


def test_run_logs_failures(caplog):
    outcome = run(Command("equalizer", ("Y^2", "t*Y^2")), Config())
    assert outcome.exit_code == EXIT_ERROR
    assert outcome.error.startswith("EqualDegreesError: ")
    assert "command_failed" in caplog.text


def test_parser_places_flags_after_subcommand():
    args = build_parser().parse_args(["diagram", "Y", "--in", "all", "--preset", "monotone"])
    command = command_from_args(args)
    assert command == Command("diagram", ("Y",), constraint="all")
    assert args.preset == "monotone"
