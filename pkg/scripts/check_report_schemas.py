#!/usr/bin/env python3
"""Validate saved `--format json` reports against the schemas in docs/."""

from __future__ import annotations

import json
import sys
from pathlib import Path

from jsonschema import Draft202012Validator

DOCS = Path(__file__).resolve().parent.parent / "docs"


def schema_for(command: str) -> dict:
    """Load the schema of a report's `command` field."""
    path = DOCS / f"{command.replace('-', '_')}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def check_file(path: Path) -> str | None:
    """Return a reason string when the report does not validate."""
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        return f"unreadable report ({err})"

    command = report.get("command") if isinstance(report, dict) else None
    if not isinstance(command, str):
        return "no command field"

    try:
        schema = schema_for(command)
    except OSError:
        return f"no schema for command {command!r}"

    errors = sorted(Draft202012Validator(schema).iter_errors(report), key=str)
    if errors:
        first = errors[0]
        location = "/".join(str(part) for part in first.absolute_path) or "<root>"
        return f"{location}: {first.message}"

    return None


def main(argv: list[str]) -> int:
    """Entry point: check every report named on the command line."""
    failed: list[str] = []
    for file_arg in argv[1:]:
        reason = check_file(Path(file_arg))
        if reason:
            failed.append(f"{file_arg}: {reason}")

    if failed:
        sys.stderr.write("Reports do not match their schema:\n")
        for item in failed:
            sys.stderr.write(f" - {item}\n")
        return 1

    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv))
