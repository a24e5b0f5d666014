"""Tests for the event logging helpers."""

from __future__ import annotations

import logging

from adenewton.const import LOGGER
from adenewton.log_utils import log_debug, log_info, setup_logging
from adenewton.solver import BranchStatus
from adenewton.valgroup import GroupElement


def test_fields_render_in_input_syntax(caplog, ser):
    log_debug(
        LOGGER, "lift_step", y=ser("-t + t^2"), exponent=GroupElement.of("3/2"),
        status=BranchStatus.SOLVED_TO_PRECISION, skipped=None,
    )
    (record,) = caplog.records
    assert record.getMessage() == (
        "lift_step | y=-t + t^2, exponent=3/2, status=SolvedToPrecision"
    )
    assert record.module == "test_log_utils"


def test_sequences_and_bare_events(caplog):
    log_info(LOGGER, "diagram_built", equalizers=[GroupElement.of(2), GroupElement.of(1)])
    log_info(LOGGER, "command_start")
    assert [r.getMessage() for r in caplog.records] == [
        "diagram_built | equalizers=[2; 1]",
        "command_start",
    ]


def test_disabled_level_is_skipped(caplog):
    caplog.set_level(logging.INFO, logger=LOGGER.name)
    log_debug(LOGGER, "invert_truncated", rounds=3)
    assert caplog.records == []


def test_setup_logging_replaces_its_handler():
    before = list(LOGGER.handlers)
    try:
        setup_logging(LOGGER, "info")
        setup_logging(LOGGER, "debug")
        added = [h for h in LOGGER.handlers if h not in before]
        assert len(added) == 1
        assert LOGGER.level == logging.DEBUG
        assert LOGGER.propagate is False
    finally:
        for handler in LOGGER.handlers[:]:
            if handler not in before:
                LOGGER.removeHandler(handler)
        LOGGER.propagate = True
