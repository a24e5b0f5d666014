"""Shared fixtures for the adenewton tests."""

from __future__ import annotations

import logging

import pytest

from adenewton.const import LOGGER, PRESET_H_TYPE, PRESET_MONOTONE
from adenewton.diffpoly import DiffPoly
from adenewton.parser import parse_ade, parse_poly, parse_series
from adenewton.series import get_preset


@pytest.fixture
def h_type():
    return get_preset(PRESET_H_TYPE)


@pytest.fixture
def h_type_2():
    return get_preset(PRESET_H_TYPE, 2)


@pytest.fixture
def monotone():
    return get_preset(PRESET_MONOTONE)


@pytest.fixture
def poly(h_type):
    """Parse a differential polynomial over the h-type preset."""
    return lambda text: parse_poly(text, h_type)


@pytest.fixture
def ser(h_type):
    """Parse a series over the h-type preset."""
    return lambda text: parse_series(text, h_type)


@pytest.fixture
def ade(h_type):
    return lambda text: parse_ade(text, h_type)


@pytest.fixture
def running(poly):
    """Y^2 + tY + t^3, with roots t(-1 ± sqrt(1-4t))/2."""
    return poly("Y^2 + t*Y + t^3")


@pytest.fixture(autouse=True)
def _package_logs(caplog):
    """Let caplog see package events at debug level."""
    LOGGER.propagate = True
    caplog.set_level(logging.DEBUG, logger=LOGGER.name)


def _random_poly(rng, preset, *, order=2, degree=3, terms=4, homogeneous=None, denominator=2):
    """A random nonzero exact differential polynomial."""
    coeffs = {}
    for _ in range(rng.randint(1, terms)):
        total = homogeneous if homogeneous is not None else rng.randint(0, degree)
        index = [0] * (order + 1)
        for _ in range(total):
            index[rng.randint(0, order)] += 1
        coeffs[tuple(index)] = preset.random_series(
            rng, min_exponent=-1, max_exponent=3, denominator=denominator
        )
    return DiffPoly(preset, order, coeffs)


@pytest.fixture
def random_poly():
    return _random_poly
