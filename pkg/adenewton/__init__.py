"""Exact Newton-diagram analysis and solving of asymptotic differential equations."""

from .ade import ADE, CutChain, unravel
from .diffpoly import DiffPoly
from .dominant import EConstraint
from .errors import AdeNewtonError
from .newton import equalizer, newton_diagram
from .parser import parse_ade, parse_poly, parse_series
from .series import FieldPreset, Series, get_preset
from .solver import lift_quasilinear, solve
from .valgroup import INFINITY, GroupElement

__all__ = [
    "ADE",
    "INFINITY",
    "AdeNewtonError",
    "CutChain",
    "DiffPoly",
    "EConstraint",
    "FieldPreset",
    "GroupElement",
    "Series",
    "equalizer",
    "get_preset",
    "lift_quasilinear",
    "newton_diagram",
    "parse_ade",
    "parse_poly",
    "parse_series",
    "solve",
    "unravel",
]
