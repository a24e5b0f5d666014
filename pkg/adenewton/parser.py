"""Text grammar for series, differential polynomials, constraints and ADEs.

    poly     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := atom ['^' power]
    atom     := 'Y' "'"* | 't' | 'z' | int | 'O' '(' ('1' | 't' ['^' power]) ')' | '(' poly ')'
    power    := nat | '-' nat | '(' rational (',' rational)* ')'
    rational := ['-'] int ['/' nat]

`t` may carry any exponent in Γ; every other atom only takes natural powers.
Division is only allowed by a single exact term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, NoReturn

from .ade import ADE
from .const import DEFAULT_ORDER_BOUND
from .diffpoly import DiffPoly
from .dominant import EConstraint
from .errors import AdeNewtonError, ParseError
from .residue import RationalFunctionResidues
from .valgroup import GroupElement

if TYPE_CHECKING:
    from .series import FieldPreset, Series

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
    | (?P<number>\d+)
    | (?P<name>[A-Za-z]+)
    | (?P<symbol>[-+*/^(),;='≺≼])
    """,
    re.VERBOSE,
)

_STRICT = frozenset({"≺", "prec"})
_WEAK = frozenset({"≼", "preceq"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            line, column = _location(text, position)
            msg = f"Unexpected character {text[position]!r}"
            raise ParseError(msg, line, column)
        kind = match.lastgroup or "symbol"
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _location(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


class _Parser:
    """Recursive descent over one token list."""

    def __init__(self, text: str, preset: FieldPreset, order_bound: int) -> None:
        """Tokenize the source up front."""
        self.text = text
        self.preset = preset
        self.order_bound = order_bound
        self.tokens = tokenize(text)
        self.index = 0

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def lookahead(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        return self.current.kind != "end" and self.current.text in texts

    def advance(self) -> Token:
        token = self.current
        if token.kind != "end":
            self.index += 1
        return token

    def accept(self, *texts: str) -> Token | None:
        return self.advance() if self.at(*texts) else None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"Expected {text!r}")
        return self.advance()

    def fail(self, msg: str, token: Token | None = None) -> NoReturn:
        token = token or self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        line, column = _location(self.text, token.offset)
        raise ParseError(f"{msg}, found {found}", line, column)

    def finish(self) -> None:
        if self.current.kind != "end":
            self.fail("Unexpected trailing input")

    # Grammar

    def constant(self, value: Series) -> DiffPoly:
        return DiffPoly.from_series(value)

    def poly(self) -> DiffPoly:
        negative = False
        if sign := self.accept("+", "-"):
            negative = sign.text == "-"
        result = self.term()
        if negative:
            result = -result
        while sign := self.accept("+", "-"):
            rhs = self.term()
            result = result + rhs if sign.text == "+" else result - rhs
        return result

    def term(self) -> DiffPoly:
        result = self.factor()
        while op := self.accept("*", "/"):
            start = self.current
            rhs = self.factor()
            result = result * rhs if op.text == "*" else self.divide(result, rhs, start)
        return result

    def divide(self, left: DiffPoly, right: DiffPoly, token: Token) -> DiffPoly:
        support = right.describe()
        zero = (0,)
        if right.is_zero() and right.is_exact():
            self.fail("Division by zero", token)
        if set(support) != {zero} or not support[zero].is_monomial():
            self.fail("Can only divide by a single exact term", token)
        return left.times(support[zero].invert())

    def factor(self) -> DiffPoly:
        start = self.current
        if start.kind == "name" and start.text == "t":
            self.advance()
            exponent = self.power_exponent() if self.accept("^") else self.scalar(Fraction(1))
            return self.constant(self.preset.monomial(exponent))
        base = self.atom()
        if self.accept("^"):
            token = self.current
            if token.kind != "number":
                self.fail("Expected a natural power", token)
            base = base ** int(self.advance().text)
        return base

    def atom(self) -> DiffPoly:
        token = self.current
        if token.kind == "number":
            self.advance()
            return self.constant(self.preset.constant(int(token.text)))
        if self.accept("("):
            inner = self.poly()
            self.expect(")")
            return inner
        if token.kind != "name":
            self.fail("Expected a term")
        if token.text == "Y":
            self.advance()
            order = 0
            while self.accept("'"):
                order += 1
            if order > self.order_bound:
                self.fail(f"Derivative order {order} exceeds the bound {self.order_bound}", token)
            return DiffPoly.y(self.preset, order)
        if token.text == "z":
            residue = self.preset.residue
            if not isinstance(residue, RationalFunctionResidues):
                self.fail(f"'z' needs the residue field QQ(z), preset {self.preset.name} has QQ")
            self.advance()
            return self.constant(self.preset.constant(residue.z))
        if token.text == "O":
            self.advance()
            self.expect("(")
            if self.current.kind == "number" and self.current.text == "1":
                self.advance()
                exponent = self.preset.zero_exponent()
            else:
                if not self.at("t"):
                    self.fail("Expected t inside O(...)")
                self.advance()
                exponent = self.power_exponent() if self.accept("^") else self.scalar(Fraction(1))
            self.expect(")")
            return self.constant(self.preset.big_o(exponent))
        self.fail("Unknown name")

    def natural(self) -> int:
        token = self.current
        if token.kind != "number":
            self.fail("Expected a number")
        return int(self.advance().text)

    def rational(self) -> Fraction:
        negative = bool(self.accept("-"))
        numerator = self.natural()
        denominator = 1
        if self.accept("/"):
            token = self.current
            denominator = self.natural()
            if denominator == 0:
                self.fail("Malformed rational with zero denominator", token)
        value = Fraction(numerator, denominator)
        return -value if negative else value

    def scalar(self, value: Fraction) -> GroupElement:
        """q as q·e_0, so a bare t is the first unit vector in every dimension."""
        return GroupElement((value,) + (Fraction(0),) * (self.preset.dim - 1))

    def power_exponent(self) -> GroupElement:
        start = self.current
        if self.accept("-"):
            return self.scalar(Fraction(-self.natural()))
        if self.current.kind == "number":
            return self.scalar(Fraction(self.natural()))
        self.expect("(")
        coords = [self.rational()]
        while self.accept(","):
            coords.append(self.rational())
        self.expect(")")
        if len(coords) == 1:
            return self.scalar(coords[0])
        if len(coords) != self.preset.dim:
            msg = f"Exponent has {len(coords)} entries, the group has dimension {self.preset.dim}"
            self.fail(msg, start)
        return GroupElement(tuple(coords))

    def monomial_exponent(self) -> GroupElement:
        """Exponent of a bare monomial such as 1, t or t^(3/2)."""
        token = self.current
        value = self.poly()
        support = value.describe()
        coeff = support.get((0,))
        if set(support) != {(0,)} or coeff is None or not coeff.is_pure_monomial():
            self.fail("Expected a monomial t^γ", token)
        return coeff.nonzero_valuation()

    def constraint(self) -> EConstraint:
        self.expect("Y")
        token = self.current
        if self.accept("in"):
            self.expect("K")
            self.expect("*")
            return EConstraint.all()
        relation = self.advance()
        if relation.text in _STRICT:
            return EConstraint.val_gt(self.monomial_exponent())
        if relation.text in _WEAK:
            return EConstraint.val_ge(self.monomial_exponent())
        self.fail("Expected a relation (≺, ≼, prec, preceq or in K*)", token)

    def ade(self) -> ADE:
        if self.at("P") and self.lookahead().text == "=":
            self.advance()
            self.advance()
        body = self.poly()
        if self.accept("="):
            token = self.current
            if self.poly() != DiffPoly.from_series(self.preset.zero()):
                self.fail("The right-hand side of an ADE must be 0", token)
        self.accept(";")
        constraint = EConstraint.all()
        if self.accept("where"):
            constraint = self.constraint()
        return ADE(body, constraint)

    def series(self) -> Series:
        token = self.current
        value = self.poly()
        if any(sum(i) for i, _ in value.stored_items()):
            self.fail("Expected a series without Y", token)
        return value.coeff((0,))


def _run[T](text: str, preset: FieldPreset, order_bound: int, rule: str) -> T:
    parser = _Parser(text, preset, order_bound)
    try:
        result = getattr(parser, rule)()
    except ParseError:
        raise
    except AdeNewtonError as err:
        line, column = _location(text, parser.current.offset)
        msg = f"Invalid input: {err}"
        raise ParseError(msg, line, column) from err
    parser.finish()
    return result


def parse_poly(text: str, preset: FieldPreset, order_bound: int = DEFAULT_ORDER_BOUND) -> DiffPoly:
    """Parse a differential polynomial such as "Y''*Y - (Y')^2"."""
    return _run(text, preset, order_bound, "poly")


def parse_series(text: str, preset: FieldPreset) -> Series:
    return _run(text, preset, 0, "series")


def parse_constraint(text: str, preset: FieldPreset) -> EConstraint:
    """Parse "Y ≼ 1", "Y prec t^2", "Y in K*"; "all" is accepted for K*."""
    if text.strip().lower() in {"all", "k*"}:
        return EConstraint.all()
    return _run(text, preset, 0, "constraint")


def parse_ade(text: str, preset: FieldPreset, order_bound: int = DEFAULT_ORDER_BOUND) -> ADE:
    """Parse "[P =] poly [= 0] [;] [where Y <rel> <monomial>]"."""
    return _run(text, preset, order_bound, "ade")


def parse_chain(text: str, preset: FieldPreset) -> list[Series]:
    """Parse ';'-separated series."""
    parts = [part for part in text.split(";") if part.strip()]
    if not parts:
        raise ParseError("Expected at least one series in the chain")
    return [parse_series(part, preset) for part in parts]


__all__ = [
    "Token",
    "parse_ade",
    "parse_chain",
    "parse_constraint",
    "parse_poly",
    "parse_series",
    "tokenize",
]
