"""
Residue fields, residue differential polynomials and the residue solver.

Two residue fields are implemented: ℚ with the trivial derivation, and
ℚ(z) with d/dz. Polynomial factoring and linear algebra are delegated to
sympy.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cache
from math import comb
from typing import TYPE_CHECKING, Any, Self

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import field as frac_field

from .const import LOGGER
from .errors import ZeroPolynomialError
from .log_utils import log_debug
from .polybase import MultiIndexPoly, index_order, render_monomial, strip_index
from .valgroup import fmt_rational

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from .polybase import MultiIndex

Y_SYMBOL = sympy.Symbol("Y")
Z_NAME = "z"


def _sympy_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value: Any) -> Fraction:
    """Convert a sympy Rational or ground domain element to a Fraction."""
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def render_z_poly(terms: Sequence[tuple[int, Fraction]]) -> str:
    """Render sum c_k*z^k with highest powers first."""
    parts: list[str] = []
    for power, coeff in sorted(terms, reverse=True):
        if not coeff:
            continue
        magnitude = abs(coeff)
        if power == 0:
            body = fmt_rational(magnitude)
        else:
            name = "z" if power == 1 else f"z^{power}"
            body = name if magnitude == 1 else f"{fmt_rational(magnitude)}*{name}"
        sign = "-" if coeff < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


class ResidueField(ABC):
    """A residue field k with its induced derivation."""

    name: str

    @property
    @abstractmethod
    def zero(self) -> Any:
        """The additive identity."""

    @property
    @abstractmethod
    def one(self) -> Any:
        """The multiplicative identity."""

    @abstractmethod
    def convert(self, value: Any) -> Any:
        """Coerce ints, Fractions and own elements into the field."""

    @abstractmethod
    def derive(self, value: Any) -> Any:
        """The residue derivation."""

    @abstractmethod
    def render(self, value: Any) -> str:
        """Text form accepted by the parser."""

    @abstractmethod
    def sort_key(self, value: Any) -> tuple:
        """Deterministic ordering key."""

    @abstractmethod
    def to_sympy(self, value: Any) -> sympy.Expr:
        """Convert to a sympy expression in z."""

    @abstractmethod
    def from_sympy(self, expr: sympy.Expr) -> Any:
        """Convert a sympy expression in z back into the field."""

    @abstractmethod
    def rational_rows(self, coeffs: Sequence[Any]) -> list[list[Fraction]]:
        """
        Rational coefficient rows of a polynomial with coefficients in k.

        A rational number x makes sum coeffs[m] * x^m vanish iff it is a
        common root of every returned row.
        """

    @abstractmethod
    def random_element(self, rng: random.Random) -> Any:
        """A small nonzero element for sampling."""

    def is_zero(self, value: Any) -> bool:
        return not value

    def is_atomic(self, value: Any) -> bool:
        """Whether the rendered value needs no parentheses in a product."""
        text = self.render(value)
        return not any(op in text[1:] for op in "+-/")

    def nth_derivative(self, value: Any, n: int) -> Any:
        for _ in range(n):
            value = self.derive(value)
        return value

    def algebraic_roots(self, coeffs: Sequence[Any]) -> list[tuple[Any, int]]:
        """
        Roots in k of sum coeffs[k] * Y^k, with multiplicities.

        Roots come from the linear factors of the exact factorization.
        """
        expr = sum(
            (self.to_sympy(c) * Y_SYMBOL**k for k, c in enumerate(coeffs) if not self.is_zero(c)),
            sympy.Integer(0),
        )
        numerator, _ = sympy.fraction(sympy.together(expr))
        if not numerator.has(Y_SYMBOL):
            return []
        gens = [Y_SYMBOL, *sorted(numerator.free_symbols - {Y_SYMBOL}, key=str)]
        poly = sympy.Poly(numerator, *gens, domain=sympy.QQ)
        _, factors = poly.factor_list()
        roots: list[tuple[Any, int]] = []
        for factor, multiplicity in factors:
            if factor.degree(Y_SYMBOL) != 1:
                continue
            linear = sympy.Poly(factor.as_expr(), Y_SYMBOL)
            lead, tail = linear.all_coeffs()
            roots.append((self.from_sympy(sympy.cancel(-tail / lead)), multiplicity))
        roots.sort(key=lambda pair: self.sort_key(pair[0]))
        return roots


class RationalResidues(ResidueField):
    """k = ℚ with the trivial derivation."""

    name = "QQ"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def convert(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        msg = f"{value!r} is not a rational residue"
        raise TypeError(msg)

    def derive(self, value: Any) -> Fraction:  # noqa: ARG002
        return Fraction(0)

    def render(self, value: Fraction) -> str:
        return fmt_rational(value)

    def sort_key(self, value: Fraction) -> tuple:
        return (value.numerator, value.denominator)

    def to_sympy(self, value: Fraction) -> sympy.Expr:
        return _sympy_rational(value)

    def from_sympy(self, expr: sympy.Expr) -> Fraction:
        if not isinstance(expr, sympy.Rational):
            msg = f"{expr} is not rational"
            raise TypeError(msg)
        return _fraction(expr)

    def rational_rows(self, coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
        return [list(coeffs)]

    def random_element(self, rng: random.Random) -> Fraction:
        value = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        return value or Fraction(1)


class RationalFunctionResidues(ResidueField):
    """k = ℚ(z) with the derivation d/dz."""

    name = "QQ(z)"

    def __init__(self) -> None:
        """Create the sympy rational function field ℚ(z)."""
        self.field, self.z = frac_field(Z_NAME, QQ)
        self.symbol = self.field.symbols[0]

    @property
    def zero(self) -> Any:
        return self.field.zero

    @property
    def one(self) -> Any:
        return self.field.one

    def convert(self, value: Any) -> Any:
        if isinstance(value, Fraction):
            return self.field(QQ(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.field(value)
        if getattr(value, "field", None) == self.field:
            return value
        msg = f"{value!r} is not an element of QQ(z)"
        raise TypeError(msg)

    def derive(self, value: Any) -> Any:
        return value.diff(self.z)

    def _normalized(
        self, value: Any
    ) -> tuple[list[tuple[int, Fraction]], list[tuple[int, Fraction]]]:
        numer = [(k[0], _fraction(c)) for k, c in value.numer.terms()]
        denom = [(k[0], _fraction(c)) for k, c in value.denom.terms()]
        lead = max(denom)[1]
        return (
            [(k, c / lead) for k, c in numer],
            [(k, c / lead) for k, c in denom],
        )

    def render(self, value: Any) -> str:
        if not value:
            return "0"
        numer, denom = self._normalized(value)
        top = render_z_poly(numer)
        if denom == [(0, Fraction(1))]:
            return top
        if len(numer) > 1:
            top = f"({top})"
        bottom = render_z_poly(denom)
        if len(denom) > 1 or denom[0][1] != 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def sort_key(self, value: Any) -> tuple:
        if not value:
            return ((), ())
        numer, denom = self._normalized(value)
        return (
            tuple((k, c.numerator, c.denominator) for k, c in sorted(denom)),
            tuple((k, c.numerator, c.denominator) for k, c in sorted(numer)),
        )

    def to_sympy(self, value: Any) -> sympy.Expr:
        return value.as_expr()

    def from_sympy(self, expr: sympy.Expr) -> Any:
        return self.field.from_expr(expr)

    def rational_rows(self, coeffs: Sequence[Any]) -> list[list[Fraction]]:
        common = self.field.ring.one
        for coeff in coeffs:
            if coeff:
                common = common.lcm(coeff.denom)
        rows: dict[int, list[Fraction]] = {}
        for position, coeff in enumerate(coeffs):
            if not coeff:
                continue
            scaled = coeff.numer * common.exquo(coeff.denom)
            for (power,), value in scaled.terms():
                row = rows.setdefault(power, [Fraction(0)] * len(coeffs))
                row[position] = _fraction(value)
        return [rows[k] for k in sorted(rows)]

    def random_element(self, rng: random.Random) -> Any:
        value = self.field.zero
        for power in range(rng.randint(0, 2) + 1):
            value += self.field(rng.randint(-3, 3)) * self.z**power
        return value or self.field.one


@cache
def rational_residues() -> RationalResidues:
    return RationalResidues()


@cache
def rational_function_residues() -> RationalFunctionResidues:
    return RationalFunctionResidues()


class ResiduePoly(MultiIndexPoly[Any]):
    """
    Differential polynomial over the residue field.

    Evaluation at u in k uses the residue derivation, so Y^(j)(u) = δ^j(u).
    `truncated` marks dominant parts read from polynomials that had
    coefficients dropped below precision.
    """

    __slots__ = ("_field", "_truncated")

    def __init__(
        self,
        residue_field: ResidueField,
        order: int,
        coeffs: Mapping[MultiIndex, Any],
        *,
        truncated: bool = False,
    ) -> None:
        """Store the residue field before the coefficients are cleaned."""
        self._field = residue_field
        self._truncated = truncated
        super().__init__(order, {i: residue_field.convert(c) for i, c in coeffs.items()})

    def _drop(self, coeff: Any) -> bool:
        return self._field.is_zero(coeff)

    def _zero_coeff(self) -> Any:
        return self._field.zero

    def _one_coeff(self) -> Any:
        return self._field.one

    def _new(self, order: int, coeffs: Mapping[MultiIndex, Any]) -> Self:
        return type(self)(self._field, order, coeffs, truncated=self._truncated)

    @property
    def field(self) -> ResidueField:
        return self._field

    @property
    def truncated(self) -> bool:
        return self._truncated

    def evaluate(self, u: Any) -> Any:
        u = self._field.convert(u)
        derivatives = [u]
        for _ in range(self._order):
            derivatives.append(self._field.derive(derivatives[-1]))
        total = self._field.zero
        for index, coeff in self.items():
            term = coeff
            for order, power in enumerate(index):
                if power:
                    term = term * derivatives[order] ** power
            total = total + term
        return total

    def add_conjugate(self, u: Any) -> Self:
        """D_{+u}: substitute Y^(j) <- u^(j) + Y^(j)."""
        u = self._field.convert(u)
        forms = []
        value = u
        for order in range(self._order + 1):
            forms.append(self.constant(value) + self.variable(order))
            value = self._field.derive(value)
        return self.substitute(forms)

    def mul_conjugate(self, a: Any) -> Self:
        """D_{×a}: substitute Y^(j) <- (aY)^(j), expanded by Leibniz."""
        a = self._field.convert(a)
        derivatives = [a]
        for _ in range(self._order):
            derivatives.append(self._field.derive(derivatives[-1]))
        forms = []
        for order in range(self._order + 1):
            form = self._new(self._order, {})
            for lower in range(order + 1):
                coeff = derivatives[order - lower] * comb(order, lower)
                form = form + self.variable(lower).scale(coeff)
            forms.append(form)
        return self.substitute(forms)

    def algebraic_part(self) -> list[Any]:
        """Coefficients of the derivative-free terms, as a polynomial in Y."""
        coeffs: dict[int, Any] = {}
        for index, coeff in self.items():
            if index_order(index) == 0:
                coeffs[index[0]] = coeff
        size = max(coeffs, default=-1) + 1
        return [coeffs.get(k, self._field.zero) for k in range(size)]

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for index, coeff in self.sorted_terms():
            monomial = render_monomial(index)
            text = self._field.render(coeff)
            negative = text.startswith("-") and self._field.is_atomic(coeff)
            if negative:
                text = text[1:]
            if not monomial:
                body = text
            elif text == "1":
                body = monomial
            else:
                body = f"{text if self._field.is_atomic(coeff) else f'({text})'}*{monomial}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f"{'-' if negative else '+'} {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ResiduePoly({self.render()})"


class ResidueFragment(StrEnum):
    """Which residue sub-solver produced an answer."""

    ALGEBRAIC = "algebraic-rational-roots"
    LINEAR = "linear"
    FIRST_ORDER_LINEAR = "first-order-linear-ansatz"


DERIVATIVE_DOMINANT = "derivative-dominant residue equation"


@dataclass(frozen=True)
class ResidueSolverReport:
    """Outcome of solving a residue equation D(u) = 0 in k."""

    roots: tuple[Any, ...] = ()
    fragment: ResidueFragment | None = None
    reason: str | None = None
    multiplicities: tuple[int, ...] = field(default=())

    @property
    def solved(self) -> Any | None:
        return self.roots[0] if self.roots else None

    @property
    def ok(self) -> bool:
        return self.fragment is not None


def _solve_first_order_linear(poly: ResiduePoly) -> Any | None:
    """
    Rational solution of c0 + c1*y + c2*y' = 0 over ℚ(z), if one exists.

    Tries y = p/q for q in 1, c2, c2^2 with deg p bounded by the largest
    coefficient degree plus two.
    """
    residue_field = poly.field
    z = sympy.Symbol(Z_NAME)
    c0 = residue_field.to_sympy(poly.coeff((0, 0)))
    c1 = residue_field.to_sympy(poly.coeff((1, 0)))
    c2 = residue_field.to_sympy(poly.coeff((0, 1)))
    common = sympy.lcm([sympy.fraction(sympy.together(c))[1] for c in (c0, c1, c2)])
    c0, c1, c2 = (sympy.expand(sympy.cancel(c * common)) for c in (c0, c1, c2))
    degrees = [sympy.degree(c, z) if c != 0 else 0 for c in (c0, c1, c2)]
    bound = max(degrees) + 2
    for power in range(3):
        denominator = sympy.expand(c2**power)
        size = bound + int(sympy.degree(denominator, z)) + 1
        unknowns = sympy.symbols(f"a0:{size}")
        numerator = sum(a * z**k for k, a in enumerate(unknowns))
        relation = sympy.expand(
            c0 * denominator**2
            + c1 * numerator * denominator
            + c2 * (sympy.diff(numerator, z) * denominator - numerator * sympy.diff(denominator, z))
        )
        equations = sympy.Poly(relation, z).coeffs() if relation != 0 else []
        solutions = sympy.linsolve(equations, unknowns)
        for solution in solutions:
            free = {s: 0 for s in sympy.Tuple(*solution).free_symbols}
            values = [sympy.sympify(v).subs(free) for v in solution]
            candidate = sympy.cancel(
                sum(v * z**k for k, v in enumerate(values)) / denominator
            )
            root = residue_field.from_sympy(candidate)
            if residue_field.is_zero(poly.evaluate(root)):
                return root
    return None


def residue_solve(poly: ResiduePoly) -> ResidueSolverReport:
    """
    Find roots in k of a nonzero residue differential polynomial.

    Sub-solvers are tried in order: exact roots of the derivative-free part
    when derivatives vanish on k or do not occur, a linear solve, then a
    rational ansatz for first-order linear equations over ℚ(z).
    """
    if poly.is_zero():
        msg = "residue_solve needs a nonzero residue polynomial"
        raise ZeroPolynomialError(msg)
    residue_field = poly.field
    trivial_derivation = isinstance(residue_field, RationalResidues)

    if trivial_derivation or not poly.has_derivatives():
        algebraic = poly.algebraic_part()
        if all(residue_field.is_zero(c) for c in algebraic):
            return ResidueSolverReport(reason=DERIVATIVE_DOMINANT)
        degree = len(algebraic) - 1
        if degree == 1 and not poly.has_derivatives():
            root = -algebraic[0] / algebraic[1]
            return ResidueSolverReport(
                roots=(root,), fragment=ResidueFragment.LINEAR, multiplicities=(1,)
            )
        found = residue_field.algebraic_roots(algebraic)
        log_debug(LOGGER, "residue_roots", poly=poly, count=len(found))
        return ResidueSolverReport(
            roots=tuple(r for r, _ in found),
            fragment=ResidueFragment.ALGEBRAIC,
            multiplicities=tuple(m for _, m in found),
            reason=None if found else "no root in the residue field",
        )

    shapes = {strip_index(index) for index, _ in poly.items()}
    if poly.degree() <= 1 and shapes <= {(0,), (1,), (0, 1)}:
        root = _solve_first_order_linear(poly)
        if root is not None:
            return ResidueSolverReport(
                roots=(root,),
                fragment=ResidueFragment.FIRST_ORDER_LINEAR,
                multiplicities=(1,),
            )
        return ResidueSolverReport(reason="no rational solution within the ansatz bound")
    return ResidueSolverReport(reason="residue equation outside the implemented fragment")
