"""
Differential Newton diagrams over Γ = ℚ.

For homogeneous P of degree d the function γ ↦ v(P_{×t^γ}) is d·γ plus an
intercept. It is computed from a table of P_{×t^γ} whose coefficients are
polynomials in γ, so equalizers are found exactly. An intercept can only
jump at a rational γ that is a common root of every leading row. When
δ(t^γ) is zero or lies in t^{γ+s}·ℚ[γ] with s > 0, as in both presets,
the leading rows are the nonzero leading coefficients of P and no such
γ exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import TYPE_CHECKING, Any

import sympy

from .const import LOGGER
from .dominant import (
    EConstraint,
    ddeg_on,
    dmul,
    mul_conjugate_exponent,
)
from .errors import (
    AdeNewtonError,
    DimensionMismatchError,
    EqualDegreesError,
    InvalidChainError,
    NotHomogeneousError,
    PrecisionExhaustedError,
)
from .log_utils import log_debug
from .series import render_power
from .valgroup import INFINITY, ExtGroupElement, GroupElement, ext_min, fmt_rational

if TYPE_CHECKING:
    from .ade import CutChain
    from .diffpoly import DiffPoly
    from .polybase import MultiIndex
    from .series import FieldPreset

type GammaPoly = tuple[Fraction, ...]

GAMMA = sympy.Symbol("gamma")
VERIFY_OFFSET = Fraction(1, 7)


def _poly_mul(a: GammaPoly, b: GammaPoly) -> GammaPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _poly_add(a: GammaPoly, b: GammaPoly) -> GammaPoly:
    size = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)
    )


def _conjugation_forms(preset: FieldPreset, order: int) -> list[list[tuple[int, int, GammaPoly]]]:
    """(t^γ·Y)^(k) as (l, shift count, poly in γ) triples, for k <= order."""
    forms = []
    for k in range(order + 1):
        form = []
        for lower in range(k + 1):
            poly = preset.power_derivative(k - lower)
            if poly:
                form.append((lower, k - lower, tuple(comb(k, lower) * c for c in poly)))
        forms.append(form)
    return forms


def _expand_monomial(
    index: MultiIndex, forms: list[list[tuple[int, int, GammaPoly]]]
) -> dict[tuple[MultiIndex, int], GammaPoly]:
    """t^(-dγ)·(t^γ Y)^index as {(l, shift count): poly in γ}."""
    length = len(forms)
    result: dict[tuple[MultiIndex, int], GammaPoly] = {((0,) * length, 0): (Fraction(1),)}
    for order, power in enumerate(index):
        for _ in range(power):
            expanded: dict[tuple[MultiIndex, int], GammaPoly] = {}
            for (current, shift), poly in result.items():
                for lower, extra, factor in forms[order]:
                    bumped = list(current)
                    bumped[lower] += 1
                    key = (tuple(bumped), shift + extra)
                    expanded[key] = _poly_add(expanded.get(key, ()), _poly_mul(poly, factor))
            result = expanded
    return result


@dataclass(frozen=True)
class VPFunction:
    """γ ↦ v(P_{×t^γ}) = degree·γ + intercept.

    `exceptions` maps a γ where the leading rows cancel to the level that
    takes over there, or to None when that level lies beyond `horizon`.
    """

    degree: int
    intercept: GroupElement
    exceptions: dict[Fraction, GroupElement | None] = field(default_factory=dict)
    horizon: ExtGroupElement = INFINITY

    def value(self, gamma: GroupElement | Fraction) -> GroupElement:
        scalar = gamma.scalar if isinstance(gamma, GroupElement) else gamma
        intercept = self.intercept
        if scalar in self.exceptions:
            exceptional = self.exceptions[scalar]
            if exceptional is None:
                msg = f"v_P at γ = {fmt_rational(scalar)} lies beyond precision {self.horizon}"
                raise PrecisionExhaustedError(msg)
            intercept = exceptional
        return GroupElement((self.degree * scalar + intercept.scalar,))

    __call__ = value

    def pieces(self) -> list[tuple[int, Fraction]]:
        """(slope, intercept) pairs of the affine pieces."""
        found = {(self.degree, self.intercept.scalar)}
        found.update(
            (self.degree, value.scalar) for value in self.exceptions.values() if value is not None
        )
        return sorted(found)

    def as_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "intercept": fmt_rational(self.intercept.scalar),
            "exceptions": {
                fmt_rational(k): None if v is None else fmt_rational(v.scalar)
                for k, v in sorted(self.exceptions.items())
            },
        }


def _require_dim_one(p: DiffPoly) -> None:
    if p.preset.dim != 1:
        msg = f"Newton diagrams need Γ = ℚ, preset has dimension {p.preset.dim}"
        raise DimensionMismatchError(msg)


def _common_rational_roots(rows: list[list[Fraction]]) -> list[Fraction]:
    polys = [
        sympy.Poly(
            sum(
                (sympy.Rational(c.numerator, c.denominator) * GAMMA**i for i, c in enumerate(row)),
                sympy.Integer(0),
            ),
            GAMMA,
            domain=sympy.QQ,
        )
        for row in rows
        if any(row)
    ]
    if not polys:
        return []
    common = polys[0]
    for poly in polys[1:]:
        common = common.gcd(poly)
    if common.degree() < 1:
        return []
    roots = []
    for factor, _ in common.factor_list()[1]:
        if factor.degree() == 1:
            lead, tail = factor.all_coeffs()
            root = -tail / lead
            roots.append(Fraction(int(root.p), int(root.q)))
    return sorted(roots)


def vp_function(p: DiffPoly) -> VPFunction:
    """v_P for a nonzero homogeneous P."""
    _require_dim_one(p)
    if p.is_zero():
        msg = "v_P is undefined for the zero polynomial"
        raise NotHomogeneousError(msg)
    if not p.is_homogeneous():
        msg = f"v_P needs a homogeneous polynomial, got degrees {p.degrees()}"
        raise NotHomogeneousError(msg)
    preset = p.preset
    residue = preset.residue
    step = preset.derivation_shift()
    forms = _conjugation_forms(preset, p.order_bound)
    levels: dict[GroupElement, dict[MultiIndex, list[Any]]] = {}
    for index, coeff in p.items():
        for (lower, shifts), poly in _expand_monomial(index, forms).items():
            for exponent, value in coeff.terms.items():
                row = levels.setdefault(exponent + step * shifts, {}).setdefault(lower, [])
                row.extend([residue.zero] * (len(poly) - len(row)))
                for power, factor in enumerate(poly):
                    row[power] = row[power] + residue.convert(factor) * value
    horizon = ext_min(*(c.precision for _, c in p.stored_items()))

    def nonzero(rows: dict[MultiIndex, list[Any]]) -> bool:
        return any(not residue.is_zero(c) for row in rows.values() for c in row)

    ordered = sorted(levels)
    generic = next((level for level in ordered if nonzero(levels[level])), None)
    if generic is None or not generic < horizon:
        msg = f"Leading coefficients of P_{{×t^γ}} lie beyond precision {horizon}"
        raise PrecisionExhaustedError(msg, horizon if horizon is not INFINITY else None)  # type: ignore[arg-type]

    rational_rows: list[list[Fraction]] = []
    for row in levels[generic].values():
        rational_rows.extend(residue.rational_rows(row))
    exceptions: dict[Fraction, GroupElement | None] = {}
    for root in _common_rational_roots(rational_rows):
        point = residue.convert(root)
        exceptions[root] = None
        for level in ordered:
            if level <= generic or not level < horizon:
                continue
            hit = False
            for row in levels[level].values():
                total = residue.zero
                for power, c in enumerate(row):
                    total = total + c * point**power
                if not residue.is_zero(total):
                    hit = True
                    break
            if hit:
                exceptions[root] = level
                break
    return VPFunction(p.degree(), generic, exceptions, horizon)


def equalizer(pm: DiffPoly, pn: DiffPoly) -> GroupElement:
    """The unique α with v(Pm_{×t^α}) = v(Pn_{×t^α}), for degrees m != n."""
    if pm.degree() == pn.degree():
        msg = f"Equalizer needs distinct degrees, both are {pm.degree()}"
        raise EqualDegreesError(msg)
    if pm.degree() < pn.degree():
        pm, pn = pn, pm
    vm, vn = vp_function(pm), vp_function(pn)
    candidates = {
        (b - a) / (m - n) for m, a in vm.pieces() for n, b in vn.pieces()
    }
    candidates.update(vm.exceptions)
    candidates.update(vn.exceptions)
    hits = sorted(c for c in candidates if vm(c) == vn(c))
    if len(hits) != 1:
        msg = f"Expected exactly one equalizer, found {[fmt_rational(h) for h in hits]}"
        raise AdeNewtonError(msg)
    alpha = GroupElement((hits[0],))
    _verify_equalizer(pm, pn, alpha)
    log_debug(
        LOGGER, "equalizer_found", alpha=alpha, high=pm.degree(), low=pn.degree(),
        candidates=len(candidates),
    )
    return alpha


def _verify_equalizer(pm: DiffPoly, pn: DiffPoly, alpha: GroupElement) -> None:
    """Check the crossing at α and the sign change around it by direct conjugation."""
    offset = GroupElement((VERIFY_OFFSET,))
    for gamma, expected in ((alpha - offset, -1), (alpha, 0), (alpha + offset, 1)):
        high = mul_conjugate_exponent(pm, gamma).known_v()
        low = mul_conjugate_exponent(pn, gamma).known_v()
        difference = (high - low).sign()
        if difference != expected:
            msg = f"Equalizer {alpha} failed verification at {gamma}"
            raise AdeNewtonError(msg)


@dataclass(frozen=True)
class NewtonDiagram:
    """i_0 < ... < i_n with equalizer exponents e_1 > ... > e_n."""

    i_sequence: tuple[int, ...]
    equalizers: tuple[GroupElement, ...]
    constraint: EConstraint

    def as_dict(self) -> dict[str, Any]:
        return {
            "i_sequence": list(self.i_sequence),
            "equalizers": [fmt_rational(e.scalar) for e in self.equalizers],
            "starting_monomials": [render_power(e) or "1" for e in self.equalizers],
            "constraint": self.constraint.render(),
        }


def newton_diagram(p: DiffPoly, constraint: EConstraint) -> NewtonDiagram:
    """Descend from ddeg_ℰ P to mul P through maximal equalizers."""
    _require_dim_one(p)
    parts = p.homogeneous_parts()
    floor = p.multiplicity()
    top = ddeg_on(p, constraint)
    sequence = [top]
    exponents: list[GroupElement] = []
    while top > floor:
        options = [
            (equalizer(parts[degree], parts[top]), degree) for degree in parts if degree < top
        ]
        alpha = min(alpha for alpha, _ in options)
        lower = dmul(mul_conjugate_exponent(p, alpha))
        sequence.insert(0, lower)
        exponents.insert(0, alpha)
        top = lower
    diagram = NewtonDiagram(tuple(sequence), tuple(exponents), constraint)
    log_debug(
        LOGGER, "diagram_built", constraint=constraint, i_sequence=diagram.i_sequence,
        equalizers=exponents,
    )
    return diagram


def ddeg_profile(p: DiffPoly, gamma: GroupElement) -> tuple[int, int]:
    """(dmul, ddeg) of P_{×t^γ}, read off the diagram of P on K^×."""
    diagram = newton_diagram(p, EConstraint.all())
    indices, exponents = diagram.i_sequence, diagram.equalizers
    count = len(exponents)
    if count == 0:
        return indices[0], indices[0]
    if gamma >= exponents[0]:
        low = indices[0]
    elif gamma < exponents[-1]:
        low = indices[count]
    else:
        low = next(indices[m] for m in range(1, count) if exponents[m - 1] > gamma >= exponents[m])
    if gamma > exponents[0]:
        high = indices[0]
    elif gamma <= exponents[-1]:
        high = indices[count]
    else:
        high = next(indices[m] for m in range(1, count) if exponents[m - 1] >= gamma > exponents[m])
    return low, high


def algebraic_starting_monomials(p: DiffPoly, constraint: EConstraint) -> list[GroupElement]:
    """Exponents of the algebraic starting monomials in ℰ, largest first."""
    diagram = newton_diagram(p, constraint)
    return [e for e in diagram.equalizers if constraint.contains_exponent(e)]


@dataclass(frozen=True)
class ChainDdeg:
    """ddeg_{>=γ_ρ} P_{+a_ρ} along a finite cut chain."""

    values: tuple[int, ...]
    gammas: tuple[GroupElement, ...]
    stabilized: bool

    @property
    def value(self) -> int:
        return self.values[-1]

    def as_dict(self) -> dict[str, Any]:
        return {
            "values": list(self.values),
            "gammas": [fmt_rational(g.scalar) for g in self.gammas],
            "stabilized": self.stabilized,
            "value": self.value,
        }


def ddeg_along_chain(p: DiffPoly, chain: CutChain) -> ChainDdeg:
    """
    Dominant degrees along a chain; the last point reuses the last step width.

    A one-point chain reports deg P_{+a_0} and is never stabilized.
    """
    _require_dim_one(p)
    steps = chain.steps()
    points = chain.points
    if not steps:
        return ChainDdeg((p.add_conjugate(points[0]).degree(),), (), stabilized=False)
    if len(steps) == 1:
        last = steps[-1] + GroupElement.unit(1, 0)
    else:
        last = steps[-1] + (steps[-1] - steps[-2])
    gammas = (*steps, last)
    if any(b <= a for a, b in zip(gammas, gammas[1:], strict=False)):
        msg = "Chain steps must be strictly increasing"
        raise InvalidChainError(msg)
    values = [
        ddeg_on(p.add_conjugate(point), EConstraint.val_ge(gamma))
        for point, gamma in zip(points, gammas, strict=True)
    ]
    stabilized = len(values) > 1 and values[-1] == values[-2]
    return ChainDdeg(tuple(values), gammas, stabilized)


__all__ = [
    "ChainDdeg",
    "NewtonDiagram",
    "VPFunction",
    "algebraic_starting_monomials",
    "ddeg_along_chain",
    "ddeg_profile",
    "equalizer",
    "newton_diagram",
    "vp_function",
]
