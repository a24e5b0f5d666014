"""Tests for truncated Hahn series and the field presets."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from adenewton.errors import (
    AdeNewtonError,
    PrecisionExhaustedError,
    PresetMismatchError,
    ValuationError,
    ZeroDivisionSeriesError,
)
from adenewton.parser import parse_series
from adenewton.series import (
    BelowPrecision,
    Relation,
    check_asymptotic,
    check_small_derivation,
    coarse_dominance,
    dominance,
    dominant_split,
    get_preset,
    precedes,
    preceq,
    render_power,
    residue,
)
from adenewton.valgroup import INFINITY, GroupElement, arch_class


def g(*values):
    return GroupElement.of(*values)


def test_render_power():
    assert render_power(g(0)) == ""
    assert render_power(g(1)) == "t"
    assert render_power(g(2)) == "t^2"
    assert render_power(g("1/2")) == "t^(1/2)"
    assert render_power(g(-1)) == "t^(-1)"
    assert render_power(g(1, -5)) == "t^(1,-5)"
    assert render_power(g(0), bare=False) == "t^(0)"


def test_render(ser):
    assert ser("t^3 + t*2 - 1/2").render() == "(-1/2) + 2*t + t^3"
    assert ser("-t + O(t^3)").render() == "-t + O(t^3)"
    assert ser("O(t^2)").render() == "O(t^2)"
    assert ser("0").render() == "0"


def test_addition_takes_least_precision(ser):
    total = ser("t + O(t^3)") + ser("t^2 + O(t^2)")
    assert total.precision == g(2)
    assert total.render() == "t + O(t^2)"


def test_multiplication_precision(ser):
    product = ser("1 + t + O(t^2)") * ser("t + O(t^3)")
    assert product.precision == g(3)
    assert product.render() == "t + t^2 + O(t^3)"


def test_valuation_and_sentinel(ser):
    assert ser("t^2 + t^5").valuation() == g(2)
    assert ser("0").valuation() is INFINITY
    assert ser("O(t^3)").valuation() == BelowPrecision(g(3))
    with pytest.raises(PrecisionExhaustedError) as info:
        ser("O(t^3)").known_valuation()
    assert info.value.bound == g(3)
    with pytest.raises(ZeroDivisionSeriesError):
        ser("0").nonzero_valuation()


def test_invert(ser, h_type):
    assert ser("2*t").invert() == h_type.monomial(-1, Fraction(1, 2))
    assert ser("1 - t").invert(g(4)).render() == "1 + t + t^2 + t^3 + O(t^4)"
    with pytest.raises(PrecisionExhaustedError):
        ser("1 - t").invert()
    with pytest.raises(ZeroDivisionSeriesError):
        ser("O(t)").invert(g(3))


def test_invert_truncated_series_times_itself_is_one(ser):
    a = ser("t^(-1) + 3 + t^2")
    product = a * a.invert(g(5))
    assert product.coefficient(g(0)) == 1
    assert all(e == g(0) for e in product.terms)


def test_h_type_derivation(h_type, ser):
    assert ser("t").derive() == ser("-t^2")
    assert ser("t^(1/2)").derive() == ser("-1/2*t^(3/2)")
    assert ser("5").derive().is_exact_zero()
    assert ser("t + O(t^3)").derive().precision == g(4)
    assert h_type.power_derivative(0) == (Fraction(1),)
    assert h_type.power_derivative(1) == (0, -1)
    assert h_type.power_derivative(2) == (0, 1, 1)


def test_h_type_derivation_in_dimension_two(h_type_2):
    a = h_type_2.monomial(g(1, 0), 3)
    assert a.derive() == h_type_2.monomial(g(1, 1), -3)
    assert h_type_2.monomial(g(0, 1)).derive().is_exact_zero()
    assert h_type_2.derivation_shift() == g(0, 1)


def test_monotone_derivation(monotone):
    z = monotone.residue.z
    series = parse_series("z*t + z^2 + 3*t^2", monotone)
    assert series.derive() == monotone.monomial(1, 1) + monotone.constant(2 * z)
    assert monotone.power_derivative(1) == ()
    assert monotone.derivation_shift() == g(0)


def test_dominance(ser):
    assert dominance(ser("t^2"), ser("t")) is Relation.PREC
    assert dominance(ser("t"), ser("t^2")) is Relation.SUCC
    assert dominance(ser("t + t^2"), ser("t")) is Relation.SIM
    assert dominance(ser("2*t"), ser("t")) is Relation.ASYMP
    assert dominance(ser("O(t)"), ser("t")) is Relation.INCOMPARABLE
    assert precedes(ser("t^3"), ser("1"))
    assert preceq(ser("3"), ser("1"))
    assert not preceq(ser("1"), ser("t"))


def test_dominant_split_and_residue(ser):
    exponent, unit = dominant_split(ser("2*t^2 + t^3"))
    assert exponent == g(2)
    assert unit == ser("2 + t")
    assert residue(ser("3 + t")) == 3
    assert residue(ser("t")) == 0
    with pytest.raises(ValuationError):
        residue(ser("t^(-1)"))
    with pytest.raises(ZeroDivisionSeriesError):
        dominant_split(ser("0"))


def test_coarse_dominance(h_type_2):
    a = h_type_2.monomial(g(1, 3))
    b = h_type_2.monomial(g(1, -2))
    c = h_type_2.monomial(g(0, 9))
    phi = g(1, 0)
    assert coarse_dominance(a, b, phi) is Relation.ASYMP
    assert coarse_dominance(a, c, phi) is Relation.PREC
    assert dominance(a, b) is Relation.PREC


def test_preset_mismatch(h_type, monotone):
    with pytest.raises(PresetMismatchError):
        h_type.one() + monotone.one()
    with pytest.raises(AdeNewtonError):
        get_preset("exotic")


@pytest.mark.parametrize("name", ["h-type", "monotone"])
def test_small_derivation(name):
    report = check_small_derivation(get_preset(name), 200, seed=0)
    assert report.passed
    assert report.counterexample is None


def test_h_type_is_asymptotic():
    assert check_asymptotic(get_preset("h-type"), 200, seed=0).passed


def test_arithmetic_laws():
    preset = get_preset("h-type")
    rng = random.Random(11)
    for _ in range(200):
        a, b, c = (preset.random_series(rng, min_exponent=-2) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b).derive() == a.derive() * b + a * b.derive()
        assert a * b == b * a


def _sparse_exponent(rng):
    first = rng.choice([0, rng.randint(-3, 3)])
    return GroupElement((Fraction(first), Fraction(rng.randint(-3, 3), rng.randint(1, 3))))


def test_coarser_relations_are_weaker(h_type_2):
    rng = random.Random(12)
    weak = {Relation.PREC, Relation.ASYMP}
    checked = 0
    while checked < 200:
        phis = [_sparse_exponent(rng) for _ in range(2)]
        if any(phi.is_zero() for phi in phis):
            continue
        fine, coarse = sorted(phis, key=arch_class)
        a = h_type_2.random_series(rng, terms=2, min_exponent=-1)
        b = h_type_2.random_series(rng, terms=2, min_exponent=-1)
        at_fine = coarse_dominance(a, b, fine)
        at_coarse = coarse_dominance(a, b, coarse)
        if at_fine in weak:
            assert at_coarse in weak
        if at_coarse is Relation.PREC:
            assert at_fine is Relation.PREC
        if at_fine is Relation.ASYMP:
            assert at_coarse is Relation.ASYMP
        checked += 1


def test_coarsening_by_the_larger_side(h_type_2):
    rng = random.Random(13)
    hits = 0
    for _ in range(200):
        f = h_type_2.random_series(rng, terms=2, min_exponent=-2)
        h = h_type_2.random_series(rng, terms=2, min_exponent=-2)
        vf, vh = f.nonzero_valuation(), h.nonzero_valuation()
        if vf.is_zero() or vh.is_zero():
            continue
        if coarse_dominance(f, h, vh) is Relation.PREC:
            hits += 1
            assert coarse_dominance(f, h, vf) is Relation.PREC
    assert hits > 0
