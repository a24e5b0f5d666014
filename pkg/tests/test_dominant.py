"""Tests for dominant parts and ≼-closed constraints."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from adenewton.diffpoly import DiffPoly
from adenewton.dominant import (
    ConstraintKind,
    EConstraint,
    ddeg,
    ddeg_on,
    dmul,
    dmul_on,
    dominant_monomial,
    dominant_part,
    mul_conjugate_exponent,
    residue_multiplicity_at,
)
from adenewton.errors import DimensionMismatchError, InvalidConstraintError, ValuationError
from adenewton.residue import ResiduePoly, rational_residues
from adenewton.series import residue
from adenewton.valgroup import GroupElement


def g(*values):
    return GroupElement.of(*values)


def test_dominant_part(running, poly):
    assert dominant_part(running) == ResiduePoly(rational_residues(), 0, {(2,): 1})
    assert dominant_part(mul_conjugate_exponent(running, g(1))).render() == "Y + Y^2"
    assert dominant_part(poly("t^2*Y' - 3*t^2*Y + t^5")).render() == "Y' - 3*Y"
    assert dominant_monomial(poly("t^2*Y + t^3")) == g(2)


def test_dominant_part_of_truncated_polynomial(poly):
    part = dominant_part(poly("Y + O(t)"))
    assert part.render() == "Y"
    assert part.truncated
    assert not dominant_part(poly("Y + t")).truncated


def test_zero_has_no_dominant_part(poly):
    with pytest.raises(ValuationError):
        dominant_part(poly("0"))


def test_degree_and_multiplicity(running):
    assert ddeg(running) == 2
    assert dmul(running) == 2
    shifted = mul_conjugate_exponent(running, g(1))
    assert (dmul(shifted), ddeg(shifted)) == (1, 2)


def test_degree_on_constraints(running):
    assert ddeg_on(running, EConstraint.all()) == 2
    assert ddeg_on(running, EConstraint.val_ge(g(1))) == 2
    assert ddeg_on(running, EConstraint.val_gt(g(1))) == 1
    assert ddeg_on(running, EConstraint.val_gt(g(2))) == 0
    assert dmul_on(running, EConstraint.all()) == 0
    assert dmul_on(running, EConstraint.val_ge(g(1))) == 1


def test_degree_on_needs_dimension_one(h_type_2):
    one = h_type_2.one()
    p = DiffPoly(h_type_2, 0, {(1,): one, (0,): one})
    assert ddeg(p) == 1
    with pytest.raises(DimensionMismatchError):
        ddeg_on(p, EConstraint.val_ge(g(0, 0)))


def test_residue_multiplicity(running, ser):
    shifted = mul_conjugate_exponent(running, g(1))
    assert residue_multiplicity_at(shifted, ser("-1")) == 1
    assert residue_multiplicity_at(shifted, ser("1 + t")) == 0
    with pytest.raises(ValuationError):
        residue_multiplicity_at(shifted, ser("t"))


def test_constraint_shapes(ser):
    with pytest.raises(InvalidConstraintError):
        EConstraint(ConstraintKind.ALL, g(1))
    with pytest.raises(InvalidConstraintError):
        EConstraint(ConstraintKind.VAL_GT)
    below_t = EConstraint.val_gt(g(1))
    assert below_t.contains(ser("t^2"))
    assert not below_t.contains(ser("t"))
    assert not below_t.contains(ser("0"))
    assert EConstraint.val_ge(g(1)).contains(ser("t"))
    assert EConstraint.all().contains(ser("t^(-5)"))


def test_constraint_order_and_shift():
    ge_one, gt_one = EConstraint.val_ge(g(1)), EConstraint.val_gt(g(1))
    assert gt_one.is_subset_of(ge_one)
    assert not ge_one.is_subset_of(gt_one)
    assert EConstraint.val_ge(g(2)).is_subset_of(gt_one)
    assert ge_one.is_subset_of(EConstraint.all())
    assert not EConstraint.all().is_subset_of(ge_one)
    assert gt_one.shifted(g(-1)) == EConstraint.val_gt(g(0))
    assert EConstraint.all().shifted(g(3)) == EConstraint.all()


def test_constraint_render():
    assert EConstraint.val_ge(g(0)).render() == "Y ≼ 1"
    assert EConstraint.val_gt(g(1)).render() == "Y ≺ t"
    assert EConstraint.all().render() == "Y in K*"
    assert EConstraint.val_gt(g("1/2")).as_dict() == {"kind": "val_gt", "gamma": ["1/2"]}


def test_multiplicity_never_exceeds_degree(h_type, random_poly):
    rng = random.Random(21)
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=4)
        gamma = g(rng.randint(-2, 4))
        shifted = mul_conjugate_exponent(p, gamma)
        assert dmul(shifted) <= ddeg(shifted)


def test_degree_decreases_with_smaller_monomials(h_type, random_poly):
    rng = random.Random(22)
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=4)
        low, high = sorted(g(Fraction(rng.randint(-4, 8), 2)) for _ in range(2))
        if low == high:
            continue
        at_low = mul_conjugate_exponent(p, low)
        at_high = mul_conjugate_exponent(p, high)
        assert ddeg(at_high) <= ddeg(at_low)
        assert ddeg(at_high) <= dmul(at_low)


def test_small_additive_shift_keeps_degree(h_type, random_poly):
    rng = random.Random(23)
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=4)
        gamma = g(rng.randint(-1, 2))
        a = h_type.random_series(rng, terms=2, min_exponent=0, max_exponent=2).shift(gamma)
        constraint = EConstraint.val_ge(gamma)
        assert ddeg_on(p.add_conjugate(a), constraint) == ddeg_on(p, constraint)


def test_dominant_part_of_products_and_sums(h_type, random_poly):
    rng = random.Random(24)
    same_level = 0
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=3)
        q = random_poly(rng, h_type, order=2, degree=3)
        assert dominant_part(p * q) == dominant_part(p) * dominant_part(q)
        gap = g(Fraction(rng.randint(1, 6), 2))
        smaller = q.shift(p.known_v() - q.known_v() + gap)
        assert dominant_part(p + smaller) == dominant_part(p)
        level = q.shift(p.known_v() - q.known_v())
        total = p + level
        if total.is_zero() or total.known_v() != p.known_v():
            continue
        same_level += 1
        assert dominant_part(total) == dominant_part(p) + dominant_part(level)
    assert same_level > 0


def test_dominant_part_under_bounded_conjugation(h_type, random_poly):
    rng = random.Random(25)
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=3)
        a = h_type.random_series(rng, terms=2, min_exponent=0, max_exponent=2)
        shifted = p.add_conjugate(a)
        assert dominant_part(shifted) == dominant_part(p).add_conjugate(residue(a))
        assert ddeg(shifted) == ddeg(p)
        unit = h_type.constant(h_type.residue.random_element(rng)) + h_type.random_series(
            rng, terms=2, max_exponent=2, positive=True
        )
        scaled = dominant_part(p.mul_conjugate(unit))
        assert scaled == dominant_part(p).mul_conjugate(residue(unit))
        small = h_type.random_series(rng, terms=2, max_exponent=2, positive=True)
        assert ddeg(p.mul_conjugate(small)) <= dmul(p)


def test_close_shifts_share_degree(h_type, random_poly):
    rng = random.Random(26)
    for _ in range(200):
        p = random_poly(rng, h_type, order=2, degree=3)
        f = h_type.random_series(rng, terms=2, min_exponent=-1, max_exponent=2)
        h = h_type.random_series(rng, terms=2, min_exponent=-1, max_exponent=2)
        close = f + h * h_type.random_series(rng, terms=2, min_exponent=0, max_exponent=2)
        at_f = p.add_conjugate(f).mul_conjugate(h)
        at_close = p.add_conjugate(close).mul_conjugate(h)
        assert ddeg(at_f) == ddeg(at_close)
