"""Tests for v_P, equalizers, Newton diagrams and cut chains."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from adenewton.ade import CutChain
from adenewton.diffpoly import DiffPoly
from adenewton.dominant import EConstraint, ddeg, dmul, dominant_part, mul_conjugate_exponent
from adenewton.errors import (
    DimensionMismatchError,
    EqualDegreesError,
    InvalidChainError,
    NotHomogeneousError,
    PrecisionExhaustedError,
)
from adenewton.newton import (
    VPFunction,
    _common_rational_roots,
    algebraic_starting_monomials,
    ddeg_along_chain,
    ddeg_profile,
    equalizer,
    newton_diagram,
    vp_function,
)
from adenewton.valgroup import GroupElement


def g(*values):
    return GroupElement.of(*values)


def test_running_diagram(running):
    diagram = newton_diagram(running, EConstraint.all())
    assert diagram.i_sequence == (0, 1, 2)
    assert diagram.equalizers == (g(2), g(1))
    assert diagram.as_dict() == {
        "i_sequence": [0, 1, 2],
        "equalizers": ["2", "1"],
        "starting_monomials": ["t^2", "t"],
        "constraint": "Y in K*",
    }


@pytest.mark.parametrize(
    ("gamma", "expected"),
    [
        ("3", (0, 0)),
        ("2", (0, 1)),
        ("3/2", (1, 1)),
        ("1", (1, 2)),
        ("1/2", (2, 2)),
        ("0", (2, 2)),
    ],
)
def test_profile(running, gamma, expected):
    exponent = g(gamma)
    assert ddeg_profile(running, exponent) == expected
    shifted = mul_conjugate_exponent(running, exponent)
    assert (dmul(shifted), ddeg(shifted)) == expected


def test_diagram_on_constraints(running):
    below_t = EConstraint.val_gt(g(1))
    diagram = newton_diagram(running, below_t)
    assert diagram.i_sequence == (0, 1)
    assert diagram.equalizers == (g(2),)
    assert algebraic_starting_monomials(running, below_t) == [g(2)]
    assert algebraic_starting_monomials(running, EConstraint.val_ge(g(0))) == [g(2), g(1)]
    assert algebraic_starting_monomials(running, EConstraint.val_gt(g(2))) == []


def test_vp_function(poly):
    vp = vp_function(poly("t*Y' + Y"))
    assert vp.degree == 1
    assert vp.intercept == g(0)
    assert vp.exceptions == {}
    assert vp(Fraction(3)) == g(3)
    assert vp.pieces() == [(1, Fraction(0))]
    assert vp_function(poly("Y*Y' + t*Y^2")).value(g(2)) == g(4)


def test_vp_function_at_exceptional_points():
    vp = VPFunction(2, g(1), {Fraction(2): g(3), Fraction(5): None}, horizon=g(4))
    assert vp(g(0)) == g(1)
    assert vp(Fraction(2)) == g(7)
    assert vp.pieces() == [(2, Fraction(1)), (2, Fraction(3))]
    assert vp.as_dict()["exceptions"] == {"2": "3", "5": None}
    with pytest.raises(PrecisionExhaustedError):
        vp(Fraction(5))


def test_common_roots_of_leading_rows():
    rows = [[Fraction(-2), Fraction(1)], [Fraction(-4), Fraction(0), Fraction(1)], [Fraction(0)]]
    assert _common_rational_roots(rows) == [Fraction(2)]
    assert _common_rational_roots([[Fraction(3)], [Fraction(-2), Fraction(1)]]) == []
    assert _common_rational_roots([[Fraction(0)]]) == []


def test_vp_function_rejects(poly, running, h_type_2):
    with pytest.raises(NotHomogeneousError):
        vp_function(running)
    with pytest.raises(NotHomogeneousError):
        vp_function(poly("0"))
    with pytest.raises(DimensionMismatchError):
        vp_function(DiffPoly(h_type_2, 0, {(1,): h_type_2.one()}))


def test_equalizer(poly):
    assert equalizer(poly("Y^2"), poly("t^3")) == g("3/2")
    assert equalizer(poly("t^3"), poly("Y^2")) == g("3/2")
    assert equalizer(poly("Y*Y'"), poly("t")) == g("1/2")
    with pytest.raises(EqualDegreesError):
        equalizer(poly("Y^2"), poly("t*Y'*Y"))


def test_equalizer_matches_direct_valuations(h_type, random_poly):
    rng = random.Random(31)
    for _ in range(200):
        high = rng.randint(1, 4)
        low = rng.randint(0, high - 1)
        pm = random_poly(rng, h_type, order=2, homogeneous=high, terms=3, denominator=6)
        pn = random_poly(rng, h_type, order=2, homogeneous=low, terms=3, denominator=6)
        alpha = equalizer(pm, pn)
        expected = (pn.known_v() - pm.known_v()).scalar / (high - low)
        assert alpha == g(expected)
        left = mul_conjugate_exponent(pm, alpha).known_v()
        assert left == mul_conjugate_exponent(pn, alpha).known_v()


def test_valuation_of_conjugates_is_affine(h_type, random_poly):
    rng = random.Random(32)
    for _ in range(200):
        degree = rng.randint(0, 4)
        p = random_poly(rng, h_type, order=2, homogeneous=degree)
        gamma = g(Fraction(rng.randint(-6, 6), rng.randint(1, 6)))
        assert mul_conjugate_exponent(p, gamma).known_v() == p.known_v() + degree * gamma
        assert vp_function(p)(gamma) == p.known_v() + degree * gamma
        assert vp_function(p).exceptions == {}


def test_chain_stabilizes(running, ser):
    chain = CutChain((ser("0"), ser("-t"), ser("-t + t^2")))
    result = ddeg_along_chain(running, chain)
    assert result.values == (2, 1, 1)
    assert result.gammas == (g(1), g(2), g(3))
    assert result.stabilized
    assert result.value == 1
    assert result.as_dict()["gammas"] == ["1", "2", "3"]


def test_chain_with_one_point(running, ser):
    result = ddeg_along_chain(running, CutChain((ser("-t"),)))
    assert result.values == (2,)
    assert not result.stabilized


def test_invalid_chains(ser):
    with pytest.raises(InvalidChainError):
        CutChain(())
    with pytest.raises(InvalidChainError):
        CutChain((ser("0"), ser("t^2"), ser("t^2 + t")))
    with pytest.raises(InvalidChainError):
        CutChain((ser("0"), ser("O(t)")))


def test_dominant_part_is_mixed_only_at_the_equalizer(h_type, random_poly):
    rng = random.Random(33)
    nudge = g(Fraction(1, 7))
    for _ in range(200):
        high = rng.randint(1, 4)
        low = rng.randint(0, high - 1)
        pm = random_poly(rng, h_type, order=2, homogeneous=high, terms=3)
        pn = random_poly(rng, h_type, order=2, homogeneous=low, terms=3)
        alpha = equalizer(pm, pn)
        total = pm + pn
        assert not dominant_part(mul_conjugate_exponent(total, alpha)).is_homogeneous()
        assert dominant_part(mul_conjugate_exponent(total, alpha + nudge)).is_homogeneous()
        assert dominant_part(mul_conjugate_exponent(total, alpha - nudge)).is_homogeneous()


def _valuation_gap(pm, pn, gamma):
    left = mul_conjugate_exponent(pm, gamma).known_v()
    return (left - mul_conjugate_exponent(pn, gamma).known_v()).scalar


def test_equalizer_matches_a_sign_change_search(h_type, random_poly):
    rng = random.Random(34)
    for _ in range(100):
        high = rng.randint(1, 3)
        low = rng.randint(0, high - 1)
        pm = random_poly(rng, h_type, order=2, homogeneous=high, terms=3)
        pn = random_poly(rng, h_type, order=2, homogeneous=low, terms=3)
        step = Fraction(1, 2 * (high - low))
        lo, hi = -10 * (high - low), 10 * (high - low)
        assert _valuation_gap(pm, pn, g(lo * step)) < 0 < _valuation_gap(pm, pn, g(hi * step))
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _valuation_gap(pm, pn, g(mid * step)) < 0:
                lo = mid
            else:
                hi = mid
        assert _valuation_gap(pm, pn, g(hi * step)) == 0
        assert equalizer(pm, pn) == g(hi * step)
