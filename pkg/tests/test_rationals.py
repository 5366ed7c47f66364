"""Extended rationals: normalization, arithmetic at infinity, circular order."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyshear.rationals import (
    INFINITY,
    ExtendedRational,
    cyclic_orient,
    in_arc,
    proj_diff,
)

ER = ExtendedRational

_fracs = st.fractions(
    min_value=-50, max_value=50, max_denominator=40).map(lambda f: ER(f))
_points = st.one_of(st.just(INFINITY), _fracs)


def test_lowest_terms_normalization():
    assert ER(4, 6) == ER(2, 3)
    assert ER(4, 6).num == 2
    assert ER(4, 6).den == 3
    assert ER(0, 7) == ER(0)
    assert ER(0, 7).den == 1


def test_negative_denominator_moves_sign_up():
    v = ER(1, -2)
    assert (v.num, v.den) == (-1, 2)
    assert ER(-3, -6) == ER(1, 2)


def test_infinity_is_canonical():
    assert ER(5, 0) == INFINITY
    assert ER(-7, 0) == INFINITY
    assert INFINITY.num == 1 and INFINITY.den == 0
    assert INFINITY.is_infinity
    assert not ER(3).is_infinity


def test_zero_over_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        ER(0, 0)


def test_constructor_accepts_fraction_and_self():
    assert ER(Fraction(3, 4)) == ER(3, 4)
    assert ER(Fraction(1, 2), 3) == ER(1, 6)
    assert ER(ER(1, 2), 3) == ER(1, 6)
    assert ER(ER(5, 1)) == ER(5)


def test_parse_round_trip():
    for text in ["0", "-3", "1/2", "-7/3", "1/0"]:
        v = ER.parse(text)
        assert ER.parse(v.key) == v
    assert ER.parse(" 1/2 ") == ER(1, 2)
    assert ER.parse("1/0") == INFINITY
    with pytest.raises(ValueError):
        ER.parse("x/y")


def test_equality_against_int_and_fraction():
    assert ER(4, 2) == 2
    assert ER(1, 3) == Fraction(1, 3)
    assert INFINITY != 2
    assert INFINITY != Fraction(1, 3)
    assert ER(1, 2) != ER(1, 3)


def test_hash_matches_fraction():
    assert hash(ER(1, 2)) == hash(Fraction(1, 2))
    lookup = {ER(1, 2): "a", INFINITY: "b"}
    assert lookup[ER(2, 4)] == "a"


def test_ordering_of_finite_values():
    assert ER(1, 3) < ER(1, 2)
    assert ER(-1) < ER(0) <= ER(0)
    assert sorted([ER(1), ER(-2), ER(1, 2)]) == [ER(-2), ER(1, 2), ER(1)]


def test_ordering_with_infinity_rejected():
    with pytest.raises(TypeError):
        INFINITY < ER(0)
    with pytest.raises(TypeError):
        ER(0) < INFINITY


def test_sort_key_puts_infinity_last():
    pts = [INFINITY, ER(1), ER(-1), ER(0), ER(1, 2)]
    ordered = sorted(pts, key=lambda v: v.sort_key())
    assert ordered == [ER(-1), ER(0), ER(1, 2), ER(1), INFINITY]


def test_negation():
    assert -ER(1, 2) == ER(-1, 2)
    assert -INFINITY is INFINITY


def test_float_conversion():
    assert float(ER(1, 4)) == 0.25
    assert float(INFINITY) == math.inf


def test_as_fraction():
    assert ER(3, 4).as_fraction() == Fraction(3, 4)
    with pytest.raises(ValueError):
        INFINITY.as_fraction()


def test_proj_diff_sign_tracks_order():
    assert proj_diff(ER(1), ER(2)) < 0
    assert proj_diff(ER(2), ER(1)) > 0
    assert proj_diff(ER(1), ER(1)) == 0
    # against infinity the finite point always sits "below"
    assert proj_diff(ER(5), INFINITY) < 0
    assert proj_diff(INFINITY, ER(5)) > 0


def test_cyclic_orient_concrete():
    assert cyclic_orient(ER(0), ER(1), INFINITY) == 1
    assert cyclic_orient(ER(1), ER(0), INFINITY) == -1
    assert cyclic_orient(ER(0), ER(0), INFINITY) == 0


@given(_fracs, _fracs)
def test_finite_pair_with_infinity_orients_by_size(x, y):
    if x == y:
        assert cyclic_orient(x, y, INFINITY) == 0
    elif x < y:
        assert cyclic_orient(x, y, INFINITY) == 1
    else:
        assert cyclic_orient(x, y, INFINITY) == -1


@given(_points, _points, _points)
def test_cyclic_orient_rotation_invariance(a, b, c):
    assert cyclic_orient(a, b, c) == cyclic_orient(b, c, a)
    assert cyclic_orient(a, b, c) == -cyclic_orient(b, a, c)


def test_in_arc_concrete():
    assert in_arc(ER(1, 2), ER(0), ER(1))
    assert not in_arc(ER(2), ER(0), ER(1))
    # the complementary arc from 1 back to 0 passes through infinity
    assert in_arc(INFINITY, ER(1), ER(0))
    assert not in_arc(INFINITY, ER(0), ER(1))


@given(_points, _points, _fracs)
def test_in_arc_is_exclusive_and_exhaustive(a, b, x):
    if a == b or x == a or x == b:
        return
    assert in_arc(x, a, b) != in_arc(x, b, a)
