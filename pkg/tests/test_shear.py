"""Shear extraction and the characteristic map, checked against each other.

The two directions are inverse, the slow per-address cocycle agrees with the
batched tree product, and the exact-rational extraction path pins structural
zeros without tolerance.
"""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyshear.farey import (
    DepthExceededError,
    TriangleAddress,
    edge,
    fan,
    generation,
    shared_tessellation,
)
from fareyshear.moebius import (
    IDENTITY,
    DegenerateInputError,
    MoebiusMap,
    proj_equal_maps,
)
from fareyshear.rationals import INFINITY, ExtendedRational
from fareyshear.shear import (
    CharacteristicMap,
    CharVertexMap,
    MonotonicityError,
    ShearMap,
    VertexMap,
    builtin_homeo,
    char_map_eval,
    cocycle,
    compose_moebius,
    oriented_edge,
    random_shear_map,
    shear_from_homeo,
    shear_log_args_exact,
)

ER = ExtendedRational

_E0INF = edge(ER(0), INFINITY)


def test_shear_map_basics():
    s = ShearMap({(ER(0), INFINITY): 1.5}, default=0.25, depth=2)
    assert s.value(_E0INF) == 1.5
    assert s(_E0INF) == 1.5
    assert s.value(edge(ER(0), ER(1))) == 0.25
    assert s.in_support(_E0INF)
    assert not s.in_support(edge(ER(0), ER(1)))
    assert dict(s.items()) == {_E0INF: 1.5}
    z = ShearMap.zero(depth=3)
    assert z.depth == 3 and z.default == 0.0 and not z.support


def test_builtin_homeo_validation():
    with pytest.raises(ValueError):
        builtin_homeo("no_such_family")
    with pytest.raises(ValueError):
        builtin_homeo("moebius", 1, 0)
    with pytest.raises(ValueError):
        builtin_homeo("piecewise_linear", 0)
    with pytest.raises(ValueError):
        builtin_homeo("power", -2)


def test_moebius_maps_have_exactly_zero_shear():
    for params in [(1, 1, 0, 1), (2, 0, 0, 1), (5, 3, 3, 2)]:
        h = builtin_homeo("moebius", *params)
        args = shear_log_args_exact(h, 3)
        assert args and all(a == Fraction(1) for a in args.values())
        s = shear_from_homeo(h, 3)
        assert all(v == 0.0 for v in s.support.values())


def test_identity_power_has_zero_shear():
    s = shear_from_homeo(builtin_homeo("power", 1), 3)
    assert all(v == 0.0 for v in s.support.values())


def test_piecewise_linear_two_bends_one_edge():
    h = builtin_homeo("piecewise_linear", 2)
    s = shear_from_homeo(h, 4)
    for e, v in s.items():
        if e == _E0INF:
            assert v == pytest.approx(-math.log(2), abs=1e-15)
        else:
            assert v == 0.0
    args = shear_log_args_exact(h, 4)
    assert args[_E0INF] == Fraction(1, 2)
    assert all(a == 1 for e, a in args.items() if e != _E0INF)


def test_piecewise_linear_float_slope_matches_exact_slope():
    exact = shear_from_homeo(builtin_homeo("piecewise_linear", 2), 3)
    lossy = shear_from_homeo(builtin_homeo("piecewise_linear", 2.0), 3)
    for e in shared_tessellation(4).edges(3):
        assert lossy.value(e) == pytest.approx(exact.value(e), abs=1e-9)


def test_fan_earthquake_support_is_the_fan():
    c = 0.3
    s = shear_from_homeo(builtin_homeo("fan_earthquake", c), 3)
    for e in shared_tessellation(4).edges(3):
        want = c if INFINITY in e else 0.0
        assert s.value(e) == pytest.approx(want, abs=1e-12)


def test_earthquake_shear_map_to_radius():
    eq = builtin_homeo("fan_earthquake", 0.7)
    s = eq.shear_map_to(50)
    assert s.value(edge(ER(50), INFINITY)) == 0.7
    assert s.value(edge(ER(-50), INFINITY)) == 0.7
    assert s.value(edge(ER(0), ER(1))) == 0.0


def test_single_edge_shear_moves_far_side_only():
    t = 0.5
    s = ShearMap({_E0INF: t}, 0.0, 1)
    assert char_map_eval(s, ER(-1)) == pytest.approx(-math.exp(-t), rel=1e-12)
    assert char_map_eval(s, ER(1, 2)) == 0.5
    assert char_map_eval(s, ER(2)) == 2.0
    assert char_map_eval(s, ER(0)) == 0.0
    assert char_map_eval(s, ER(1)) == 1.0
    assert math.isinf(char_map_eval(s, INFINITY))


def test_characteristic_map_of_zero_is_identity():
    cm = CharacteristicMap(ShearMap.zero(), levels=4)
    for v in cm.tess.vertices():
        if v.is_infinity:
            assert math.isinf(cm(v))
        else:
            assert cm(v) == float(v)


def test_characteristic_map_rejects_unknown_vertex():
    cm = CharacteristicMap(ShearMap.zero(), levels=2)
    with pytest.raises(DepthExceededError):
        cm(ER(5, 7))


def test_characteristic_map_preserves_circular_order(rng):
    for _ in range(5):
        s = random_shear_map(rng, 3)
        cm = CharacteristicMap(s)
        finite = [v for v in cm.tess.vertices() if not v.is_infinity]
        images = [cm(v) for v in finite]
        assert images == sorted(images)
        assert all(math.isfinite(x) for x in images)


def test_cocycle_matches_batched_triangle_map(rng):
    s = random_shear_map(rng, 3)
    cm = CharacteristicMap(s)
    for rec in cm.tess.triangles:
        slow = cocycle(s, rec.address)
        fast = cm.triangle_map(rec.address)
        assert proj_equal_maps(slow, fast, tol=1e-8)


def test_base_triangle_map_is_identity():
    cm = CharacteristicMap(ShearMap.zero(), levels=2)
    assert proj_equal_maps(cm.triangle_map(TriangleAddress(None)), IDENTITY)


def test_eval_composed_matches_plain_application(rng):
    s = random_shear_map(rng, 3)
    cm = CharacteristicMap(s)
    m = MoebiusMap(1, 1, 0, 1)
    for v in cm.tess.vertices():
        direct = m.apply(cm(v))
        fused = cm.eval_composed(m, v)
        assert float(fused) == pytest.approx(float(direct), rel=1e-9)


def test_beyond_support_lists_uncovered_edges():
    s = ShearMap({_E0INF: 1.0}, 0.0, 1)
    cm = CharacteristicMap(s, levels=3)
    assert cm.beyond_support
    for e in cm.beyond_support:
        assert generation(e) > 1
        assert not s.in_support(e)
    assert CharacteristicMap(s).beyond_support == []


def test_round_trip_small(rng):
    for _ in range(5):
        s = random_shear_map(rng, 3)
        back = shear_from_homeo(CharVertexMap(s), 3)
        for e, v in s.items():
            assert back.value(e) == pytest.approx(v, abs=1e-10)


def test_char_vertex_map_round_trip_via_eval():
    s = ShearMap({_E0INF: 0.4}, 0.0, 1)
    h = CharVertexMap(s)
    h.prepare(2)
    assert h(ER(-1)) == pytest.approx(-math.exp(-0.4), rel=1e-12)


def test_compose_moebius_evaluates_left_to_right():
    h = builtin_homeo("moebius", 1, 0, 0, 1)
    m = MoebiusMap(1, 2, 0, 1)
    comp = compose_moebius(m, h)
    assert comp(ER(3)) == ER(5)
    assert not comp.fixes_base


def test_shear_is_invariant_under_postcomposition():
    h = builtin_homeo("piecewise_linear", 2)
    m = MoebiusMap(2, 1, 1, 1)
    s1 = shear_from_homeo(h, 2)
    s2 = shear_from_homeo(compose_moebius(m, h), 2)
    for e in shared_tessellation(3).edges(2):
        assert s2.value(e) == pytest.approx(s1.value(e), abs=1e-9)


def test_orientation_reversal_is_rejected():
    with pytest.raises(MonotonicityError):
        shear_from_homeo(lambda x: -x, 2)


def test_coincident_images_are_rejected():
    verts = shared_tessellation(3).vertices()
    finite = [v for v in verts if not v.is_infinity]
    squashed = {finite[-1]: finite[-2]}

    def h(x):
        return squashed.get(x, x)

    with pytest.raises(DegenerateInputError):
        shear_from_homeo(h, 2)


def test_double_infinity_is_rejected():
    verts = shared_tessellation(3).vertices()
    finite = [v for v in verts if not v.is_infinity]

    def h(x):
        return INFINITY if x == finite[-1] else x

    with pytest.raises(DegenerateInputError):
        shear_from_homeo(h, 2)


def test_oriented_edge_uses_witness_side():
    assert oriented_edge(_E0INF, ER(1)) == (INFINITY, ER(0))
    assert oriented_edge(_E0INF, ER(-1)) == (ER(0), INFINITY)


def test_shear_log_args_requires_exact_images():
    with pytest.raises(TypeError):
        shear_log_args_exact(builtin_homeo("power", 2), 2)


def test_random_shear_map_shape(rng):
    s = random_shear_map(rng, 3, low=-0.5, high=0.5)
    tess = shared_tessellation(4)
    assert set(s.support) == set(tess.edges(3))
    assert all(-0.5 <= v <= 0.5 for v in s.support.values())
    assert s.depth == 3
    again = random_shear_map(random.Random(20260823), 3, low=-0.5, high=0.5)
    assert again.support == s.support


@given(st.integers(0, 2**32 - 1))
def test_round_trip_property(seed):
    s = random_shear_map(random.Random(seed), 2)
    back = shear_from_homeo(CharVertexMap(s), 2)
    for e, v in s.items():
        assert back.value(e) == pytest.approx(v, abs=1e-10)
