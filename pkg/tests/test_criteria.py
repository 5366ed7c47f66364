"""Window ratios, distortion bounds, and chain series verdicts.

The ratio oracle below re-sums the weighted arcs with plain Python floats,
term by term, so the vectorized implementation has an independent check, and
the constant-fan closed form pins the normalization absolutely.
"""

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyshear.criteria import (
    chain_series,
    chain_signs,
    fan_ratio,
    qs_bound,
    series_verdict,
    symmetric_diagnostic,
    teich_proximity,
)
from fareyshear.farey import (
    ChainError,
    edge,
    fan,
    fan_chain,
    shared_tessellation,
    zigzag_chain,
)
from fareyshear.rationals import INFINITY, ExtendedRational
from fareyshear.shear import (
    ShearMap,
    builtin_homeo,
    random_shear_map,
    shear_from_homeo,
)

ER = ExtendedRational


def _ratio_oracle(vals, k):
    num = sum(math.exp(vals[k] / 2.0 + sum(vals[k + 1: k + 1 + j]))
              for j in range(k + 1))
    den = sum(math.exp(-vals[k] / 2.0 - sum(vals[k - j: k]))
              for j in range(k + 1))
    return num / den


def _fan_map(vals, m, k):
    """Shear map putting vals on the fan edges at infinity, indices m-k..m+k."""
    edges = fan(INFINITY, m - k, m + k)
    return ShearMap(dict(zip(edges, vals)), 0.0, depth=10)


def test_fan_ratio_matches_direct_sum(rng):
    for _ in range(40):
        k = rng.randrange(0, 5)
        m = rng.randrange(-3, 4)
        vals = [rng.uniform(-1.5, 1.5) for _ in range(2 * k + 1)]
        s = _fan_map(vals, m, k)
        assert fan_ratio(s, INFINITY, m, k) == pytest.approx(
            _ratio_oracle(vals, k), rel=1e-12)


def test_constant_fan_closed_form():
    for c in (0.5, -0.5, 1.0, -1.0):
        eq = builtin_homeo("fan_earthquake", c)
        s = eq.shear_map_to(40)
        for m in (-3, 0, 2):
            for k in (0, 1, 5, 10):
                want = math.exp((k + 1) * c)
                assert fan_ratio(s, INFINITY, m, k) == pytest.approx(
                    want, rel=1e-12)


def test_zero_map_ratios_are_exactly_one():
    z = ShearMap.zero(depth=3)
    assert fan_ratio(z, INFINITY, 0, 4) == 1.0
    assert fan_ratio(z, ER(1, 2), -2, 3) == 1.0
    _, sup = qs_bound(z, depth=3)
    assert sup == 1.0


def test_fan_ratio_rejects_negative_radius():
    with pytest.raises(ValueError):
        fan_ratio(ShearMap.zero(), INFINITY, 0, -1)


def test_windows_beyond_support_use_default():
    s = ShearMap({edge(ER(0), INFINITY): 2.0}, 0.0, 1)
    assert fan_ratio(s, INFINITY, 100, 1) == 1.0


def test_qs_bound_report_structure(rng):
    s = random_shear_map(rng, 3, low=-0.4, high=0.4)
    reports, sup = qs_bound(s)
    assert sup >= 1.0
    assert sup == max(r.sup for r in reports.values())
    assert set(reports) <= set(shared_tessellation(4).vertices())
    for tip, rep in reports.items():
        assert rep.tip == tip
        mlo, mhi = rep.m_window
        klo, khi = rep.k_window
        for (m, k), q in rep.ratios.items():
            assert mlo <= m <= mhi and klo <= k <= khi
            assert q > 0.0
        assert not rep.truncated


def test_truncation_flag_raises_beyond_depth(rng):
    s = random_shear_map(rng, 1)
    reports, _ = qs_bound(s, depth=3)
    assert any(rep.truncated for rep in reports.values())


def test_explicit_window_ranges_are_respected(rng):
    s = random_shear_map(rng, 3)
    reports, _ = qs_bound(s, tips=[INFINITY], m_range=range(-2, 3),
                          k_range=range(0, 2), depth=3)
    rep = reports[INFINITY]
    assert set(rep.ratios) == {(m, k) for m in range(-2, 3) for k in (0, 1)}


def test_empty_window_raises():
    s = ShearMap.zero(depth=1)
    with pytest.raises(ValueError):
        qs_bound(s, tips=[ER(5, 7)], depth=1)


def test_proximity_to_zero_reproduces_qs_bound(rng):
    for _ in range(5):
        s = random_shear_map(rng, 3)
        _, sup = qs_bound(s)
        assert teich_proximity(s, ShearMap.zero(), depth=3) == sup


def test_proximity_to_self_is_one(rng):
    s = random_shear_map(rng, 3)
    assert teich_proximity(s, s) == 1.0


def test_proximity_is_symmetric(rng):
    s1 = random_shear_map(rng, 2)
    s2 = random_shear_map(rng, 2)
    assert teich_proximity(s1, s2) == pytest.approx(
        teich_proximity(s2, s1), rel=1e-12)


def test_piecewise_linear_two_is_two_quasisymmetric():
    s = shear_from_homeo(builtin_homeo("piecewise_linear", 2), 4)
    _, sup = qs_bound(s)
    assert 1.0 < sup <= 2.0 + 1e-9


def test_symmetric_diagnostic_profile(rng):
    s = random_shear_map(rng, 3, low=-0.3, high=0.3)
    profile = symmetric_diagnostic(s)
    buckets = sorted(profile)
    devs = [profile[g] for g in buckets]
    assert devs == sorted(devs, reverse=True)
    assert all(d >= 0.0 for d in devs)


def test_symmetric_diagnostic_of_zero_map_is_flat():
    profile = symmetric_diagnostic(ShearMap.zero(depth=3))
    assert set(profile) == set(range(4))
    assert all(d == 0.0 for d in profile.values())


def test_symmetric_diagnostic_custom_buckets(rng):
    s = random_shear_map(rng, 2)
    profile = symmetric_diagnostic(s, generation_buckets=[0, 2])
    assert set(profile) == {0, 2}


def test_chain_signs_on_monotone_fans():
    inc = fan_chain(INFINITY, 0, 1, 6)
    dec = fan_chain(INFINITY, 0, -1, 6)
    for n in range(1, 6):
        assert chain_signs(inc, n) == (1,) * n
        assert chain_signs(dec, n) == (-1,) * n


def test_chain_signs_flip_at_fan_changes():
    zz = zigzag_chain(5)
    for n in range(1, 5):
        row = chain_signs(zz, n)
        assert len(row) == n
        assert all(sg in (-1, 1) for sg in row)
    # the row for n and the first n-1 entries for n+1 differ exactly by the
    # parity flip of the one extra fan change
    r3 = chain_signs(zz, 3)
    r4 = chain_signs(zz, 4)
    assert tuple(-x for x in r3) == r4[:3]


def test_chain_signs_range_errors():
    chain = fan_chain(INFINITY, 0, 1, 4)
    with pytest.raises(ChainError):
        chain_signs(chain, 0)
    with pytest.raises(ChainError):
        chain_signs(chain, 4)


def test_chain_series_geometric_example():
    chain = fan_chain(INFINITY, 0, -1, 9)
    support = {e: float(j + 1) for j, e in enumerate(chain.edges)}
    s = ShearMap(support, 0.0, depth=10)
    rep = chain_series(s, chain, 6)
    for n, term in enumerate(rep.terms, start=1):
        assert term == pytest.approx(math.exp(-n * (n + 1) / 2), rel=1e-12)
    assert rep.partials[-1] == pytest.approx(
        sum(math.exp(-n * (n + 1) / 2) for n in range(1, 7)), rel=1e-12)
    # two more terms push the last one under the floor and give the ladder
    # enough trailing ratios to grade the decay
    assert chain_series(s, chain, 8).verdict == "converging-evidence"


def test_chain_series_errors():
    chain = fan_chain(INFINITY, 0, 1, 4)
    s = ShearMap.zero(depth=5)
    with pytest.raises(ChainError):
        chain_series(s, chain, 10)
    with pytest.raises(ValueError):
        chain_series(s, chain, 0)


def test_verdict_tiny_tail_is_converging():
    terms = tuple(0.1**n for n in range(1, 15))
    partials, verdict, tail, q = series_verdict(terms)
    assert verdict == "converging-evidence"
    assert q == pytest.approx(0.1, rel=1e-9)
    assert tail is not None and tail < 1e-9
    assert partials[-1] == pytest.approx(sum(terms), rel=1e-12)


def test_verdict_flat_terms_are_diverging():
    terms = (1.0,) * 12
    _, verdict, tail, q = series_verdict(terms)
    assert verdict == "diverging-evidence"
    assert tail is None
    assert q == 1.0


def test_verdict_steady_decay_is_converging():
    terms = tuple(0.5**n for n in range(1, 40))
    _, verdict, _, q = series_verdict(terms)
    assert verdict == "converging-evidence"
    assert q == pytest.approx(0.5, rel=1e-9)


def test_verdict_erratic_terms_are_inconclusive():
    terms = (1.0, 1e-8) * 6
    _, verdict, _, _ = series_verdict(terms)
    assert verdict == "inconclusive"


@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_fan_ratio_oracle_property(seed, k):
    r = random.Random(seed)
    vals = [r.uniform(-1.0, 1.0) for _ in range(2 * k + 1)]
    s = _fan_map(vals, 0, k)
    assert fan_ratio(s, INFINITY, 0, k) == pytest.approx(
        _ratio_oracle(vals, k), rel=1e-12)
