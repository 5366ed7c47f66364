"""Finite-window decision functionals on shear coordinates.

Fan window ratios compare weighted arc sums on the two sides of a fan edge.
Their sup over windows bounds distortion, their decay toward 1 profiles how
close a map is to conformal at small scales, the same ratios taken for two
shear maps give a proximity functional, and signed series along edge chains
probe whether the induced vertex map extends continuously.  Every verdict
here is finite-window evidence, never a proof; windows are always explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .farey import (
    Chain,
    ChainError,
    FareyEdge,
    fan,
    fan_index,
    generation,
    min_fan_index,
    normalizer_to_infinity,
    shared_tessellation,
)
from .rationals import ER, ExtendedRational
from .shear import ShearMap


@dataclass
class FanWindowReport:
    """Window ratios at one tip.

    ratios maps (m, k) to the window ratio (divided by the comparison map's
    ratio when the scan had one); sup is the largest max(r, 1/r) over the
    window; truncated flags windows that reached past the shear map's depth,
    where values default to 0.
    """

    tip: ExtendedRational
    ratios: dict
    m_window: tuple
    k_window: tuple
    sup: float
    truncated: bool


@dataclass
class ChainSeriesReport:
    """Signed series along a chain: sign rows, terms, partial sums, verdict.

    last_ratio is the largest consecutive-term quotient over the trailing
    half; tail_estimate extrapolates the remainder geometrically from it when
    it is below 1.
    """

    chain: Chain
    signs: tuple
    terms: tuple
    partials: tuple
    verdict: str
    tail_estimate: float | None
    last_ratio: float | None


def _window_ratio(vals, k):
    """Ratio for the window centered at position k of a (2k+1)-value slice.

    Numerator terms e^{v_k/2 + v_{k+1} + ... + v_{k+j}}, denominator terms
    e^{-v_k/2 - v_{k-1} - ... - v_{k-j}}, j = 0..k: each side sums k+1
    weighted arcs, one per fan edge on that side of the center.
    """
    sm = float(vals[k])
    up = np.cumsum(vals[k + 1:])
    down = np.cumsum(vals[:k][::-1])
    num = math.exp(sm / 2.0) + float(np.exp(sm / 2.0 + up).sum())
    den = math.exp(-sm / 2.0) + float(np.exp(-sm / 2.0 - down).sum())
    return num / den


def fan_ratio(s, p, m, k):
    """Window ratio of s at the fan of p, center index m, radius k.

    Fan indices m-k..m+k are read through the canonical indexing; edges
    beyond the map's support contribute the default value.
    """
    if k < 0:
        raise ValueError(f"window radius must be >= 0, got {k}")
    p = ExtendedRational(p)
    vals = np.array([s.value(e) for e in fan(p, m - k, m + k)], dtype=float)
    return float(_window_ratio(vals, k))


def _edge_gen(tess, e):
    g = tess.edge_gen.get(e)
    return generation(e) if g is None else g


def _tip_min_index(tess, tip):
    """Fan index of a minimal-generation edge at tip, cheaply when the tip's
    introducing triangle is known: its two fresh edges realize the minimum."""
    tri = tess.vertex_intro_tri.get(tip)
    if tri is None:
        return min_fan_index(tip)
    other = next(x for x in tess.triangles[tri].verts if x != tip)
    return fan_index(tip, FareyEdge(tip, other))


def _tip_index_range(tess, tip, depth):
    """Contiguous fan indices whose edges stay within the generation budget.

    Generation along a fan is unimodal, so expanding outward from the minimal
    edge until the budget is exceeded finds the whole range.
    """
    n0 = _tip_min_index(tess, tip)
    inv = normalizer_to_infinity(tip).inverse()

    def g(n):
        return _edge_gen(tess, FareyEdge(tip, inv.apply(ER(n))))

    if g(n0) > depth:
        return None
    lo = n0
    while g(lo - 1) <= depth:
        lo -= 1
    hi = n0
    while g(hi + 1) <= depth:
        hi += 1
    return lo, hi


def _tip_windows(tess, tip, m_range, k_range, depth):
    if k_range is not None:
        ks = sorted(set(int(k) for k in k_range))
        if ks and ks[0] < 0:
            raise ValueError("window radius must be >= 0")
        if m_range is not None:
            ms = sorted(set(int(m) for m in m_range))
            return [(m, k) for m in ms for k in ks]
    rng = _tip_index_range(tess, tip, depth)
    if rng is None:
        return []
    flo, fhi = rng
    ms = sorted(set(int(m) for m in m_range)) if m_range is not None \
        else range(flo, fhi + 1)
    out = []
    for m in ms:
        if k_range is not None:
            out.extend((m, k) for k in ks)
        else:
            out.extend((m, k) for k in range(min(m - flo, fhi - m) + 1))
    return out


def _window_scan(s1, s2, tips, m_range, k_range, depth):
    """Shared driver for the window sups.

    Each window contributes max(q, 1/q) with q the quotient of the two maps'
    ratios; against the zero map the quotient is the raw ratio itself, which
    is what makes the proximity of (s, zero) reproduce the plain bound of s
    to the last bit.
    """
    tess = shared_tessellation(depth + 1)
    tips = tess.vertices() if tips is None \
        else [ExtendedRational(t) for t in tips]
    reports = {}
    sup_all = None
    for tip in tips:
        wins = _tip_windows(tess, tip, m_range, k_range, depth)
        if not wins:
            continue
        lo = min(m - k for m, k in wins)
        hi = max(m + k for m, k in wins)
        edges_ = fan(tip, lo, hi)
        vals1 = np.array([s1.value(e) for e in edges_], dtype=float)
        vals2 = np.array([s2.value(e) for e in edges_], dtype=float)
        truncated = any(_edge_gen(tess, e) > s1.depth for e in edges_)
        ratios = {}
        sup = None
        for m, k in wins:
            sl = slice(m - k - lo, m + k + 1 - lo)
            q = _window_ratio(vals1[sl], k) / _window_ratio(vals2[sl], k)
            ratios[(m, k)] = q
            v = max(q, 1.0 / q)
            if sup is None or v > sup:
                sup = v
        reports[tip] = FanWindowReport(
            tip, ratios,
            (min(m for m, _ in wins), max(m for m, _ in wins)),
            (min(k for _, k in wins), max(k for _, k in wins)),
            sup, truncated)
        if sup_all is None or sup > sup_all:
            sup_all = sup
    if sup_all is None:
        raise ValueError("empty window: no fan window fits the given ranges")
    return reports, sup_all


def qs_bound(s, tips=None, m_range=None, k_range=None, depth=None):
    """Finite-window distortion bound: per-tip reports plus the global sup
    of max(ratio, 1/ratio) over every window.

    Defaults scan every tip of the shared tessellation and every window whose
    fan edges stay within the generation budget (the map's depth).  The sup
    is monotone non-decreasing in the window; boundedness as windows grow is
    the quasisymmetry evidence, blow-up refutes it.
    """
    depth = s.depth if depth is None else depth
    return _window_scan(s, ShearMap.zero(), tips, m_range, k_range, depth)


def teich_proximity(s1, s2, tips=None, m_range=None, k_range=None, depth=None):
    """Finite-window proximity of two shear maps: sup of max(q, 1/q) over
    windows, q the quotient of their window ratios.  Always >= 1; equals 1
    exactly when the ratio tables coincide on the window; against the zero
    map it reproduces qs_bound's sup exactly."""
    if depth is None:
        depth = max(s1.depth, s2.depth)
    _, sup = _window_scan(s1, s2, tips, m_range, k_range, depth)
    return sup


def symmetric_diagnostic(s, generation_buckets=None, depth=None):
    """Max |ratio - 1| per generation bucket.

    A window's generation is the minimum Farey generation of its two extreme
    edges and its center; bucket g collects every window of generation >= g,
    so the profile is non-increasing by construction and its decay toward 0
    is the small-scale-conformality evidence.  Buckets beyond every sampled
    window report 0 (a vacuous sup).
    """
    depth = s.depth if depth is None else depth
    tess = shared_tessellation(depth + 1)
    if generation_buckets is None:
        generation_buckets = range(depth + 1)
    samples = []
    for tip in tess.vertices():
        rng = _tip_index_range(tess, tip, depth)
        if rng is None:
            continue
        flo, fhi = rng
        edges_ = fan(tip, flo, fhi)
        vals = np.array([s.value(e) for e in edges_], dtype=float)
        gens = [_edge_gen(tess, e) for e in edges_]
        for m in range(flo, fhi + 1):
            for k in range(min(m - flo, fhi - m) + 1):
                r = _window_ratio(vals[m - k - flo: m + k + 1 - flo], k)
                g3 = min(gens[m - k - flo], gens[m - flo], gens[m + k - flo])
                samples.append((g3, abs(r - 1.0)))
    out = {}
    for g in generation_buckets:
        devs = [d for gg, d in samples if gg >= g]
        out[int(g)] = max(devs) if devs else 0.0
    return out


def chain_signs(chain, n):
    """Sign row (for positions 1..n) of the chain series term n.

    The base sign at position i compares the fan indices of edges i and i+1
    at their shared pivot; it flips once for every fan change among the edge
    triples between position i and position n+1.
    """
    edges = chain.edges
    if not 1 <= n <= len(edges) - 1:
        raise ChainError(
            f"sign row {n} needs edge {n + 1}; chain has {len(edges)} edges")
    flags = chain.fan_change_flags
    signs = []
    parity = 0
    for i in range(n, 0, -1):
        if i <= n - 1 and flags[i - 1]:
            parity ^= 1
        pivot = chain.pivots[i - 1]
        base = 1 if fan_index(pivot, edges[i - 1]) < fan_index(pivot, edges[i]) \
            else -1
        signs.append(base if parity == 0 else -base)
    signs.reverse()
    return tuple(signs)


def chain_series(s, chain, N, term_floor=1e-12, tail_bound=1e-9,
                 div_floor=1e-6, trend_ratio=0.9):
    """Partial sums of e^{signed shear sums} along the chain, with a verdict.

    Terms bounded away from 0 over the trailing half are diverging-evidence
    (the developed endpoint sequence cannot converge); terms below the floor
    with a geometric tail under the bound, or a steady geometric decay over
    the trailing half, are converging-evidence.  Anything else is
    inconclusive.  The thresholds are configuration, not mathematics.
    """
    if len(chain.edges) < N + 1:
        raise ChainError(
            f"series to N={N} needs {N + 1} chain edges, got {len(chain.edges)}")
    if N < 1:
        raise ValueError("N must be >= 1")
    vals = [s.value(e) for e in chain.edges[:N]]
    sign_rows = tuple(chain_signs(chain, n) for n in range(1, N + 1))
    terms = tuple(
        math.exp(sum(sg * vals[i] for i, sg in enumerate(row)))
        for row in sign_rows)
    partials, verdict, tail, q = series_verdict(
        terms, term_floor, tail_bound, div_floor, trend_ratio)
    return ChainSeriesReport(chain, sign_rows, terms, partials,
                             verdict, tail, q)


def series_verdict(terms, term_floor=1e-12, tail_bound=1e-9,
                   div_floor=1e-6, trend_ratio=0.9):
    """Partial sums plus the convergence-evidence ladder for positive terms.

    Returns (partials, verdict, tail_estimate, last_ratio); shared by every
    series diagnostic so all of them grade evidence identically.
    """
    partials = []
    run = 0.0
    for t in terms:
        run += t
        partials.append(run)
    half = terms[len(terms) // 2:]
    ratios = [b / a for a, b in zip(half, half[1:]) if a > 0.0]
    q = max(ratios) if ratios else None
    tail = terms[-1] * q / (1.0 - q) if q is not None and q < 1.0 else None
    if terms[-1] < term_floor and tail is not None and tail < tail_bound:
        verdict = "converging-evidence"
    elif min(half) >= div_floor:
        verdict = "diverging-evidence"
    elif len(ratios) >= 3 and all(r <= trend_ratio for r in ratios):
        verdict = "converging-evidence"
    else:
        verdict = "inconclusive"
    return tuple(partials), verdict, tail, q
