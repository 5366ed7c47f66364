"""Decorated tessellations: lambda lengths and their convergence criteria.

A decoration assigns a horocycle to every vertex; each edge then carries a
positive lambda length e^{-2 delta} with delta the signed distance between its
endpoint horocycles.  A positive function on Farey edges develops, triangle by
triangle, into a realization: boundary positions plus horocycles whose
measured lambdas reproduce the inputs.  The induced vertex map feeds the
shear machinery, and two further functionals live directly on the lambdas:
the weighted wedge-arc series along a chain and the fan ratio of arc sums,
mirroring the shear-side chain series and window ratios.

Development runs in exact rational arithmetic whenever every root it needs is
rational (the unit decoration stays exact at any depth, landing on the Farey
vertices themselves) and silently falls back to floats otherwise, solving
each step in the chart that puts the crossed edge at (0, infinity) and the
already-placed third vertex at -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .criteria import (
    FanWindowReport,
    _edge_gen,
    _tip_windows,
    series_verdict,
)
from .farey import (
    ChainError,
    DepthExceededError,
    FareyEdge,
    fan,
    generation,
    is_farey_edge,
    shared_tessellation,
)
from .moebius import (
    DegenerateInputError,
    Horocycle,
    horocycle_distance,
    map_triple,
    proj_cyclic_orient,
)
from .rationals import ER, INFINITY, ExtendedRational
from .shear import VertexMap, shear_from_homeo

__all__ = [
    "LambdaMap",
    "DecoratedRealization",
    "WedgeSeriesReport",
    "PinchReport",
    "lambda_from_decoration",
    "horocyclic_length_formula",
    "wedge_length_from_lambdas",
    "develop",
    "shear_from_lambda",
    "quad_shear_closed_form",
    "edge_quad_lambdas",
    "wedge_series",
    "arc_ratio",
    "arc_ratio_bound",
    "pinched_check",
    "ford_decoration",
    "random_lambda_map",
]


class LambdaMap:
    """Finitely supported positive function on Farey edges.

    Lookups outside the support return the default (normally 1, the value on
    every edge of the unit decoration); depth records the largest generation
    the support is meant to cover.
    """

    def __init__(self, support=None, default=1.0, depth=0):
        table = {}
        for e, val in (support or {}).items():
            e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
            val = float(val)
            if not val > 0.0:
                raise ValueError(f"lambda length must be positive, got {val} on {e}")
            table[e] = val
        self.support = table
        self.default = float(default)
        if not self.default > 0.0:
            raise ValueError(f"default lambda must be positive, got {default}")
        self.depth = int(depth)

    def value(self, e):
        return self.support.get(e, self.default)

    __call__ = value

    def in_support(self, e):
        return e in self.support

    def items(self):
        return self.support.items()

    def __repr__(self):
        return (f"LambdaMap({len(self.support)} edges, default={self.default}, "
                f"depth={self.depth})")


def ford_decoration(depth=0):
    """The unit lambda function; it develops to the Farey vertices decorated
    by the circles of diameter 1/q^2 at p/q and the height-1 line at infinity."""
    return LambdaMap({}, 1.0, depth)


def random_lambda_map(rng, depth, pinch=2.0, tess=None):
    """Random lambdas log-uniform in [1/pinch, pinch] on every edge of
    generation <= depth."""
    if not pinch >= 1.0:
        raise ValueError("pinch bound must be >= 1")
    tess = tess or shared_tessellation(depth + 1)
    span = math.log(pinch)
    support = {e: math.exp(rng.uniform(-span, span)) for e in tess.edges(depth)}
    return LambdaMap(support, 1.0, depth)


def lambda_from_decoration(c1, c2):
    """Lambda length of two horocycles: e^{-2 delta}, 1 at tangency."""
    return math.exp(-2.0 * horocycle_distance(c1, c2))


def horocyclic_length_formula(l1, l2, l3):
    """The stated arc-length formula 2*l3/(l1*l2) for a decorated triangle,
    with l1, l2 on the edges through the arc's center and l3 opposite.

    Kept exactly as stated; the convention-consistent geometric length is
    wedge_length_from_lambdas, and the two disagree (they coincide in no
    lambda convention simultaneously with e^{-2 delta}).
    """
    _check_positive(l1, l2, l3)
    return 2.0 * l3 / (l1 * l2)


def wedge_length_from_lambdas(l1, l2, l3):
    """Geometric length of the horocyclic arc a decorated triangle cuts out:
    (l1*l2/l3)^{1/4}, with l1, l2 on the edges through the arc's center and
    l3 opposite.  Agrees with wedge_horocyclic_length on developed triangles."""
    _check_positive(l1, l2, l3)
    return (l1 * l2 / l3) ** 0.25


def _check_positive(*vals):
    for v in vals:
        if not v > 0.0:
            raise ValueError(f"lambda lengths must be positive, got {v}")


def quad_shear_closed_form(a, b, c, d):
    """Shear of an edge from the four side lambdas of its quadrilateral,
    (1/4) ln(ac/(bd)).

    Sides run counterclockwise around the quadrilateral starting with the one
    joining the first flank vertex to the edge's second endpoint, where the
    first flank vertex is the one making a positive cyclic triple with the
    edge's endpoints; edge_quad_lambdas produces exactly this labeling.  Not
    the primary computation: shear_from_lambda measures the developed
    realization, and the closed form is property-tested against it.
    """
    _check_positive(a, b, c, d)
    return 0.25 * math.log((a * c) / (b * d))


def edge_quad_lambdas(lam, e, tess=None):
    """Side lambdas of the quadrilateral around an edge, in the circular
    order quad_shear_closed_form expects; lam is any callable on edges."""
    e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
    tess = tess or shared_tessellation(generation(e) + 1)
    fl = tess.flanks(e)
    if len(fl) < 2:
        raise DepthExceededError(
            f"both flanking triangles of {e} must lie in the tessellation")
    w1, w2 = (next(x for x in tess.triangles[i].verts if x not in (e.a, e.b))
              for i in fl)
    if proj_cyclic_orient(e.a, w1, e.b) < 0:
        w1, w2 = w2, w1
    return (lam(FareyEdge(w1, e.b)), lam(FareyEdge(e.b, w2)),
            lam(FareyEdge(w2, e.a)), lam(FareyEdge(e.a, w1)))


# development


class _ExactBail(Exception):
    """A root needed by the exact development is irrational."""


def _sqrt_exact(q):
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    raise _ExactBail


def _root4_exact(q):
    return _sqrt_exact(_sqrt_exact(q))


def _proj_pos(pos):
    if isinstance(pos, ExtendedRational):
        return pos.num, pos.den
    if math.isinf(pos):
        return 1.0, 0.0
    return pos, 1

def _size_to_finite(m, pos, size):
    """Image horocycle size when the image center is known to be finite.

    Dispatching on the known target instead of testing c*x + d against zero
    keeps the float path away from catastrophic near-zero denominators; the
    rules are exact for exact matrices of any positive determinant.
    """
    det = m.det
    n, d = _proj_pos(pos)
    if d == 0:
        return det / (m.c * m.c * size)
    denom = m.c * n + m.d * d
    if denom == 0:
        raise DegenerateInputError("horocycle image escaped to infinity")
    return size * det * d * d / (denom * denom)

def _size_to_infinity(m, pos, size):
    """Image horocycle size when the image center is known to be infinity."""
    n, d = _proj_pos(pos)
    if d == 0:
        return size * m.a / m.d
    return m.det / (m.c * m.c * size)


@dataclass
class DecoratedRealization:
    """A developed lambda function: boundary positions and horocycles.

    Positions are extended rationals when the development stayed exact,
    floats otherwise; horocycles are float geometry either way.
    defaulted_edges lists the edges whose lambda fell back to the default.
    """

    vertex_positions: dict
    horocycles: dict
    levels: int
    exact: bool
    defaulted_edges: tuple

    def position(self, x):
        x = ExtendedRational(x)
        try:
            return self.vertex_positions[x]
        except KeyError:
            raise DepthExceededError(
                f"vertex {x.key} not realized within {self.levels} levels") from None

    def measure(self, e):
        """Lambda length the realization actually assigns to an edge."""
        e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
        try:
            return lambda_from_decoration(self.horocycles[e.a], self.horocycles[e.b])
        except KeyError:
            raise DepthExceededError(
                f"edge {e} not realized within {self.levels} levels") from None

    def vertex_map(self):
        return _RealizationMap(self)


class _RealizationMap(VertexMap):
    name = "lambda-development"

    def __init__(self, realization):
        self.realization = realization

    def __call__(self, x):
        return self.realization.position(x)


_CHART = (ER(0), INFINITY, ER(-1))


def develop(lam, depth, exact=None):
    """Realize a lambda function out to the given tessellation depth.

    The base triangle goes to (0, 1, infinity) with the three horocycle sizes
    solved from its lambdas; every further triangle is solved in the chart
    sending its crossed edge to (0, infinity) and the parent's off-vertex to
    -1, where the new vertex sits at sqrt(d0*t)/lambda_across^{1/4} with t the
    new horocycle size h*sqrt(lambda_up), then mapped back.

    exact=None tries rational arithmetic first and falls back to floats when
    an irrational root appears; True requires exactness, False skips the try.
    """
    if exact is not False:
        try:
            return _develop_run(lam, depth, True)
        except _ExactBail:
            if exact:
                raise ValueError(
                    "exact development needs every intermediate root rational")
    return _develop_run(lam, depth, False)


def _develop_run(lam, depth, exact_mode):
    tess = shared_tessellation(depth)
    defaulted = []

    def lamval(e):
        if not lam.in_support(e):
            defaulted.append(e)
        v = lam.value(e)
        return Fraction(v) if exact_mode else v

    v0, v1, vi = ER(0), ER(1), INFINITY
    l01 = lamval(FareyEdge(v0, v1))
    l0i = lamval(FareyEdge(v0, vi))
    l1i = lamval(FareyEdge(v1, vi))
    if exact_mode:
        h = _root4_exact(l01 / (l0i * l1i))
        a, b = h * _sqrt_exact(l0i), h * _sqrt_exact(l1i)
        pos = {v0: v0, v1: v1, vi: vi}
    else:
        h = (l01 / (l0i * l1i)) ** 0.25
        a, b = h * math.sqrt(l0i), h * math.sqrt(l1i)
        pos = {v0: 0.0, v1: 1.0, vi: math.inf}
    size = {v0: a, v1: b, vi: h}

    for rec in tess.triangles[1:]:
        u, v = rec.crossed.a, rec.crossed.b
        w = rec.apex
        parent = tess.triangles[rec.parent]
        pw = next(x for x in parent.verts if x != u and x != v)
        if proj_cyclic_orient(pos[u], pos[v], pos[pw]) < 0:
            u, v = v, u
        lam_uw = lamval(FareyEdge(u, w))
        lam_vw = lamval(FareyEdge(v, w))
        try:
            m = map_triple(pos[u], pos[v], pos[pw], *_CHART)
            minv = m.inverse()
            d0 = _size_to_finite(m, pos[u], size[u])
            hinf = _size_to_infinity(m, pos[v], size[v])
            if exact_mode:
                t = hinf * _sqrt_exact(lam_vw)
                x = _sqrt_exact(d0 * t) / _root4_exact(lam_uw)
                pos[w] = minv.apply(ER(x))
                x_pos = ER(x)
                at_inf = pos[w].is_infinity
            else:
                if not (d0 > 0.0 and math.isfinite(d0)
                        and hinf > 0.0 and math.isfinite(hinf)):
                    raise DegenerateInputError(
                        f"chart horocycle sizes {d0}, {hinf}")
                t = hinf * math.sqrt(lam_vw)
                x = math.sqrt(d0 * t) / lam_uw ** 0.25
                if not (x > 0.0 and math.isfinite(x)):
                    raise DegenerateInputError(
                        f"chart position {x} for vertex {w.key}")
                pos[w] = minv.apply(x)
                _check_separation(pos[w], pos[u], pos[v])
                x_pos = x
                at_inf = math.isinf(pos[w])
            size[w] = (_size_to_infinity(minv, x_pos, t) if at_inf
                       else _size_to_finite(minv, x_pos, t))
        except DegenerateInputError as err:
            raise DegenerateInputError(
                f"degenerate placement at {rec.address}: {err}") from None

    horos = {vert: Horocycle(p, float(size[vert])) for vert, p in pos.items()}
    return DecoratedRealization(pos, horos, depth, exact_mode, tuple(defaulted))


def _check_separation(w, u, v, tol=1e-12):
    for nb in (u, v):
        if math.isinf(w) or math.isinf(nb):
            if math.isinf(w) and math.isinf(nb):
                raise DegenerateInputError("new vertex collides at infinity")
            continue
        if abs(w - nb) <= tol * max(1.0, abs(w), abs(nb)):
            raise DegenerateInputError(
                f"new vertex {w} within {tol} of its neighbor {nb}")


def shear_from_lambda(lam, depth=None):
    """Shear map of the boundary map a lambda function develops into.

    Develops one level past the requested depth so every extracted edge has
    both flanking triangles realized, then measures shears from the vertex
    map; exact developments go through exact cross-ratios.
    """
    depth = lam.depth if depth is None else depth
    realization = develop(lam, depth + 1)
    return shear_from_homeo(realization.vertex_map(), depth)


# chain and fan functionals on lambdas


@dataclass
class WedgeSeriesReport:
    """Weighted wedge-arc series along a chain.

    arcs are the per-wedge horocyclic arcs, weights the e^{d_n} factors from
    the leaf-to-horocycle distance recursion (reflected at every fan change,
    constant within a fan), terms their products.  Verdict fields follow
    criteria.series_verdict.
    """

    chain: object
    arcs: tuple
    weights: tuple
    terms: tuple
    partials: tuple
    verdict: str
    tail_estimate: float
    last_ratio: float
    arc_kind: str


def _wedge_triple(lam, e, f, piv):
    opp_a, opp_b = e.other(piv), f.other(piv)
    if not is_farey_edge(opp_a, opp_b):
        raise ChainError(
            f"edges {e} and {f} do not cobound a triangle; wedge arcs need "
            "face-adjacent chains")
    return lam.value(e), lam.value(f), lam.value(FareyEdge(opp_a, opp_b))


def wedge_series(lam, chain, N, first_weight=None, arc="geometric",
                 term_floor=1e-12, tail_bound=1e-9, div_floor=1e-6,
                 trend_ratio=0.9):
    """Partial sums of (weight_n * arc_n) along the chain, with a verdict.

    arc_n is the horocyclic arc of the wedge between chain edges n, n+1 on
    the decoration horocycle at their shared endpoint: geometric by default,
    or the stated closed form with arc="formula".  The weight starts at
    first_weight (default lambda(e_1)^{-1/2}) and reflects through
    lambda(e_{n+1})^{-1/2} at each fan change; diverging partial sums are the
    homeomorphism-side evidence, exactly as for the shear-side chain series.
    """
    if len(chain.edges) < N + 1:
        raise ChainError(
            f"series to N={N} needs {N + 1} chain edges, got {len(chain.edges)}")
    if N < 1:
        raise ValueError("N must be >= 1")
    arc_fn = {"geometric": wedge_length_from_lambdas,
              "formula": horocyclic_length_formula}[arc]
    arcs = tuple(
        arc_fn(*_wedge_triple(lam, chain.edges[n], chain.edges[n + 1],
                              chain.pivots[n]))
        for n in range(N))
    if first_weight is None:
        first_weight = lam.value(chain.edges[0]) ** -0.5
    if not first_weight > 0.0:
        raise ValueError("first_weight must be positive")
    d = math.log(first_weight)
    exponents = [d]
    for i in range(1, N):
        if chain.fan_change_flags[i - 1]:
            d = -0.5 * math.log(lam.value(chain.edges[i])) - d
        exponents.append(d)
    weights = tuple(math.exp(e) for e in exponents)
    terms = tuple(w * a for w, a in zip(weights, arcs))
    partials, verdict, tail, q = series_verdict(
        terms, term_floor, tail_bound, div_floor, trend_ratio)
    return WedgeSeriesReport(chain, arcs, weights, terms, partials,
                             verdict, tail, q, arc)


def _fan_wedge_arcs(lam, tip, edges_):
    """Geometric arcs of the wedges between consecutive fan edges."""
    out = []
    for e, f in zip(edges_, edges_[1:]):
        out.append(wedge_length_from_lambdas(*_wedge_triple(lam, e, f, tip)))
    return out


def arc_ratio(lam, p, m, k):
    """Quotient of wedge-arc sums on the two sides of fan edge m at tip p:
    (arcs of wedges m..m+k) / (arcs of wedges m-k-1..m-1), arcs measured on
    the decoration horocycle at p, whose size cancels."""
    if k < 0:
        raise ValueError(f"window radius must be >= 0, got {k}")
    p = ExtendedRational(p)
    edges_ = fan(p, m - k - 1, m + k + 1)
    arcs = _fan_wedge_arcs(lam, p, edges_)
    up = sum(arcs[k + 1 + j] for j in range(k + 1))
    down = sum(arcs[j] for j in range(k + 1))
    return up / down


def arc_ratio_bound(lam, tips=None, m_range=None, k_range=None, depth=None):
    """Window sup of max(arc_ratio, 1/arc_ratio) over fans, mirroring the
    shear-side distortion bound; returns per-tip reports and the global sup.

    Bounded sups as windows grow are the pinched-lambda quasisymmetry
    evidence; the reports carry every window ratio.
    """
    depth = lam.depth if depth is None else depth
    tess = shared_tessellation(depth + 1)
    tips = tess.vertices() if tips is None \
        else [ExtendedRational(t) for t in tips]
    reports = {}
    sup_all = None
    for tip in tips:
        wins = _tip_windows(tess, tip, m_range, k_range, depth)
        if not wins:
            continue
        lo = min(m - k for m, k in wins) - 1
        hi = max(m + k for m, k in wins) + 1
        edges_ = fan(tip, lo, hi)
        arcs = _fan_wedge_arcs(lam, tip, edges_)
        truncated = any(_edge_gen(tess, e) > lam.depth for e in edges_)
        csum = [0.0]
        for arc in arcs:
            csum.append(csum[-1] + arc)
        ratios = {}
        sup = None
        for m, k in wins:
            up = csum[m + k - lo + 1] - csum[m - lo]
            down = csum[m - lo] - csum[m - k - 1 - lo]
            q = up / down
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


@dataclass
class PinchReport:
    """Range scan of a lambda function against a multiplicative bound."""

    ok: bool
    bound: float
    min_edge: FareyEdge | None
    min_value: float | None
    max_edge: FareyEdge | None
    max_value: float | None
    vacuous: bool

    def __bool__(self):
        return self.ok


def pinched_check(lam, k):
    """Whether every supported lambda lies in [1/k, k], with extremal edges.

    An empty support passes vacuously and says so.
    """
    if not k >= 1.0:
        raise ValueError(f"pinch bound must be >= 1, got {k}")
    if not lam.support:
        return PinchReport(True, float(k), None, None, None, None, True)
    min_e = min(lam.support, key=lam.support.get)
    max_e = max(lam.support, key=lam.support.get)
    lo, hi = lam.support[min_e], lam.support[max_e]
    ok = lo >= 1.0 / k and hi <= k
    return PinchReport(ok, float(k), min_e, lo, max_e, hi, False)
