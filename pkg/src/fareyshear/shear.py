"""Shear coordinates of circle maps, and the reverse cocycle construction.

A monotone boundary map h fixing the base triangle induces a real number on
every Farey edge: the shear of the h-images of the edge's two flanking
triangles.  Conversely a finitely supported shear function composes hyperbolic
translations along dual-tree paths into a piecewise-Moebius cocycle whose
vertex values give back a monotone map.  Both directions live here; the
numeric heavy lifting (tree products, batched shears) goes through _kernels.
"""

from __future__ import annotations

import math
import weakref
from fractions import Fraction

import numpy as np

from . import _kernels
from .farey import (
    BASE_TRIANGLE,
    DepthExceededError,
    FareyEdge,
    fan,
    generation,
    shared_tessellation,
    walk_address,
)
from .moebius import (
    DegenerateInputError,
    IDENTITY,
    MoebiusMap,
    hyperbolic_translation,
    proj_cyclic_orient,
    shear_cross_ratio,
)
from .rationals import ER, INFINITY, ExtendedRational, cyclic_orient


class MonotonicityError(ValueError):
    pass


class ShearMap:
    """Finitely supported real-valued function on Farey edges.

    Lookups outside the support return the default (normally 0); depth records
    the largest generation the support is meant to cover.
    """

    def __init__(self, support=None, default=0.0, depth=0):
        table = {}
        for e, val in (support or {}).items():
            e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
            table[e] = float(val)
        self.support = table
        self.default = float(default)
        self.depth = int(depth)

    def value(self, e):
        return self.support.get(e, self.default)

    __call__ = value

    def in_support(self, e):
        return e in self.support

    def items(self):
        return self.support.items()

    @classmethod
    def zero(cls, depth=0):
        return cls({}, 0.0, depth)

    def __repr__(self):
        return (f"ShearMap({len(self.support)} edges, default={self.default}, "
                f"depth={self.depth})")


class VertexMap:
    """Monotone boundary map evaluated on Farey vertices.

    Subclasses implement __call__; prepare(max_level) is a hook for maps that
    need tessellation-depth-dependent precomputation (the earthquake family).

    eval_composed(m, x) evaluates (m o h)(x).  The default just applies m to
    the rounded value of h(x) and gains nothing, but chart-aware maps override
    it to compose matrices before rounding; shear extraction renormalizes each
    edge quadruple through this hook so that exponentially crowded images do
    not wash out the cross-ratios.  supports_charts advertises the override.
    """

    name = "vertex-map"
    fixes_base = True
    supports_charts = False

    def prepare(self, max_level):
        pass

    def __call__(self, x):
        raise NotImplementedError

    def eval_composed(self, m, x):
        return m.apply(self(x))

    def chart_gauge(self, tri_index):
        """Approximate inverse of the map's forward matrix on the indexed
        triangle, or None.  With a gauge, extraction renormalizes an edge
        quadruple analytically instead of fitting a Moebius map to float
        images, which matters once the images crowd together."""
        return None


class _FuncMap(VertexMap):
    def __init__(self, func, name, fixes_base=True):
        self._func = func
        self.name = name
        self.fixes_base = fixes_base

    def __call__(self, x):
        return self._func(ExtendedRational(x))


class _MoebiusVertexMap(VertexMap):
    supports_charts = True

    def __init__(self, m):
        self.matrix = m
        self.name = f"moebius({m.a},{m.b},{m.c},{m.d})"
        self.fixes_base = all(
            _images_equal(m.apply(v), v) for v in BASE_TRIANGLE)

    def __call__(self, x):
        return self.matrix.apply(ExtendedRational(x))

    def eval_composed(self, m, x):
        x = ExtendedRational(x)
        if m.is_exact and self.matrix.is_exact:
            return (m @ self.matrix).apply(x)
        f = _ld_mat(m) @ _ld_mat(self.matrix)
        return _ld_apply(f, x)

    def chart_gauge(self, tri_index):
        return self.matrix.inverse()


def _images_equal(img, v):
    if isinstance(img, ExtendedRational):
        return img == v
    if v.is_infinity:
        return math.isinf(img)
    return img == float(v)


def _ld_mat(m):
    """Extended-precision array of a Moebius map's entries.

    Rounding the entries is harmless here: a renormalizer applied consistently
    to a whole quadruple is still one Moebius map, so cross-ratios only feel
    the evaluation rounding, never the entry rounding.
    """
    return np.array([[float(m.a), float(m.b)], [float(m.c), float(m.d)]],
                    dtype=np.longdouble)


def _ld_apply(f, x):
    num = f[0, 0] * x.num + f[0, 1] * x.den
    den = f[1, 0] * x.num + f[1, 1] * x.den
    return math.inf if den == 0.0 else num / den


class CharVertexMap(VertexMap):
    """Characteristic map of a shear function, evaluated lazily at the depth
    the caller ends up needing."""

    supports_charts = True

    def __init__(self, s, name=None):
        self.shear_map = s
        self.name = name or "char-map"
        self._cm = None

    def prepare(self, max_level):
        if self._cm is None or self._cm.levels < max_level:
            self._cm = CharacteristicMap(
                self.shear_map, levels=max(max_level, self.shear_map.depth + 1))

    @property
    def char_map(self):
        if self._cm is None:
            self.prepare(self.shear_map.depth + 1)
        return self._cm

    def __call__(self, x):
        return self.char_map(x)

    def eval_composed(self, m, x):
        return self.char_map.eval_composed(m, x)

    def chart_gauge(self, tri_index):
        hm = self.char_map._mats[tri_index]
        return MoebiusMap(hm[1, 1], -hm[0, 1], -hm[1, 0], hm[0, 0])


class _EarthquakeMap(CharVertexMap):
    """Constant shear on the whole fan at infinity, zero elsewhere.

    The support is materialized out to whatever depth evaluation requires;
    truncation is harmless because a vertex image only sees crossed edges.
    """

    def __init__(self, c):
        self.c = float(c)
        super().__init__(ShearMap.zero(), name=f"fan_earthquake({c})")

    def prepare(self, max_level):
        if self._cm is not None and self._cm.levels >= max_level:
            return
        self.shear_map = self.shear_map_to(max_level + 1)
        self._cm = CharacteristicMap(self.shear_map, levels=max_level)

    def shear_map_to(self, fan_radius):
        """The shear data alone, out to fan indices +-fan_radius.

        Chain scans need fan values far beyond any tessellation depth a
        characteristic map could be developed to, so this does not touch the
        developed map at all.
        """
        support = {e: self.c for e in fan(INFINITY, -fan_radius, fan_radius)}
        return ShearMap(support, 0.0, fan_radius)


def builtin_homeo(family, *params):
    """Built-in monotone families: moebius(a,b,c,d), piecewise_linear(k),
    power(alpha), fan_earthquake(c)."""
    if family == "moebius":
        if len(params) != 4:
            raise ValueError("moebius needs 4 parameters")
        return _MoebiusVertexMap(MoebiusMap(*params))
    if family == "piecewise_linear":
        (k,) = params
        if not k > 0:
            raise ValueError(f"piecewise_linear slope must be positive, got {k}")
        if isinstance(k, (int, Fraction)):
            kf = Fraction(k)

            def pl(x):
                if x.is_infinity or x.num >= 0:
                    return x
                return ExtendedRational(kf * x.as_fraction())
        else:
            k = float(k)

            def pl(x):
                if x.is_infinity:
                    return math.inf
                v = np.longdouble(x.num) / np.longdouble(x.den)
                return v if v >= 0 else k * v
        return _FuncMap(pl, f"piecewise_linear({k})")
    if family == "power":
        (alpha,) = params
        if not alpha > 0:
            raise ValueError(f"power exponent must be positive, got {alpha}")
        if alpha == 1:
            return _FuncMap(lambda x: x, "power(1)")
        a = float(alpha)

        def pw(x):
            if x.is_infinity:
                return math.inf
            v = np.longdouble(x.num) / np.longdouble(x.den)
            return np.copysign(np.abs(v) ** a, v)
        return _FuncMap(pw, f"power({alpha})")
    if family == "fan_earthquake":
        (c,) = params
        return _EarthquakeMap(c)
    raise ValueError(f"unknown family {family!r}")


def compose_moebius(m, vmap):
    """The map x -> m(vmap(x)) as a VertexMap."""
    inner = vmap if isinstance(vmap, VertexMap) else _FuncMap(vmap, "custom")
    minv = m.inverse()

    class _Composed(VertexMap):
        name = f"compose({m!r}, {inner.name})"
        fixes_base = False
        supports_charts = inner.supports_charts

        def prepare(self, max_level):
            inner.prepare(max_level)

        def __call__(self, x):
            return m.apply(inner(x))

        def eval_composed(self, outer, x):
            return inner.eval_composed(outer @ m, x)

        def chart_gauge(self, tri_index):
            g = inner.chart_gauge(tri_index)
            return None if g is None else g @ minv

    return _Composed()


def oriented_edge(e, witness):
    """Endpoints of e ordered so the witness side (toward the base triangle)
    lies to the left of the oriented axis."""
    if cyclic_orient(e.b, witness, e.a) > 0:
        return (e.a, e.b)
    return (e.b, e.a)


def _proj_pair(val):
    if isinstance(val, ExtendedRational):
        if val.is_infinity:
            return (1.0, 0.0)
        if abs(val.num) < (1 << 62) and val.den < (1 << 62):
            return (np.longdouble(val.num) / np.longdouble(val.den), 1.0)
        return (float(val), 1.0)
    if math.isinf(val):
        return (1.0, 0.0)
    return (val, 1.0)


def _check_monotone(verts, images, tol=1e-12):
    """Circle-order check of vertex images; verts must be in circle order."""
    pairs = [_proj_pair(images[v]) for v in verts]
    n = len(pairs)
    for i in range(n):
        u, w = pairs[i], pairs[(i + 1) % n]
        cross = u[0] * w[1] - w[0] * u[1]
        if u[1] != 0.0 and w[1] != 0.0 and abs(cross) <= tol:
            raise DegenerateInputError(
                f"images of {verts[i].key} and {verts[(i + 1) % n].key} "
                f"coincide within {tol}")
        if u[1] == 0.0 and w[1] == 0.0:
            raise DegenerateInputError(
                f"both {verts[i].key} and {verts[(i + 1) % n].key} map to infinity")
    for i in range(n):
        a, b, c = pairs[i], pairs[(i + 1) % n], pairs[(i + 2) % n]
        v = (a[0] * b[1] - b[0] * a[1]) * (b[0] * c[1] - c[0] * b[1]) \
            * (c[0] * a[1] - a[0] * c[1])
        if not v > 0:
            raise MonotonicityError(
                f"images not monotone around {verts[(i + 1) % n].key}")


def shear_from_homeo(h, depth, tess=None):
    """Shear map of a monotone boundary map on every edge of generation <= depth.

    Exactly valued maps go through rational cross-ratios.  Chart-aware maps
    (characteristic maps, Moebius compositions) are renormalized per edge, so
    the accuracy does not degrade where images crowd together; plain float
    maps fall back to global cross-ratios.
    """
    levels = depth + 1
    tess = tess or shared_tessellation(levels)
    if isinstance(h, VertexMap):
        h.prepare(levels)
    edges = tess.edges(depth)
    if isinstance(h, CharVertexMap):
        # monotone by construction; degenerate numbers surface as non-finite
        # shears, so the global image pass is skipped entirely
        return _extract_from_char(h.char_map, edges, depth)
    verts = tess.vertices()
    images = {v: h(v) for v in verts}
    _check_monotone(verts, images)
    if all(isinstance(images[v], ExtendedRational) for v in verts):
        return _extract_exact(tess, edges, images, depth)
    if getattr(h, "supports_charts", False):
        return _extract_chartwise(h, tess, edges, images, depth)
    return _extract_global(tess, edges, images, verts, depth)


def _arranged_quad(tess, e):
    """(u, boff, v, doff) with (u, boff, v) negatively ordered, exactly."""
    f1, f2 = tess.flanks(e)
    boff = tess.off_vertex(f1, e)
    doff = tess.off_vertex(f2, e)
    u, v = e.a, e.b
    if cyclic_orient(u, boff, v) > 0:
        u, v = v, u
    return u, boff, v, doff


def _extract_exact(tess, edges, images, depth):
    support = {}
    for e in edges:
        boff, doff = tess.quadrilateral(e)
        _, s = shear_cross_ratio(
            (images[e.a], images[boff], images[e.b]),
            (images[e.a], images[e.b], images[doff]),
            (images[e.a], images[e.b]))
        support[e] = s
    return ShearMap(support, 0.0, depth)


def _extract_from_char(cm, edges, depth):
    """Batched chartwise extraction: each edge quadruple is read off in the
    chart of its near-side flanking triangle, where the first three points are
    the original vertices and only the far vertex moves.  The far flank is by
    construction the tree child of the near flank across this very edge, so
    the chart-relative motion (H_near)^-1 H_far is the far flank's own
    translation factor; rebuilding just that factor sidesteps the long cocycle
    products whose cancellation would eat most of the mantissa.  The factor
    and the cross-ratios run in extended precision because the integer vertex
    coordinates still force a few digits of cancellation at depth 10+."""
    tess = cm.tess
    frame = _cocycle_frame(tess)
    n = len(edges)
    i2 = np.empty(n, dtype=np.int64)
    quads = np.empty((n, 4, 2), dtype=np.longdouble)
    for j, e in enumerate(edges):
        f1, f2 = tess.flanks(e)
        boff = tess.off_vertex(f1, e)
        doff = tess.off_vertex(f2, e)
        u, v = e.a, e.b
        if cyclic_orient(u, boff, v) > 0:
            u, v = v, u
        i2[j] = f2
        quads[j, 0] = (u.num, u.den)
        quads[j, 1] = (boff.num, boff.den)
        quads[j, 2] = (v.num, v.den)
        quads[j, 3] = (doff.num, doff.den)
    tm = _translation_batch(frame["coords"][i2].astype(np.longdouble),
                            cm._tvals[i2].astype(np.longdouble))
    dn = tm[:, 0, 0] * quads[:, 3, 0] + tm[:, 0, 1] * quads[:, 3, 1]
    dd = tm[:, 1, 0] * quads[:, 3, 0] + tm[:, 1, 1] * quads[:, 3, 1]
    quads[:, 3, 0] = dn
    quads[:, 3, 1] = dd
    vals = _shear_quads_any(quads)
    bad = np.nonzero(~np.isfinite(vals))[0]
    if bad.size:
        raise DegenerateInputError(
            f"degenerate image quadrilateral at edge {edges[int(bad[0])].key}")
    return ShearMap(dict(zip(edges, map(float, vals))), 0.0, depth)


def _shear_quads_any(q):
    """Dtype-preserving twin of the shear kernel, for extended-precision rows."""
    def pd(u, v):
        return u[:, 0] * v[:, 1] - v[:, 0] * u[:, 1]

    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = -(pd(d, a) * pd(b, c)) / (pd(d, c) * pd(b, a))
        return np.log(arg)


def _quad_shear_floats(pa, pb, pc, pd):
    def pdf(u, v):
        return u[0] * v[1] - v[0] * u[1]

    den = pdf(pd, pc) * pdf(pb, pa)
    if den == 0.0:
        return math.nan
    arg = -(pdf(pd, pa) * pdf(pb, pc)) / den
    return float(np.log(arg)) if arg > 0 else math.nan


def _extract_chartwise(h, tess, edges, images, depth):
    """Per-edge renormalized extraction through eval_composed.

    With a chart gauge the renormalizer is the exact rational map taking the
    near flank triangle to (-1, 0, oo), composed with the gauge; the float
    images never enter it, so its quality does not degrade with depth.
    Without a gauge the renormalizer is fitted to the images of the near
    triangle, which is only as good as those images are separated.
    """
    from .moebius import map_triple

    minus_one, zero = ER(-1), ER(0)
    support = {}
    for e in edges:
        u, boff, v, doff = _arranged_quad(tess, e)
        f1 = tess.flanks(e)[0]
        gauge = h.chart_gauge(f1)
        if gauge is None:
            tri = sorted(tess.triangles[f1].verts, key=lambda x: x.sort_key())
            m = map_triple(images[tri[0]], images[tri[1]], images[tri[2]], *tri)
        else:
            m = map_triple(boff, u, v, minus_one, zero, INFINITY) @ gauge
        pts = [_proj_pair(h.eval_composed(m, x)) for x in (u, boff, v, doff)]
        s = _quad_shear_floats(*pts)
        if math.isnan(s):
            raise DegenerateInputError(
                f"degenerate image quadrilateral at edge {e.key}")
        support[e] = s
    return ShearMap(support, 0.0, depth)


def _extract_global(tess, edges, images, verts, depth):
    idx = {v: i for i, v in enumerate(verts)}
    pairs = [_proj_pair(images[v]) for v in verts]
    dtype = np.result_type(np.float64, *[p[0] for p in pairs])
    pts = np.array(pairs, dtype=dtype)
    rows = np.empty((len(edges), 4, 2), dtype=dtype)
    for j, e in enumerate(edges):
        u, boff, v, doff = _arranged_quad(tess, e)
        rows[j, 0] = pts[idx[u]]
        rows[j, 1] = pts[idx[boff]]
        rows[j, 2] = pts[idx[v]]
        rows[j, 3] = pts[idx[doff]]
    if dtype == np.float64:
        vals = _kernels.shear_quads(rows)
    else:
        vals = _shear_quads_any(rows)
    bad = np.nonzero(~np.isfinite(vals))[0]
    if bad.size:
        raise DegenerateInputError(
            f"degenerate image quadrilateral at edge {edges[int(bad[0])].key}")
    return ShearMap(dict(zip(edges, map(float, vals))), 0.0, depth)


def shear_log_args_exact(h, depth, tess=None):
    """Exact cross-ratio arguments e^{s(e)} per edge, for exactly valued maps.

    The shear is the log of each value; a map is a shear-zero map exactly when
    every argument is the fraction 1.
    """
    levels = depth + 1
    tess = tess or shared_tessellation(levels)
    if isinstance(h, VertexMap):
        h.prepare(levels)
    images = {v: h(v) for v in tess.vertices()}
    for v, img in images.items():
        if not isinstance(img, ExtendedRational):
            raise TypeError(f"image of {v.key} is not exact: {img!r}")
    out = {}
    for e in tess.edges(depth):
        boff, doff = tess.quadrilateral(e)
        arg, _ = shear_cross_ratio(
            (images[e.a], images[boff], images[e.b]),
            (images[e.a], images[e.b], images[doff]),
            (images[e.a], images[e.b]))
        out[e] = arg
    return out


_frames = weakref.WeakKeyDictionary()


def _cocycle_frame(tess):
    """Per-tessellation arrays for the batched cocycle product: the oriented
    crossed-edge endpoints of every triangle, projectively, plus parents."""
    frame = _frames.get(tess)
    if frame is not None:
        return frame
    n = len(tess.triangles)
    parents = np.empty(n, dtype=np.int64)
    parents[0] = -1
    coords = np.zeros((n, 4))
    coords[0] = (0.0, 1.0, 1.0, 0.0)  # placeholder axis; the base factor is identity
    edges = [None] * n
    for rec in tess.triangles[1:]:
        parents[rec.index] = rec.parent
        witness = tess.off_vertex(rec.parent, rec.crossed)
        a, b = oriented_edge(rec.crossed, witness)
        coords[rec.index] = (a.num, a.den, b.num, b.den)
        edges[rec.index] = rec.crossed
    verts = tess.vertices()
    vpts = np.array([(float(v.num), float(v.den)) for v in verts])
    vtri = np.array([tess.vertex_intro_tri[v] for v in verts], dtype=np.int64)
    frame = {
        "parents": parents, "coords": coords, "edges": edges,
        "verts": verts, "vpts": vpts, "vtri": vtri,
    }
    _frames[tess] = frame
    return frame


def _translation_batch(coords, tvals):
    """2x2 translation matrices along oriented axes (nu/du -> nv/dv), batched.

    Output dtype follows the inputs, so the same formula serves the float64
    cocycle build and the extended-precision per-edge rebuild.
    """
    nu, du, nv, dv = coords[:, 0], coords[:, 1], coords[:, 2], coords[:, 3]
    mu = nu * dv - nv * du
    hp = np.exp(tvals / 2.0)
    hm = np.exp(-tvals / 2.0)
    out = np.empty((coords.shape[0], 2, 2), dtype=np.result_type(coords, tvals))
    out[:, 0, 0] = (-nv * du * hp + nu * dv * hm) / mu
    out[:, 0, 1] = nu * nv * (hp - hm) / mu
    out[:, 1, 0] = du * dv * (hm - hp) / mu
    out[:, 1, 1] = (dv * nu * hp - du * nv * hm) / mu
    return out


class CharacteristicMap:
    """All cocycle maps and vertex images of a shear function, precomputed.

    Construction runs the batched tree product over a tessellation with the
    given number of levels (default: deep enough for every edge the shear map
    covers to have both flanking triangles).
    """

    def __init__(self, s, levels=None, tess=None):
        self.shear_map = s
        self.levels = s.depth + 1 if levels is None else levels
        self.tess = tess or shared_tessellation(self.levels)
        frame = _cocycle_frame(self.tess)
        tvals = np.array([0.0 if e is None else s.value(e)
                          for e in frame["edges"]])
        tmats = _translation_batch(frame["coords"], tvals)
        tmats[0] = np.eye(2)
        self._tvals = tvals
        self._mats = _kernels.tree_cocycles(frame["parents"], tmats)
        imgs = _kernels.apply_proj_batch(self._mats[frame["vtri"]], frame["vpts"])
        self._images = {}
        for v, (num, den) in zip(frame["verts"], imgs):
            self._images[v] = math.inf if den == 0.0 else num / den
        self.beyond_support = [e for e in frame["edges"]
                               if e is not None and generation(e) > s.depth
                               and not s.in_support(e)] if s.depth + 1 < self.levels else []

    def __call__(self, x):
        x = ExtendedRational(x)
        try:
            return self._images[x]
        except KeyError:
            raise DepthExceededError(
                f"vertex {x.key} not reachable within {self.levels} levels") from None

    def vertex_images(self):
        return dict(self._images)

    def eval_composed(self, m, x):
        """(m o h)(x) with the matrices composed before rounding the value."""
        x = ExtendedRational(x)
        tri = self.tess.vertex_intro_tri.get(x)
        if tri is None:
            raise DepthExceededError(
                f"vertex {x.key} not reachable within {self.levels} levels")
        f = _ld_mat(m) @ self._mats[tri].astype(np.longdouble)
        return _ld_apply(f, x)

    def triangle_map(self, address):
        rec = self.tess.triangle_at(address)
        m = self._mats[rec.index]
        return MoebiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def cocycle(s, t):
    """Composed translation along the dual path to the triangle at address t.

    Factors are ordered with the edge nearest the base triangle outermost;
    each axis is oriented by the witness rule of oriented_edge.
    """
    h = IDENTITY
    prev = None
    for verts, crossed in walk_address(t):
        if crossed is not None:
            witness = [v for v in prev if v not in crossed][0]
            a, b = oriented_edge(crossed, witness)
            h = (h @ hyperbolic_translation((a, b), s.value(crossed))).normalized()
        prev = verts
    return h


def char_map_eval(s, x):
    """Value of the characteristic map at one vertex.

    For repeated evaluation build a CharacteristicMap once instead; this
    convenience rebuilds (or fetches the cached) tessellation per call.
    """
    x = ExtendedRational(x)
    if x in BASE_TRIANGLE:
        return math.inf if x.is_infinity else float(x)
    lev = max(s.depth + 1, _intro_level(x))
    return CharacteristicMap(s, levels=lev)(x)


def _intro_level(x):
    from .farey import min_fan_index, normalizer_to_infinity

    inv = normalizer_to_infinity(x).inverse()
    n = min_fan_index(x)
    return generation(FareyEdge(x, inv.apply(ER(n))))


def random_shear_map(rng, depth, low=-1.0, high=1.0, tess=None):
    """Uniform random values on every edge of generation <= depth."""
    tess = tess or shared_tessellation(depth + 1)
    support = {e: rng.uniform(low, high) for e in tess.edges(depth)}
    return ShearMap(support, 0.0, depth)
