"""Moebius maps on the extended reals, shears of ideal triangles, horocycles.

Matrices keep int or Fraction entries when built from exact data, so vertex
images of Farey points stay exact; float entries appear as soon as any
transcendental quantity (e^t) enters.  Determinants are positive throughout
and renormalized to 1 on demand rather than eagerly, since normalization
forces floats.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .rationals import ExtendedRational, INFINITY, cyclic_orient

_EXACT = (int, Fraction)


class DegenerateInputError(ValueError):
    pass


def _as_proj(x):
    """Projective pair (num, den) over floats or exact numbers; infinity is (1, 0)."""
    if isinstance(x, ExtendedRational):
        return (x.num, x.den)
    if isinstance(x, _EXACT):
        return (x, 1)
    x = float(x)
    if math.isinf(x):
        return (1.0, 0.0)
    return (x, 1.0)


def _pdiff(u, v):
    return u[0] * v[1] - v[0] * u[1]


def proj_cyclic_orient(x, y, z):
    """Sign of the cyclic order of three boundary points, float or exact."""
    if all(isinstance(p, ExtendedRational) for p in (x, y, z)):
        return cyclic_orient(x, y, z)
    px, py, pz = _as_proj(x), _as_proj(y), _as_proj(z)
    v = _pdiff(px, py) * _pdiff(py, pz) * _pdiff(pz, px)
    return (v > 0) - (v < 0)


def _same_point(x, y):
    return _pdiff(_as_proj(x), _as_proj(y)) == 0


class MoebiusMap:
    """Matrix (a b; c d) acting by x -> (ax+b)/(cx+d), determinant > 0."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        det = a * d - b * c
        if det <= 0:
            raise DegenerateInputError(f"matrix determinant {det} is not positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusMap is immutable")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def is_exact(self):
        return all(isinstance(v, _EXACT) for v in (self.a, self.b, self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def normalized(self):
        """Float matrix with determinant 1 representing the same map."""
        r = math.sqrt(float(self.det))
        return MoebiusMap(float(self.a) / r, float(self.b) / r,
                          float(self.c) / r, float(self.d) / r)

    def apply(self, x):
        """Image of a boundary point; exact in, exact out when the matrix is exact."""
        if isinstance(x, ExtendedRational) and self.is_exact:
            num = self.a * x.num + self.b * x.den
            den = self.c * x.num + self.d * x.den
            if den == 0:
                return INFINITY
            return ExtendedRational(Fraction(num) / Fraction(den))
        nx, dx = _as_proj(x)
        num = float(self.a) * float(nx) + float(self.b) * float(dx)
        den = float(self.c) * float(nx) + float(self.d) * float(dx)
        if den == 0.0:
            return math.inf
        return num / den

    __call__ = apply

    def apply_complex(self, z):
        """Image of an interior (upper half-plane) point."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __matmul__(self, other):
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        det = self.det
        if self.is_exact:
            if isinstance(det, int) and det == 1:
                return MoebiusMap(self.d, -self.b, -self.c, self.a)
            return MoebiusMap(
                Fraction(self.d, det), Fraction(-self.b, det),
                Fraction(-self.c, det), Fraction(self.a, det))
        return MoebiusMap(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __repr__(self):
        return f"MoebiusMap({self.a}, {self.b}, {self.c}, {self.d})"


IDENTITY = MoebiusMap(1, 0, 0, 1)


def proj_equal_maps(m1, m2, tol=1e-10):
    """Equality up to scale: entries of the normalized matrices agree up to sign."""
    e1 = m1.normalized().entries()
    e2 = m2.normalized().entries()
    return any(
        all(abs(a - s * b) <= tol for a, b in zip(e1, e2)) for s in (1.0, -1.0)
    )


def triple_to_standard(x1, x2, x3):
    """Matrix sending (x1, x2, x3) to (0, 1, inf); requires positive cyclic order."""
    pts = (x1, x2, x3)
    for i in range(3):
        for j in range(i + 1, 3):
            if _same_point(pts[i], pts[j]):
                raise DegenerateInputError(f"repeated point in triple {pts}")
    if proj_cyclic_orient(x1, x2, x3) <= 0:
        raise DegenerateInputError(f"triple {pts} is not positively ordered")
    p1, p2, p3 = _as_proj(x1), _as_proj(x2), _as_proj(x3)
    # rows of z -> ((z - x1)(x2 - x3)) / ((z - x3)(x2 - x1)), projectively
    s = _pdiff(p2, p3)
    t = _pdiff(p2, p1)
    a, b = p1[1] * s, -p1[0] * s
    c, d = p3[1] * t, -p3[0] * t
    det = a * d - b * c
    if det < 0:
        a, b = -a, -b
    return MoebiusMap(a, b, c, d)


def map_triple(x1, x2, x3, y1, y2, y3):
    """The Moebius map sending (x1,x2,x3) to (y1,y2,y3), both positively ordered."""
    m = triple_to_standard(y1, y2, y3).inverse() @ triple_to_standard(x1, x2, x3)
    return m if m.is_exact else m.normalized()


def cross_ratio(a, b, c, d):
    """(c - a)(d - b) / ((d - a)(c - b)) with the usual infinity limits."""
    pts = (a, b, c, d)
    for i in range(4):
        for j in range(i + 1, 4):
            if _same_point(pts[i], pts[j]):
                raise DegenerateInputError(f"coincident points in cross-ratio {pts}")
    pa, pb, pc, pd = (_as_proj(x) for x in pts)
    num = _pdiff(pc, pa) * _pdiff(pd, pb)
    den = _pdiff(pd, pa) * _pdiff(pc, pb)
    if isinstance(num, _EXACT) and isinstance(den, _EXACT):
        return Fraction(num, den)
    return float(num) / float(den)


def hyperbolic_translation(axis, t):
    """Translation by signed length t along the axis, toward its second endpoint."""
    u, v = axis
    if _same_point(u, v):
        raise DegenerateInputError("axis endpoints coincide")
    pu, pv = _as_proj(u), _as_proj(v)
    # rows (den_u, -num_u) and (den_v, -num_v) send (u, v) to (0, inf); flip a
    # row if the determinant came out negative
    if _pdiff(pu, pv) > 0:
        n = MoebiusMap(pu[1], -pu[0], pv[1], -pv[0])
    else:
        n = MoebiusMap(-pu[1], pu[0], pv[1], -pv[0])
    h = math.exp(t / 2.0)
    d = MoebiusMap(h, 0.0, 0.0, 1.0 / h)
    return (n.inverse() @ d @ n).normalized()


def _off_vertex(tri, e):
    if len(tri) != 3 or _same_point(tri[0], tri[1]) or _same_point(tri[0], tri[2]) \
            or _same_point(tri[1], tri[2]):
        raise DegenerateInputError(f"not an ideal triangle: {tri}")
    off = [v for v in tri if not any(_same_point(v, w) for w in e)]
    if len(off) != 1:
        raise DegenerateInputError(
            f"triangle {tri} does not have the shared edge {e} as a side")
    return off[0]


def shear_of_pair(t1, t2, shared):
    """Signed shear of two ideal triangles glued along `shared`.

    Normalization route: send (off1, shared) to (-1, (0, inf)) preserving
    orientation; the image of off2 is then e^r on the positive axis.
    """
    u, v = shared
    b = _off_vertex(t1, shared)
    d = _off_vertex(t2, shared)
    if _same_point(b, d):
        raise DegenerateInputError("triangles coincide")
    if proj_cyclic_orient(b, u, v) <= 0:
        u, v = v, u
    if proj_cyclic_orient(b, u, v) <= 0:
        raise DegenerateInputError(f"degenerate shear configuration {t1} / {t2}")
    a = map_triple(b, u, v, -1, 0, INFINITY)
    w = a.apply(d)
    w = float(w)
    if not w > 0:
        raise DegenerateInputError(
            "triangles overlap: off-edge vertices on the same side of the shared edge")
    return math.log(w)


def shear_cross_ratio(t1, t2, shared):
    """Same shear via the cross-ratio formula; exact Fraction argument when possible.

    With the quadrilateral (a, b, c, d) negatively ordered, diagonal (a, c) the
    shared edge, b in t1 and d in t2, the shear is ln(-((d-a)(b-c))/((d-c)(b-a))).
    Returns (log_argument, shear).
    """
    u, v = shared
    b = _off_vertex(t1, shared)
    d = _off_vertex(t2, shared)
    if proj_cyclic_orient(u, b, v) >= 0:
        u, v = v, u
    pa, pb, pc, pd = (_as_proj(x) for x in (u, b, v, d))
    num = _pdiff(pd, pa) * _pdiff(pb, pc)
    den = _pdiff(pd, pc) * _pdiff(pb, pa)
    if den == 0 or num == 0:
        raise DegenerateInputError("degenerate shear quadrilateral")
    if isinstance(num, _EXACT) and isinstance(den, _EXACT):
        arg = Fraction(-num, den)
    else:
        arg = -float(num) / float(den)
    if arg <= 0:
        raise DegenerateInputError("shear quadrilateral is not in circular order")
    return arg, math.log(arg)


class Horocycle:
    """Horocycle at a boundary point: Euclidean diameter if the center is finite,
    height of the horizontal line if the center is infinity."""

    __slots__ = ("center", "size")

    def __init__(self, center, size):
        size = float(size)
        if not size > 0:
            raise DegenerateInputError(f"horocycle size must be positive, got {size}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "size", size)

    def __setattr__(self, name, value):
        raise AttributeError("Horocycle is immutable")

    @property
    def at_infinity(self):
        n, dn = _as_proj(self.center)
        return dn == 0

    def transform(self, m):
        """Image horocycle under a Moebius map; the rule is exact in the center."""
        mn = m if (m.is_exact and m.det == 1) else m.normalized()
        c, d = float(mn.c), float(mn.d)
        img = mn.apply(self.center)
        if self.at_infinity:
            if c == 0.0:
                return Horocycle(img, self.size * float(mn.a) ** 2)
            return Horocycle(img, 1.0 / (c * c * self.size))
        x = float(self.center)
        denom = c * x + d
        if denom == 0.0:
            return Horocycle(img, 1.0 / (c * c * self.size))
        return Horocycle(img, self.size / (denom * denom))

    def __repr__(self):
        return f"Horocycle({self.center}, {self.size})"


def horocycle_distance(c1, c2):
    """Signed distance between horocycles along the geodesic joining their centers.

    Zero for tangent horocycles, positive when disjoint, negative when nested
    inside each other's horoballs.
    """
    if _same_point(c1.center, c2.center):
        raise DegenerateInputError("horocycles share their center")
    if c1.at_infinity or c2.at_infinity:
        fin, inf_ = (c2, c1) if c1.at_infinity else (c1, c2)
        return math.log(inf_.size / fin.size)
    if isinstance(c1.center, ExtendedRational) and isinstance(c2.center, ExtendedRational):
        # exact difference: nearby rational centers cancel too many float bits
        sq = float((c1.center.as_fraction() - c2.center.as_fraction()) ** 2)
    else:
        x1, x2 = float(c1.center), float(c2.center)
        sq = (x1 - x2) ** 2
    return math.log(sq / (c1.size * c2.size))


def wedge_horocyclic_length(c, g1, g2):
    """Length of the horocyclic arc cut from c by two geodesics sharing its center."""
    tip = c.center

    def other_end(g):
        u, v = g
        if _same_point(u, tip):
            return v
        if _same_point(v, tip):
            return u
        raise DegenerateInputError(f"geodesic {g} does not end at the horocycle center")

    e1, e2 = other_end(g1), other_end(g2)
    if _same_point(e1, e2):
        raise DegenerateInputError("the two geodesics coincide")
    if not c.at_infinity:
        # z -> -d/(dz - n) sends the tip n/d to infinity, exactly for exact tips
        n, d = _as_proj(tip)
        m = MoebiusMap(0, -d, d, -n)
        c = c.transform(m)
        e1, e2 = m.apply(e1), m.apply(e2)
    x1, x2 = float(e1), float(e2)
    if math.isinf(x1) or math.isinf(x2):
        raise DegenerateInputError("wedge arc is infinite")
    return abs(x1 - x2) / c.size


def to_disk(z):
    """Cayley transform to the unit disk; accepts interior or boundary points."""
    if isinstance(z, ExtendedRational):
        if z.is_infinity:
            return complex(1.0, 0.0)
        z = float(z)
    if isinstance(z, complex):
        return (z - 1j) / (z + 1j)
    z = float(z)
    if math.isinf(z):
        return complex(1.0, 0.0)
    return (z - 1j) / (z + 1j)
