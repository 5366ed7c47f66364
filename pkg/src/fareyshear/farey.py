"""Combinatorics of the Farey tessellation.

Edges join p/q and r/s with |ps - qr| = 1; the base triangle is (0, 1, inf).
Reflecting a triangle across an edge replaces the opposite vertex by the
other flanking vertex, which is how the whole tessellation is enumerated:
a breadth-first expansion outward from the base triangle.  The generation of
an edge is its BFS depth in that expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .moebius import MoebiusMap
from .rationals import ER, INFINITY, ExtendedRational


class NotFareyEdgeError(ValueError):
    pass


class ChainError(ValueError):
    pass


class DepthExceededError(LookupError):
    pass


def is_farey_edge(a, b):
    """True when a and b are Farey neighbours: |ps - qr| = 1."""
    a, b = ExtendedRational(a), ExtendedRational(b)
    return abs(a.num * b.den - b.num * a.den) == 1


class FareyEdge:
    """Unordered Farey edge, stored canonically: finite endpoints ascending, infinity last."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a, b = ExtendedRational(a), ExtendedRational(b)
        if a == b or abs(a.num * b.den - b.num * a.den) != 1:
            raise NotFareyEdgeError(f"not a Farey edge: ({a.key}, {b.key})")
        if a.is_infinity or (not b.is_infinity and b.as_fraction() < a.as_fraction()):
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("FareyEdge is immutable")

    @property
    def key(self):
        return f"{self.a.key}|{self.b.key}"

    @classmethod
    def from_key(cls, text):
        try:
            left, right = text.split("|", 1)
        except ValueError:
            raise NotFareyEdgeError(f"malformed edge key: {text!r}") from None
        return cls(ExtendedRational.parse(left), ExtendedRational.parse(right))

    def endpoints(self):
        return (self.a, self.b)

    def other(self, v):
        if v == self.a:
            return self.b
        if v == self.b:
            return self.a
        raise ValueError(f"{v!r} is not an endpoint of {self!r}")

    def __contains__(self, v):
        return v == self.a or v == self.b

    def shares_endpoint(self, other):
        common = {self.a, self.b} & {other.a, other.b}
        return next(iter(common)) if common else None

    def sort_key(self):
        return (self.a.sort_key(), self.b.sort_key())

    def __eq__(self, other):
        return (
            isinstance(other, FareyEdge) and self.a == other.a and self.b == other.b
        )

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Edge({self.key})"


def edge(a, b):
    return FareyEdge(a, b)


def mediant(a, b):
    a, b = ExtendedRational(a), ExtendedRational(b)
    return ExtendedRational(a.num + b.num, a.den + b.den)


def flanking_vertices(e):
    """The two third vertices completing e to a triangle: the mediant and anti-mediant."""
    a, b = e.a, e.b
    m = ExtendedRational(a.num + b.num, a.den + b.den)
    w = ExtendedRational(a.num - b.num, a.den - b.den)
    return (m, w)


BASE_TRIANGLE = (ER(0), ER(1), INFINITY)
BASE_EDGES = (FareyEdge(0, 1), FareyEdge(1, INFINITY), FareyEdge(0, INFINITY))


def _toward_base(e):
    """The flanking vertex of a non-base edge on the side facing the base triangle."""
    m, w = flanking_vertices(e)
    km = (m.den, abs(m.num))
    kw = (w.den, abs(w.num))
    if km == kw:  # only happens for the base edge (0, inf), handled by callers
        raise ValueError(f"ambiguous parent side for {e!r}")
    return m if km < kw else w


def parent_edge(e):
    """The edge crossed one step toward the base triangle; None for base edges."""
    if e in BASE_EDGES:
        return None
    v = _toward_base(e)
    # the parent triangle (e.a, e.b, v) was entered across one of its two
    # v-edges; that edge is the one whose own away-side flank is e's off-vertex
    for cand in (FareyEdge(e.a, v), FareyEdge(e.b, v)):
        if cand in BASE_EDGES:
            return cand
        m, w = flanking_vertices(cand)
        away = w if _toward_base(cand) == m else m
        if away == e.other(cand.shares_endpoint(e)):
            return cand
    raise AssertionError(f"no parent edge found for {e!r}")


def generation(e):
    """BFS depth of e in the expansion from the three base edges."""
    e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
    g = 0
    while e not in BASE_EDGES:
        e = parent_edge(e)
        g += 1
    return g


@dataclass(frozen=True)
class TriangleAddress:
    """Root-face selector plus an L/R descent word; the base triangle has face None."""

    face: FareyEdge | None
    word: tuple = ()

    def __post_init__(self):
        if self.face is None and self.word:
            raise ValueError("base triangle address has an empty word")
        if any(c not in ("L", "R") for c in self.word):
            raise ValueError(f"address word must be over L/R: {self.word!r}")

    @property
    def depth(self):
        return 0 if self.face is None else 1 + len(self.word)


def _children_edges(crossed, apex):
    """The two new edges of the triangle entered across `crossed`, in L/R order."""
    e1 = FareyEdge(crossed.a, apex)
    e2 = FareyEdge(crossed.b, apex)
    return (e1, e2) if e1.sort_key() <= e2.sort_key() else (e2, e1)


def walk_address(t):
    """Yield (vertices, crossed_edge) along the dual-tree path from the base triangle.

    The base triangle itself is yielded first with crossed_edge None.
    """
    verts = BASE_TRIANGLE
    yield verts, None
    if t.face is None:
        return
    crossed = t.face
    off = [v for v in verts if v not in crossed][0]
    m, w = flanking_vertices(crossed)
    apex = w if m == off else m
    verts = (crossed.a, crossed.b, apex)
    yield verts, crossed
    for letter in t.word:
        left, right = _children_edges(crossed, apex)
        nxt = left if letter == "L" else right
        off = crossed.other(nxt.shares_endpoint(crossed))
        m, w = flanking_vertices(nxt)
        apex = w if m == off else m
        crossed = nxt
        verts = (nxt.a, nxt.b, apex)
        yield verts, crossed


def dual_path(t):
    """The ordered edges crossed from the base triangle to the triangle at address t."""
    return tuple(e for _, e in walk_address(t) if e is not None)


def triangle_vertices(t):
    """Vertex triple of the triangle at address t, sorted with infinity last."""
    verts = None
    for verts, _ in walk_address(t):
        pass
    return tuple(sorted(verts, key=lambda v: v.sort_key()))


@dataclass(frozen=True)
class TriangleRec:
    index: int
    verts: tuple
    apex: ExtendedRational
    crossed: FareyEdge | None
    parent: int
    address: TriangleAddress
    level: int


class Tessellation:
    """BFS enumeration of the tessellation out to a fixed number of levels.

    Level-L triangles are entered across generation L-1 edges, so all edges of
    generation <= levels-1 have both flanking triangles present.
    """

    def __init__(self, levels):
        if levels < 0:
            raise ValueError("levels must be >= 0")
        self.levels = levels
        base = TriangleRec(0, BASE_TRIANGLE, INFINITY, None, -1,
                           TriangleAddress(None), 0)
        self.triangles = [base]
        self.edge_gen = {}
        self.edge_flanks = {}
        self.vertex_intro = {v: 0 for v in BASE_TRIANGLE}
        self.vertex_intro_tri = {v: 0 for v in BASE_TRIANGLE}
        for e in sorted(BASE_EDGES, key=lambda e: e.sort_key()):
            self.edge_gen[e] = 0
            self.edge_flanks[e] = [0]
        frontier = []
        if levels >= 1:
            for e in sorted(BASE_EDGES, key=lambda e: e.sort_key()):
                frontier.append(self._expand(0, e, TriangleAddress(e)))
        level = 1
        while level < levels:
            nxt = []
            for idx in frontier:
                rec = self.triangles[idx]
                left, right = _children_edges(rec.crossed, rec.apex)
                for letter, ce in (("L", left), ("R", right)):
                    addr = TriangleAddress(rec.address.face, rec.address.word + (letter,))
                    nxt.append(self._expand(idx, ce, addr))
            frontier = nxt
            level += 1

    def _expand(self, parent_idx, crossed, address):
        parent = self.triangles[parent_idx]
        off = [v for v in parent.verts if v not in crossed][0]
        m, w = flanking_vertices(crossed)
        apex = w if m == off else m
        idx = len(self.triangles)
        rec = TriangleRec(idx, (crossed.a, crossed.b, apex), apex, crossed,
                          parent_idx, address, parent.level + 1)
        self.triangles.append(rec)
        self.vertex_intro.setdefault(apex, rec.level)
        self.vertex_intro_tri.setdefault(apex, idx)
        self.edge_flanks[crossed].append(idx)
        for v in (crossed.a, crossed.b):
            e = FareyEdge(v, apex)
            if e not in self.edge_gen:
                self.edge_gen[e] = rec.level
                self.edge_flanks[e] = [idx]
        return idx

    def edges(self, max_gen=None):
        """Edges in deterministic order: by (generation, canonical key)."""
        out = [e for e, g in self.edge_gen.items()
               if max_gen is None or g <= max_gen]
        out.sort(key=lambda e: (self.edge_gen[e], e.sort_key()))
        return out

    def vertices(self):
        out = list(self.vertex_intro)
        out.sort(key=lambda v: v.sort_key())
        return out

    def triangle_at(self, address):
        for rec in self.triangles:
            if rec.address == address:
                return rec
        raise DepthExceededError(f"address {address} beyond {self.levels} levels")

    def flanks(self, e):
        """Indices of the one or two triangles flanking e."""
        try:
            return tuple(self.edge_flanks[e])
        except KeyError:
            raise DepthExceededError(f"{e!r} beyond tessellation depth") from None

    def off_vertex(self, tri_index, e):
        """The vertex of triangle tri_index not on edge e."""
        rec = self.triangles[tri_index]
        return [v for v in rec.verts if v not in e][0]

    def quadrilateral(self, e):
        """(b, d): the two off-edge flanking vertices of e, in BFS discovery order."""
        flanks = self.flanks(e)
        if len(flanks) != 2:
            raise DepthExceededError(f"{e!r} has only one flanking triangle at this depth")
        out = []
        for idx in flanks:
            rec = self.triangles[idx]
            out.append([v for v in rec.verts if v not in e][0])
        return tuple(out)


@lru_cache(maxsize=8)
def shared_tessellation(levels):
    """Process-wide read-only tessellations, keyed by level count."""
    return Tessellation(levels)


def _ext_gcd(a, b):
    """(g, x, y) with a*x + b*y = g, by the classical iteration."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def normalizer_to_infinity(p):
    """Canonical integral determinant-1 map sending p to infinity.

    Computed from the continued-fraction (extended gcd) expansion of p; the
    identity for p = infinity.
    """
    p = ExtendedRational(p)
    if p.is_infinity:
        return MoebiusMap(1, 0, 0, 1)
    a, b = p.num, p.den
    g, u, v = _ext_gcd(a, b)
    if g < 0:
        g, u, v = -g, -u, -v
    # top row (-u, -v) makes the determinant u*a + v*b = 1; bottom (b, -a) kills p
    return MoebiusMap(-u, -v, b, -a)


def fan(p, lo, hi):
    """Edges of the fan at p with indices lo..hi inclusive.

    Index n corresponds to the edge through A^{-1}(n) where A is the canonical
    normalizer sending p to infinity; at infinity itself the fan is (n, inf).
    """
    p = ExtendedRational(p)
    if lo > hi:
        return ()
    inv = normalizer_to_infinity(p).inverse()
    return tuple(FareyEdge(p, inv.apply(ER(n))) for n in range(lo, hi + 1))


def fan_index(p, e):
    """Index of edge e in the fan at p; raises if e does not contain p."""
    p = ExtendedRational(p)
    e = e if isinstance(e, FareyEdge) else FareyEdge(*e)
    if p not in e:
        raise ValueError(f"{e!r} is not in the fan at {p.key}")
    img = normalizer_to_infinity(p).apply(e.other(p))
    if img.den != 1:
        raise AssertionError(f"fan image of {e!r} is not an integer")
    return img.num


def min_fan_index(p):
    """Fan index at p of a minimal-generation incident edge.

    Generation along a fan is unimodal, dipping at the two edges of the
    triangle that first introduces p, so a local descent from index 0 finds
    the bottom of the valley.
    """
    p = ExtendedRational(p)
    inv = normalizer_to_infinity(p).inverse()

    def g(n):
        return generation(FareyEdge(p, inv.apply(ER(n))))

    n, gn = 0, g(0)
    while True:
        up, down = g(n + 1), g(n - 1)
        if up < gn:
            n, gn = n + 1, up
        elif down < gn:
            n, gn = n - 1, down
        else:
            return n


@dataclass(frozen=True)
class Chain:
    """A finite chain: consecutive edges share an endpoint, all edges distinct."""

    edges: tuple
    pivots: tuple  # pivots[i] = common endpoint of edges[i], edges[i+1]
    fan_change_flags: tuple  # flags[i]: edges[i..i+2] have no common endpoint

    def __len__(self):
        return len(self.edges)


def validate_chain(edges):
    edges = tuple(e if isinstance(e, FareyEdge) else FareyEdge(*e) for e in edges)
    if not edges:
        raise ChainError("empty chain")
    if len(set(edges)) != len(edges):
        raise ChainError("chain edges must be distinct")
    pivots = []
    for i in range(len(edges) - 1):
        common = edges[i].shares_endpoint(edges[i + 1])
        if common is None:
            raise ChainError(
                f"consecutive chain edges share no endpoint: "
                f"{edges[i].key} then {edges[i + 1].key}"
            )
        pivots.append(common)
    flags = []
    for i in range(len(edges) - 2):
        common = {edges[i].a, edges[i].b} & {edges[i + 1].a, edges[i + 1].b} \
            & {edges[i + 2].a, edges[i + 2].b}
        flags.append(not common)
    return Chain(edges, tuple(pivots), tuple(flags))


def fan_chain(tip, start, step, length):
    """Chain of consecutive fan edges at `tip`: indices start, start+step, ... (step +-1)."""
    if step not in (1, -1):
        raise ValueError("step must be +1 or -1")
    idx = [start + i * step for i in range(length)]
    lo, hi = min(idx), max(idx)
    edges_by_index = dict(zip(range(lo, hi + 1), fan(tip, lo, hi)))
    return validate_chain([edges_by_index[i] for i in idx])


def zigzag_chain(length):
    """A chain changing fans at every step: (0,inf), (0,1), then mediant flanks."""
    if length < 1:
        raise ValueError("length must be >= 1")
    out = [FareyEdge(0, INFINITY)]
    if length == 1:
        return validate_chain(out)
    prev_pivot = INFINITY
    cur = out[0]
    for _ in range(length - 1):
        pivot = cur.other(prev_pivot)
        nxt = FareyEdge(pivot, mediant(cur.a, cur.b))
        out.append(nxt)
        prev_pivot = pivot
        cur = nxt
    return validate_chain(out)


def random_face_chain(rng, length, max_gen, tess=None):
    """Random transversal chain within max_gen: consecutive edges cobound a
    triangle and the walk never turns back into the triangle just crossed, so
    the edges are the ones crossed in order by a path in the dual tree."""
    tess = tess or Tessellation(max_gen + 1)
    pool = tess.edges(max_gen)
    for _ in range(200):
        e = pool[rng.randrange(len(pool))]
        chain = [e]
        used = {e}
        ok = True
        while len(chain) < length:
            cur = chain[-1]
            back = (set(tess.flanks(chain[-2])) & set(tess.flanks(cur))
                    if len(chain) > 1 else set())
            cands = []
            for idx in tess.flanks(cur):
                if idx in back:
                    continue
                rec = tess.triangles[idx]
                for v in cur.endpoints():
                    cand = FareyEdge(v, [x for x in rec.verts if x not in cur][0])
                    if cand not in used and tess.edge_gen.get(cand, max_gen + 1) <= max_gen:
                        cands.append(cand)
            if not cands:
                ok = False
                break
            nxt = cands[rng.randrange(len(cands))]
            chain.append(nxt)
            used.add(nxt)
        if ok:
            return validate_chain(chain)
    raise RuntimeError("could not build a random chain; raise max_gen")
