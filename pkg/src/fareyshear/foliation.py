"""Horocyclic foliation leaves along a developed chain of geodesics.

The region between consecutive image geodesics of a chain is a hyperbolic
wedge, and a wedge carries a unique foliation by horocyclic arcs centered at
the shared ideal endpoint.  Starting on the first geodesic, a leaf crosses
each wedge in turn; the hyperbolic lengths of its segments are exactly what
the signed exponential series of ``criteria.chain_series`` claims to sum, so
measuring them on the developed picture is an independent geometric check.

Each wedge is measured in the chart that sends the wedge's ideal corner to
infinity: both boundary geodesics become vertical half-lines, leaves become
horizontal segments, and a segment from x0 to x1 at height y has hyperbolic
length |x1 - x0| / y.
"""

import math

from .farey import ChainError, fan_index, generation
from .moebius import DegenerateInputError
from .shear import CharacteristicMap

__all__ = ["develop_chain", "measure_leaf", "leaf_lengths"]


def develop_chain(s, chain, char_map=None):
    """Boundary images of every vertex the chain touches, as a dict.

    Builds a characteristic map just deep enough for the chain's edges unless
    one is supplied.
    """
    if char_map is None:
        need = max(generation(e) for e in chain.edges)
        char_map = CharacteristicMap(s, levels=max(need, 1))
    out = {}
    for e in chain.edges:
        for v in (e.a, e.b):
            if v not in out:
                out[v] = char_map(v)
    return out


def _other_end(e, piv):
    return e.b if e.a == piv else e.a


def _chart_point(x, vhat):
    """Boundary position in the chart sending vhat to infinity."""
    if math.isinf(vhat):
        return x
    if math.isinf(x):
        return 0.0
    d = x - vhat
    if d == 0.0:
        raise DegenerateInputError("developed endpoints collide")
    return -1.0 / d


def _chart(z, vhat):
    if math.isinf(vhat):
        return z
    return -1.0 / (z - vhat)


def _unchart(w, vhat):
    if math.isinf(vhat):
        return w
    return vhat - 1.0 / w


def measure_leaf(images, chain, count=None, first_length=1.0):
    """Hyperbolic lengths of the first `count` wedge segments of a leaf.

    `images` maps each chain vertex to its boundary position (math.inf
    allowed for one vertex).  The leaf is anchored on the first geodesic at
    the height that makes its first segment measure `first_length`; every
    later segment is then determined by continuity, so entries 1..count-1
    are genuine geometric measurements.
    """
    edges = chain.edges
    if count is None:
        count = len(edges) - 1
    if not 1 <= count <= len(edges) - 1:
        raise ChainError(f"chain has {len(edges)} edges, cannot measure "
                         f"{count} wedge segments")
    if not (first_length > 0.0 and math.isfinite(first_length)):
        raise ValueError("first_length must be positive and finite")
    out = []
    point = None
    for n in range(count):
        piv = chain.pivots[n]
        vhat = images[piv]
        xe = _chart_point(images[_other_end(edges[n], piv)], vhat)
        xf = _chart_point(images[_other_end(edges[n + 1], piv)], vhat)
        if point is None:
            w = complex(xe, abs(xf - xe) / first_length)
        else:
            w = _chart(point, vhat)
        if not (w.imag > 0.0 and math.isfinite(w.imag)):
            raise DegenerateInputError("leaf left the upper half plane")
        out.append(abs(xf - w.real) / w.imag)
        point = _unchart(complex(xf, w.imag), vhat)
    return out


def leaf_lengths(s, chain, count=None, first_length=None, char_map=None):
    """Leaf segment lengths along the chain developed by the shear map `s`.

    With the default anchor the first segment measures exp(+-s(e1)), the
    sign chosen by the fan order of the first two edges at their common
    endpoint; that matches the first series term of ``criteria.chain_series``
    so the remaining segments can be compared term by term.
    """
    if first_length is None:
        piv = chain.pivots[0]
        up = fan_index(piv, chain.edges[0]) < fan_index(piv, chain.edges[1])
        first_length = math.exp(s.value(chain.edges[0]) * (1.0 if up else -1.0))
    images = develop_chain(s, chain, char_map)
    return measure_leaf(images, chain, count, first_length)
