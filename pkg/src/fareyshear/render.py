"""Static SVG pictures of tessellation images.

The disk model maps boundary points through the Cayley transform and draws
each image geodesic as the arc of the circle through its endpoints orthogonal
to the unit circle (a diameter when the endpoints are antipodal).  SVG
coordinates are the raw disk coordinates (y grows downward on screen, which
only mirrors the picture), so path endpoints literally equal the Cayley
images of the vertices.  The half-plane-clip model draws semicircles and
vertical rays in upper half-plane coordinates, clipped to a fixed box, with
the y axis negated so the picture is upright.

Output is deterministic: fixed element order (edges sorted by generation then
endpoints) and 17-significant-digit coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .farey import shared_tessellation
from .io import fmt_num
from .moebius import DegenerateInputError, to_disk

__all__ = ["RenderSpec", "render_svg"]

_MODELS = ("disk", "half-plane-clip")


@dataclass
class RenderSpec:
    depth: int = 4
    model: str = "disk"
    stroke: float = 0.004
    size: int = 800
    highlight: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}, got {self.model!r}")
        if not self.stroke > 0:
            raise ValueError(f"stroke width must be positive, got {self.stroke}")
        if not self.size > 0:
            raise ValueError(f"image size must be positive, got {self.size}")
        self.highlight = frozenset(self.highlight)


def render_svg(spec, vertex_map=None):
    """SVG text for the image of the tessellation under a boundary map.

    vertex_map is any callable from tessellation vertices to boundary points
    (extended rationals or floats); None renders the Farey tessellation
    itself.  Collapsed edges (equal endpoint images) raise
    DegenerateInputError.
    """
    tess = shared_tessellation(spec.depth)
    edges = sorted(tess.edges(spec.depth),
                   key=lambda e: (tess.edge_gen[e], e.sort_key()))
    rows = []
    for e in edges:
        a = e.a if vertex_map is None else vertex_map(e.a)
        b = e.b if vertex_map is None else vertex_map(e.b)
        cls = "edge hl" if e.key in spec.highlight else "edge"
        if spec.model == "disk":
            d = _disk_path(to_disk(a), to_disk(b), e)
        else:
            d = _half_plane_path(a, b, e)
        if d is not None:
            rows.append(f'  <path class="{cls}" d="{d}"/>')
    return _document(spec, rows)


def _fmt_pt(x, y):
    return f"{fmt_num(x)} {fmt_num(y)}"


def _disk_path(u, v, e):
    chord = abs(u - v)
    if chord < 1e-15:
        raise DegenerateInputError(f"edge {e.key} collapsed to a point")
    dot = u.real * v.real + u.imag * v.imag
    if 1.0 + dot < 1e-15:
        # antipodal endpoints: the geodesic is a diameter
        return f"M {_fmt_pt(u.real, u.imag)} L {_fmt_pt(v.real, v.imag)}"
    c = (u + v) / (1.0 + dot)
    r = math.sqrt(max(abs(c) ** 2 - 1.0, 0.0))
    cross = (u.real - c.real) * (v.imag - c.imag) - (u.imag - c.imag) * (v.real - c.real)
    sweep = 1 if cross > 0.0 else 0
    return (f"M {_fmt_pt(u.real, u.imag)} A {fmt_num(r)} {fmt_num(r)} 0 0 "
            f"{sweep} {_fmt_pt(v.real, v.imag)}")


_CLIP_TOP = 2.5  # height at which vertical geodesics are cut off


def _half_plane_path(a, b, e):
    af, bf = float(a), float(b)
    if math.isinf(af) and math.isinf(bf):
        raise DegenerateInputError(f"edge {e.key} collapsed at infinity")
    if math.isinf(af) or math.isinf(bf):
        x = bf if math.isinf(af) else af
        return f"M {_fmt_pt(x, 0.0)} L {_fmt_pt(x, -_CLIP_TOP)}"
    if abs(af - bf) < 1e-15:
        raise DegenerateInputError(f"edge {e.key} collapsed to a point")
    lo, hi = (af, bf) if af < bf else (bf, af)
    r = (hi - lo) / 2.0
    return (f"M {_fmt_pt(lo, 0.0)} A {fmt_num(r)} {fmt_num(r)} 0 0 1 "
            f"{_fmt_pt(hi, 0.0)}")


def _document(spec, rows):
    w = "%g" % spec.stroke
    hw = "%g" % (2.0 * spec.stroke)
    if spec.model == "disk":
        viewbox = "-1.05 -1.05 2.1 2.1"
        frame = '<circle class="boundary" cx="0" cy="0" r="1"/>'
    else:
        viewbox = f"-2.55 {fmt_num(-_CLIP_TOP - 0.05)} 6.1 {fmt_num(_CLIP_TOP + 0.1)}"
        frame = '<line class="boundary" x1="-2.55" y1="0" x2="3.55" y2="0"/>'
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.size}" height="{spec.size}" viewBox="{viewbox}">',
        "<style>",
        f".edge {{ fill: none; stroke: #1a466b; stroke-width: {w}; }}",
        f".hl {{ stroke: #c03020; stroke-width: {hw}; }}",
        f".boundary {{ fill: none; stroke: #000000; stroke-width: {w}; }}",
        "</style>",
        frame,
    ]
    return "\n".join(head + rows + ["</svg>"]) + "\n"
