"""SVG rendering of instances and packings.

Rendering is the only place exact values become floats; coordinates are
emitted with 12 significant digits, display only, and never feed back into
any computation.
"""

from __future__ import annotations

from .geometry import Vec
from .numbers import parse_rational
from .packing import BoxPacking, MultiBinPacking, StripPackingResult

_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)

_MARGIN = 0.03
_CANVAS = 640.0


def _fmt(x):
    return f"{float(x):.12g}"


def _path(points, height):
    # svg y grows downward; flip against the container height
    coords = " L ".join(f"{_fmt(v.x)} {_fmt(float(height) - float(v.y))}"
                        for v in points)
    return f"M {coords} Z"


def _svg_document(width, height, body):
    w = float(width)
    h = float(height)
    pad = max(w, h) * _MARGIN
    scale = _CANVAS / max(w + 2 * pad, h + 2 * pad)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt((w + 2 * pad) * scale)}" '
        f'height="{_fmt((h + 2 * pad) * scale)}" '
        f'viewBox="{_fmt(-pad)} {_fmt(-pad)} {_fmt(w + 2 * pad)} {_fmt(h + 2 * pad)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'fill="#ffffff" stroke="#222222" stroke-width="{_fmt(pad / 6)}"/>',
    ]
    out.extend(body)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_container(width, height, placed, overlays):
    body = []
    stroke = max(float(width), float(height)) / 400.0
    for i, poly in enumerate(placed):
        color = _PALETTE[i % len(_PALETTE)]
        body.append(
            f'<path d="{_path(poly.vertices, height)}" fill="{color}" '
            f'fill-opacity="0.65" stroke="#333333" stroke-width="{_fmt(stroke)}">'
            f"<title>{poly.id}</title></path>")
    for kind, points in overlays:
        if kind == "parallelogram":
            body.append(
                f'<path d="{_path(points, height)}" fill="none" '
                f'stroke="#555555" stroke-width="{_fmt(stroke)}" '
                f'stroke-dasharray="{_fmt(stroke * 5)} {_fmt(stroke * 4)}"/>')
        else:  # shelf line
            y = _fmt(float(height) - float(points))
            body.append(
                f'<line x1="0" y1="{y}" x2="{_fmt(width)}" y2="{y}" '
                f'stroke="#888888" stroke-width="{_fmt(stroke)}" '
                f'stroke-dasharray="{_fmt(stroke * 2)} {_fmt(stroke * 2)}"/>')
    return _svg_document(width, height, body)


def render_svg(instance, result=None, overlay=()):
    """Render to a list of (filename, svg text) pairs.

    With no result, draws the raw instance shapes side by side.  overlay may
    contain "parallelograms" (dashed bounding parallelograms, where the
    result carries shelf records) and "shelves" (shelf floor lines).
    """
    by_id = {p.id: p for p in instance.polygons} if hasattr(instance, "polygons") \
        else {p.id: p for p in instance}

    if result is None:
        from .numbers import ZERO
        placed = []
        xcur = ZERO
        top = ZERO
        for p in by_id.values():
            placed.append(p.translate(Vec(xcur - p.min_x, -p.min_y)))
            xcur += p.width * 11 / 10
            top = max(top, p.height)
        return [("instance.svg", _render_container(xcur, top, placed, []))]

    def xpar_overlays(placed):
        # the bounding construction commutes with translation, so overlays
        # can be recomputed from placed polygons, including file round-trips
        from .parallelogram import bounding_xpar
        return [("parallelogram", bounding_xpar(p).corners()) for p in placed]

    if isinstance(result, MultiBinPacking):
        out = []
        for i, b in enumerate(result.bins):
            placed = [by_id[pl.polygon_id].translate(pl.offset)
                      for pl in b.placements]
            overlays = xpar_overlays(placed) if "parallelograms" in overlay else []
            out.append((f"bin-{i:03d}.svg",
                        _render_container(1, 1, placed, overlays)))
        return out

    placed = [by_id[pl.polygon_id].translate(pl.offset)
              for pl in result.placements]
    overlays = []
    if "parallelograms" in overlay:
        overlays.extend(xpar_overlays(placed))
    if "shelves" in overlay:
        if isinstance(result, StripPackingResult):
            for row in result.rows:
                overlays.append(("shelf", row.floor))
        else:
            for floor in getattr(result, "shelf_floors", ()):
                overlays.append(("shelf", floor))

    name = "strip.svg" if isinstance(result, StripPackingResult) else "packing.svg"
    return [(name, _render_container(result.width, result.height, placed, overlays))]
