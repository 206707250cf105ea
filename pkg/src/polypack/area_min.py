"""Bounding-box area minimization by parallelogram shelf packing.

Pipeline: wrap every polygon in its bounding x-parallelogram, straighten the
parallelograms into rectangles (base by height), shelf-pack the rectangles
into a strip of width c * w_max, then re-lay each shelf's parallelograms
sorted by descending slant angle with abutting bases.  The polygons ride
inside their parallelograms.  The returned container is the tight bounding
box of the placed polygons.

Both packers assert their provable area bound on every run; a failure raises
GuaranteeViolation and is a bug, never a property of the input.
"""

from __future__ import annotations

from typing import Sequence

from .errors import EmptyInstance, GuaranteeViolation
from .geometry import ConvexPolygon, Vec
from .numbers import Rat, ZERO, rat, rfloor
from .packing import (
    BoxPacking,
    Placement,
    check_instance,
    height_max,
    relay_shelf,
    total_area,
    width_max,
)
from .parallelogram import bounding_xpar, xpar_of_polygon
from .shelves import RectItem, pack_rect_shelves

ENGINES = ("FFDH", "NFDH")


def pack_area_min(polygons: Sequence[ConvexPolygon], c=3,
                  engine: str = "FFDH") -> BoxPacking:
    """Pack into a small-area box; the default c=3 with FFDH is the best choice."""
    xpars = {p.id: bounding_xpar(p) for p in polygons}
    return _shelf_pipeline(polygons, xpars, c, engine, tag="area")


def pack_area_min_xpar(polygons: Sequence[ConvexPolygon], c=2) -> BoxPacking:
    """Specialization for instances that already are x-parallelograms (c=2 optimal)."""
    xpars = {p.id: xpar_of_polygon(p) for p in polygons}
    return _shelf_pipeline(polygons, xpars, c, "FFDH", tag="area_xpar")


def _shelf_pipeline(polygons, xpars, c, engine, tag) -> BoxPacking:
    polys = list(polygons)
    if not polys:
        raise EmptyInstance("nothing to pack")
    check_instance(polys)
    c = rat(c)
    if c < 1:
        raise ValueError("c must be >= 1")
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}")

    by_id = {p.id: p for p in polys}
    wmax = width_max(polys)
    hmax = height_max(polys)
    area_in = total_area(polys)

    rects = [RectItem(xpars[p.id].base, xpars[p.id].height, p.id) for p in polys]
    strip = c * wmax
    rect_packing = pack_rect_shelves(rects, strip, engine)

    if tag == "area_xpar":
        # exact inputs: reserve only the slant width actually present
        overhang = max(xpars[p.id].wside for p in polys)
    else:
        overhang = wmax
    frame_width = (c + 2) * wmax

    records = []
    floors = []
    placements = []
    top = ZERO
    box_width = ZERO
    for shelf in rect_packing.shelves:
        members = [xpars[pid] for pid, _ in shelf.items]
        record = relay_shelf(members, by_id, cursor_start=overhang,
                             frame_width=frame_width, shelf_height=shelf.height)
        records.append(record)
        floors.append(top)
        for entry in record.entries:
            placements.append(Placement(
                entry.polygon_id,
                entry.offset + Vec(-record.span_lo, top)))
        if record.span > box_width:
            box_width = record.span
        top += shelf.height

    result = BoxPacking(
        width=box_width,
        height=top,
        placements=tuple(placements),
        shelves=tuple(records),
        shelf_floors=tuple(floors),
        metadata={
            "packer": tag,
            "engine": engine,
            "c": c,
            "m": rfloor(c),
            "w_max": wmax,
            "h_max": hmax,
            "area_in": area_in,
        },
    )

    bound = area_bound(tag, engine, c, area_in, wmax, hmax)
    if result.area > bound:
        raise GuaranteeViolation(
            f"{tag} bound failed: area {result.area} > {bound}")
    return result


def area_bound(tag, engine, c, area_in, wmax, hmax) -> Rat:
    """Checkable right-hand side of the area guarantee for a given run."""
    c = rat(c)
    m = rfloor(c)
    if tag == "area_xpar":
        factor = (c + 2) / c * rat(m + 1, m)
    elif engine == "FFDH":
        factor = 2 * (c + 2) / c * rat(m + 1, m)
    else:  # NFDH
        factor = 2 * (c + 2) / c
    return factor * area_in + (c + 2) * hmax * wmax
