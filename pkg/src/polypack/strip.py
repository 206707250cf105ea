"""Strip packing by stacking vertical shelves into unit-width rows.

The instance is packed with the area pipeline in quarter-turned coordinates,
so its horizontal shelves become vertical shelves of common height budget
(c+2) * h_max.  Those are stacked into horizontal rows greedily; because the
shelf widths arrive in non-increasing order, every row except possibly the
last ends at least half full.  An under-half last row is repaired by
splitting each of its shelves in two at mid-frame, which halves the row's
height budget to (c+3)/2 * h_max.
"""

from __future__ import annotations

from typing import Sequence

from .errors import GuaranteeViolation, ItemTooWide
from .geometry import ConvexPolygon, Vec, rotate90
from .numbers import Rat, ONE, ZERO, rat, rfloor
from .packing import (
    Placement,
    ShelfEntry,
    ShelfRecord,
    StripPackingResult,
    StripRow,
    check_instance,
    height_max,
    total_area,
)
from .area_min import pack_area_min


def split_shelf(record: ShelfRecord, c, w_ref) -> tuple[ShelfRecord, ShelfRecord]:
    """Split one lay-frame shelf into two of width at most (c+3)/2 * w_ref.

    Polygons with at most half their width beyond the frame midpoint stay in
    place (they already fit the half budget); the rest keep their relative
    layout and shift left by midpoint - w_ref/2.  Both halves preserve the
    original order, so the angle sorting survives.
    """
    c = rat(c)
    w_ref = rat(w_ref)
    x_mid = (c + 2) * w_ref / 2
    half_width = (c + 3) * w_ref / 2

    left = ShelfRecord(height=record.height, frame_width=half_width)
    right = ShelfRecord(height=record.height, frame_width=half_width)
    shift = Vec(-(x_mid - w_ref / 2), ZERO)

    for entry in record.entries:
        width = entry.poly_hi - entry.poly_lo
        beyond = min(width, max(ZERO, entry.poly_hi - x_mid))
        if 2 * beyond <= width:
            left.entries.append(entry)
        else:
            right.entries.append(ShelfEntry(entry.polygon_id,
                                            entry.offset + shift,
                                            entry.xpar.translate(shift),
                                            entry.poly_lo + shift.x,
                                            entry.poly_hi + shift.x))

    for half in (left, right):
        if half.entries:
            half.span_lo = min(e.poly_lo for e in half.entries)
            half.span_hi = max(e.poly_hi for e in half.entries)
            if half.span_lo < 0 or half.span_hi > half_width:
                raise GuaranteeViolation(
                    f"split shelf exceeds half budget: "
                    f"[{half.span_lo}, {half.span_hi}] vs {half_width}")
    return (left, right)


def pack_strip(polygons: Sequence[ConvexPolygon], c=3) -> StripPackingResult:
    """Pack into the unit-width strip, minimizing the used height."""
    polys = list(polygons)
    c = rat(c)
    if not polys:
        return StripPackingResult(width=ONE, height=ZERO, placements=(),
                                  metadata={"packer": "strip", "c": c})
    check_instance(polys)
    for p in polys:
        if p.width > 1:
            raise ItemTooWide(f"{p.id!r} has width {p.width} > 1")

    hmax = height_max(polys)
    area_in = total_area(polys)

    rotated = [rotate90(p) for p in polys]
    box = pack_area_min(rotated, c, "FFDH")
    budget = (c + 2) * hmax  # vertical budget of a full row

    # next-fit the vertical shelf widths (non-increasing) into unit rows
    rows: list[list[ShelfRecord]] = []
    fill = ZERO
    for record in box.shelves:
        w = record.height
        if not rows or fill + w > 1:
            rows.append([record])
            fill = w
        else:
            rows[-1].append(record)
            fill += w

    split_last = False
    if rows and sum((r.height for r in rows[-1]), ZERO) < rat(1, 2):
        split_last = True
        halves: list[ShelfRecord] = []
        for record in rows[-1]:
            halves.extend(split_shelf(record, c, hmax))
        rows[-1] = halves

    placements: list[Placement] = []
    row_meta: list[StripRow] = []
    floor = ZERO
    achieved = ZERO
    for i, row in enumerate(rows):
        row_height = budget if not (split_last and i == len(rows) - 1) \
            else (c + 3) * hmax / 2
        x_cursor = ZERO
        slots = []
        for record in row:
            slots.append((x_cursor, record.height))
            span = record.span
            for entry in record.entries:
                # quarter turn back: frame (x, y) lands at (y, span_hi - x)
                off = Vec(x_cursor + entry.offset.y,
                          floor + record.span_hi - entry.offset.x)
                placements.append(Placement(entry.polygon_id, off))
            top = floor + span
            if top > achieved:
                achieved = top
            x_cursor += record.height
        if x_cursor > 1:
            raise GuaranteeViolation(f"strip row {i} is {x_cursor} wide")
        row_meta.append(StripRow(floor=floor, height=row_height, slots=slots))
        floor += row_height

    m = rfloor(c)
    bound = strip_bound(c, area_in, hmax)
    if achieved > bound:
        raise GuaranteeViolation(f"strip height {achieved} > bound {bound}")

    return StripPackingResult(
        width=ONE,
        height=achieved,
        placements=tuple(placements),
        rows=tuple(row_meta),
        metadata={
            "packer": "strip",
            "c": c,
            "m": m,
            "h_max": hmax,
            "area_in": area_in,
            "split_last_row": split_last,
        },
    )


def strip_bound(c, area_in, hmax) -> Rat:
    """Checkable height bound; equals 80/9 * area + 13 * h_max at c=3."""
    c = rat(c)
    m = rfloor(c)
    return (4 * (c + 2) / c * rat(m + 1, m) * area_in
            + (2 * (c + 2) + (c + 3) / 2) * hmax)
