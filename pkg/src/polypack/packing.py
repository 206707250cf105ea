"""Result types shared by the packers, plus instance helpers.

A Placement is a polygon id plus a translation; translations are the only
transformation a packing may apply.  ShelfRecord keeps the internal shelf
frame used during assembly so that later stages (shelf splitting, strip
rows, bin distribution) can rework shelves without re-deriving geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import GuaranteeViolation
from .geometry import ConvexPolygon, Vec
from .numbers import Rat, ZERO, rat, rfloor
from .parallelogram import XParallelogram, angle_sort_key


@dataclass(frozen=True, slots=True)
class Placement:
    polygon_id: str
    offset: Vec


@dataclass(frozen=True, slots=True)
class ShelfEntry:
    """One polygon inside a shelf, in the shelf's lay frame."""

    polygon_id: str
    offset: Vec  # translation placing the polygon in the frame
    xpar: XParallelogram  # bounding parallelogram, at its frame position
    poly_lo: Rat = ZERO  # frame x-extents of the placed polygon itself
    poly_hi: Rat = ZERO


@dataclass
class ShelfRecord:
    """A packed shelf in its lay frame.

    The frame is the budgeted coordinate system of the lay step: x in
    [0, frame_width], floor at y=0.  span_lo/span_hi are the extents the
    placed polygons actually reach inside the frame.
    """

    height: Rat
    frame_width: Rat
    entries: list[ShelfEntry] = field(default_factory=list)
    span_lo: Rat = ZERO
    span_hi: Rat = ZERO

    @property
    def span(self):
        return self.span_hi - self.span_lo

    def shifted(self, dx) -> "ShelfRecord":
        d = Vec(rat(dx), ZERO)
        return ShelfRecord(
            height=self.height,
            frame_width=self.frame_width,
            entries=[ShelfEntry(e.polygon_id, e.offset + d, e.xpar.translate(d),
                                e.poly_lo + d.x, e.poly_hi + d.x)
                     for e in self.entries],
            span_lo=self.span_lo + rat(dx),
            span_hi=self.span_hi + rat(dx),
        )


@dataclass
class BoxPacking:
    """Packing into one axis-parallel box (the tight bounding box)."""

    width: Rat
    height: Rat
    placements: tuple[Placement, ...]
    shelves: tuple = ()       # ShelfRecord metadata, bottom to top
    shelf_floors: tuple = ()  # y of each shelf's floor
    metadata: dict = field(default_factory=dict)

    @property
    def area(self):
        return self.width * self.height


@dataclass
class StripRow:
    """One horizontal row of vertical shelves inside the strip."""

    floor: Rat
    height: Rat
    slots: list = field(default_factory=list)  # (x offset, width) per vertical shelf


@dataclass
class StripPackingResult:
    width: Rat
    height: Rat  # achieved: top of the highest placed polygon
    placements: tuple[Placement, ...]
    rows: tuple = ()
    metadata: dict = field(default_factory=dict)


@dataclass
class BinPacking:
    """Placements inside one unit bin."""

    placements: tuple[Placement, ...]
    shelf_floors: tuple = ()
    metadata: dict = field(default_factory=dict)


@dataclass
class MultiBinPacking:
    bins: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def count(self):
        return len(self.bins)


@dataclass(frozen=True)
class PackParams:
    """Parameter bundle carried in packing files and CLI calls."""

    c: Optional[Rat] = None
    epsilon: Optional[Rat] = None
    M: Optional[int] = None
    delta: Optional[Rat] = None
    engine: str = "FFDH"
    spine: Optional[Vec] = None

    def __post_init__(self):
        if self.c is not None and self.c < 1:
            raise ValueError("c must be >= 1")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.M is not None and self.M < 2:
            raise ValueError("M must be >= 2")
        if self.delta is not None and not (0 < self.delta < 1):
            raise ValueError("delta must be in (0, 1)")

    @property
    def m(self) -> Optional[int]:
        return None if self.c is None else rfloor(self.c)


def check_instance(polygons: Sequence[ConvexPolygon]):
    """Reject duplicate or empty ids; packers index polygons by id."""
    seen = set()
    for p in polygons:
        if not p.id:
            raise ValueError("instance polygons need non-empty ids")
        if p.id in seen:
            raise ValueError(f"duplicate polygon id {p.id!r}")
        seen.add(p.id)


def width_max(polygons):
    return max(p.width for p in polygons)


def height_max(polygons):
    return max(p.height for p in polygons)


def total_area(polygons):
    return sum((p.area for p in polygons), ZERO)


def relay_shelf(xpars: Sequence[XParallelogram],
                polygons_by_id: dict,
                cursor_start,
                frame_width,
                shelf_height) -> ShelfRecord:
    """Re-lay one shelf's parallelograms sorted by descending slant angle.

    Bases abut along the shelf floor starting at cursor_start, which leaves
    room for the left overhang; sorting by ascending cot key makes adjacent
    slanted sides lean apart, so the placements are interior-disjoint.  The
    record is asserted to stay within [0, frame_width].
    """
    cursor = rat(cursor_start)
    frame_width = rat(frame_width)
    record = ShelfRecord(height=rat(shelf_height), frame_width=frame_width)
    lo = hi = None
    for q in sorted(xpars, key=angle_sort_key):  # stable
        offset = Vec(cursor - q.anchor.x, -q.anchor.y) + q.inner_offset
        placed_q = q.translate(Vec(cursor - q.anchor.x, -q.anchor.y))
        if placed_q.min_x < 0 or placed_q.max_x > frame_width:
            raise GuaranteeViolation(
                f"shelf frame overflow: parallelogram of {q.polygon_id!r} "
                f"spans [{placed_q.min_x}, {placed_q.max_x}] in budget {frame_width}")
        p = polygons_by_id[q.polygon_id]
        record.entries.append(ShelfEntry(q.polygon_id, offset, placed_q,
                                         p.min_x + offset.x, p.max_x + offset.x))
        if lo is None or p.min_x + offset.x < lo:
            lo = p.min_x + offset.x
        if hi is None or p.max_x + offset.x > hi:
            hi = p.max_x + offset.x
        cursor += q.base
    record.span_lo = lo if lo is not None else ZERO
    record.span_hi = hi if hi is not None else ZERO
    return record
