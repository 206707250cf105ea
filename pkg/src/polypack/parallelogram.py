"""Bounding x-parallelograms and the tilt/angle machinery of shelf assembly.

An x-parallelogram has two horizontal sides; it is described by the left end
of its bottom side (anchor), the base length, and the slanted side vector
(side.y > 0).  Every convex polygon fits in one that costs at most a factor
of two in area, with base and slant both bounded by the polygon's width; that
construction is what lets shelf packing handle polygons at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import GuaranteeViolation, NotAParallelogram
from .geometry import ConvexPolygon, Spine, Vec, canonicalize_polygon, spine_of
from .numbers import Rat, ZERO


class TiltClass(Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True, slots=True)
class XParallelogram:
    """Parallelogram with horizontal top and bottom sides.

    inner_offset translates the owning polygon into the parallelogram; for
    parallelograms constructed around a polygon in place it is zero.
    """

    anchor: Vec
    base: Rat
    side: Vec
    polygon_id: str = ""
    inner_offset: Vec = Vec(ZERO, ZERO)

    @property
    def height(self):
        return self.side.y

    @property
    def wside(self):
        return abs(self.side.x)

    @property
    def area(self):
        return self.base * self.side.y

    def corners(self) -> tuple[Vec, Vec, Vec, Vec]:
        """CCW corners starting at the anchor."""
        a = self.anchor
        b = Vec(a.x + self.base, a.y)
        return (a, b, b + self.side, a + self.side)

    @property
    def min_x(self):
        return self.anchor.x + min(ZERO, self.side.x)

    @property
    def max_x(self):
        return self.anchor.x + self.base + max(ZERO, self.side.x)

    def translate(self, offset: Vec) -> "XParallelogram":
        return XParallelogram(self.anchor + offset, self.base, self.side,
                              self.polygon_id, self.inner_offset)

    def as_polygon(self, id: str = "") -> ConvexPolygon:
        return canonicalize_polygon(self.corners(), id=id or self.polygon_id)


def tilt_of(q: XParallelogram) -> TiltClass:
    """Right for slant angle in (0, pi/2] (vertical included), else Left."""
    return TiltClass.RIGHT if q.side.x >= 0 else TiltClass.LEFT


def angle_sort_key(q: XParallelogram) -> Rat:
    """cot of the slant angle; ascending keys mean descending angles."""
    return q.side.x / q.side.y


def bounding_xpar(p: ConvexPolygon) -> XParallelogram:
    """Bounding x-parallelogram with the four guarantees:

    height equals the polygon's height, base and slant width are at most the
    polygon's width, and area at most twice the polygon's area.  Built from
    the two horizontal tangents and the two tangents parallel to the spine;
    falls back to the bounding rectangle when that base would exceed the
    polygon's width.
    """
    s = spine_of(p)
    d = s.vector
    height = p.height

    if d.x == 0:
        q = _bounding_rectangle(p)
    else:
        max_cr = min_cr = None
        b = s.bottom
        for v in p.vertices:
            cr = d.cross(v - b)
            if max_cr is None or cr > max_cr:
                max_cr = cr
                v_left = v
            if min_cr is None or cr < min_cr:
                min_cr = cr
                v_right = v
        # slanted tangent through v at height min_y has x = v.x - (v.y - min_y) * dx/dy
        slope = d.x / d.y
        x_left = v_left.x - (v_left.y - p.min_y) * slope
        x_right = v_right.x - (v_right.y - p.min_y) * slope
        base = x_right - x_left
        if base > p.width:
            q = _bounding_rectangle(p)
        else:
            q = XParallelogram(
                anchor=Vec(x_left, p.min_y),
                base=base,
                side=Vec(height * slope, height),
                polygon_id=p.id,
            )

    if not (q.side.y == height and q.base <= p.width and q.wside <= p.width
            and q.area <= 2 * p.area and q.base > 0):
        raise GuaranteeViolation(
            f"bounding parallelogram properties failed for {p.id!r}")
    return q


def _bounding_rectangle(p: ConvexPolygon) -> XParallelogram:
    return XParallelogram(
        anchor=Vec(p.min_x, p.min_y),
        base=p.width,
        side=Vec(ZERO, p.height),
        polygon_id=p.id,
    )


def xpar_of_polygon(p: ConvexPolygon) -> XParallelogram:
    """Reinterpret a polygon that already is an x-parallelogram.

    Raises NotAParallelogram unless the polygon has exactly two horizontal
    sides (top and bottom) and matching slanted sides.
    """
    if len(p.vertices) != 4:
        raise NotAParallelogram(f"{p.id!r}: needs exactly 4 vertices")
    bottom = [v for v in p.vertices if v.y == p.min_y]
    top = [v for v in p.vertices if v.y == p.max_y]
    if len(bottom) != 2 or len(top) != 2:
        raise NotAParallelogram(f"{p.id!r}: top and bottom sides must be horizontal")
    bl, br = sorted(bottom, key=lambda v: v.x)
    tl, tr = sorted(top, key=lambda v: v.x)
    if tl - bl != tr - br:
        raise NotAParallelogram(f"{p.id!r}: slanted sides are not parallel")
    return XParallelogram(anchor=bl, base=br.x - bl.x, side=tl - bl,
                          polygon_id=p.id)
