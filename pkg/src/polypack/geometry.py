"""Exact rational planar geometry for convex polygons under translation.

Everything here is a pure function of immutable values.  There are no
epsilons: overlap tests, chords and contact distances are decided with exact
rational arithmetic, so downstream validity and guarantee checks can be
asserted as equalities and strict inequalities.

Interior semantics: two placed polygons are considered overlapping only if
their open interiors intersect.  Shared boundary points are allowed, which is
what the shelf and chain constructions rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateZeroArea,
    NonConvex,
    OutOfVerticalRange,
    Unbounded,
    ZeroWidthOrHeight,
)
from .numbers import Rat, Rational, ZERO, rat


@dataclass(frozen=True, slots=True)
class Vec:
    """A point or displacement with exact rational coordinates."""

    x: Rat
    y: Rat

    def __add__(self, other):
        return Vec(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec(-self.x, -self.y)

    def scale(self, k):
        return Vec(self.x * k, self.y * k)

    def cross(self, other):
        return self.x * other.y - self.y * other.x

    def dot(self, other):
        return self.x * other.x + self.y * other.y

    def __str__(self):
        return f"({self.x}, {self.y})"


#: Points and vectors share one representation.
Point = Vec


def vec(x, y):
    return Vec(rat(x), rat(y))


def _cross3(o, a, b):
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


@dataclass(frozen=True, slots=True)
class Spine:
    """Segment joining a lowest point of a polygon to a highest point."""

    bottom: Vec
    top: Vec
    polygon_id: str = ""

    @property
    def vector(self):
        return self.top - self.bottom

    @property
    def height(self):
        return self.top.y - self.bottom.y

    @property
    def width(self):
        return abs(self.top.x - self.bottom.x)

    def tilts_right(self):
        """Angle in (0, pi/2] against the x-axis; vertical counts as right."""
        return self.top.x >= self.bottom.x

    def tilts_left(self):
        return not self.tilts_right()


@dataclass(frozen=True, slots=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices in CCW order, canonical start vertex.

    Instances are produced by canonicalize_polygon (or internal transforms
    that preserve canonical form); the constructor itself does not validate.
    """

    vertices: tuple[Vec, ...]
    id: str
    area: Rat
    min_x: Rat
    min_y: Rat
    max_x: Rat
    max_y: Rat

    @property
    def width(self):
        return self.max_x - self.min_x

    @property
    def height(self):
        return self.max_y - self.min_y

    @property
    def bbox(self):
        return (self.min_x, self.min_y, self.max_x, self.max_y)

    def translate(self, offset: Vec) -> "ConvexPolygon":
        return ConvexPolygon(
            vertices=tuple(v + offset for v in self.vertices),
            id=self.id,
            area=self.area,
            min_x=self.min_x + offset.x,
            min_y=self.min_y + offset.y,
            max_x=self.max_x + offset.x,
            max_y=self.max_y + offset.y,
        )

    def with_id(self, new_id: str) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices, new_id, self.area,
                             self.min_x, self.min_y, self.max_x, self.max_y)

    def contains_point(self, p: Vec) -> bool:
        """Boundary-inclusive containment."""
        verts = self.vertices
        n = len(verts)
        for i in range(n):
            if _cross3(verts[i], verts[(i + 1) % n], p) < 0:
                return False
        return True


def shoelace_doubled(points: Sequence[Vec]):
    """Twice the signed area of the (possibly unvalidated) cycle."""
    total = ZERO
    n = len(points)
    for i in range(n):
        total += points[i].cross(points[(i + 1) % n])
    return total


def canonicalize_polygon(points, id: str = "") -> ConvexPolygon:
    """Validate and normalize a raw vertex list into a ConvexPolygon.

    Accepts (x, y) pairs or Vec values, in CW or CCW boundary order.
    Consecutive duplicates and interior collinear vertices are removed, the
    cycle is oriented CCW and rotated to start at the lexicographically
    smallest vertex.

    Raises NonConvex, DegenerateZeroArea or ZeroWidthOrHeight.
    """
    pts = [p if isinstance(p, Vec) else vec(p[0], p[1]) for p in points]
    # drop consecutive duplicates, including around the wrap
    cycle: list[Vec] = []
    for p in pts:
        if not cycle or p != cycle[-1]:
            cycle.append(p)
    while len(cycle) > 1 and cycle[0] == cycle[-1]:
        cycle.pop()
    if len(cycle) < 3:
        raise DegenerateZeroArea(f"{id or 'polygon'}: fewer than 3 distinct vertices")

    doubled = shoelace_doubled(cycle)
    if doubled == 0:
        raise DegenerateZeroArea(f"{id or 'polygon'}: zero enclosed area")
    if doubled < 0:
        cycle.reverse()
        doubled = -doubled

    # strip collinear vertices; repeat because removals create new neighbors
    while True:
        n = len(cycle)
        if n < 3:
            raise DegenerateZeroArea(f"{id or 'polygon'}: degenerate after cleanup")
        keep = []
        convex_broken = False
        for i in range(n):
            c = _cross3(cycle[i - 1], cycle[i], cycle[(i + 1) % n])
            if c < 0:
                convex_broken = True
                break
            if c > 0:
                keep.append(cycle[i])
        if convex_broken:
            raise NonConvex(f"{id or 'polygon'}: reflex vertex found")
        if len(keep) == n:
            break
        cycle = keep

    # all-left-turns alone admits cycles winding more than once; a simple
    # convex cycle has exactly one increasing and one decreasing run in each
    # coordinate
    for coord in (lambda v: v.x, lambda v: v.y):
        signs = []
        n = len(cycle)
        for i in range(n):
            d = coord(cycle[(i + 1) % n]) - coord(cycle[i])
            if d != 0:
                signs.append(d > 0)
        changes = sum(1 for i in range(len(signs)) if signs[i] != signs[i - 1])
        if signs and changes != 2:
            raise NonConvex(f"{id or 'polygon'}: boundary winds more than once")

    lo = min(range(len(cycle)), key=lambda i: (cycle[i].x, cycle[i].y))
    cycle = cycle[lo:] + cycle[:lo]

    xs = [v.x for v in cycle]
    ys = [v.y for v in cycle]
    poly = ConvexPolygon(
        vertices=tuple(cycle),
        id=id,
        area=doubled / 2,
        min_x=min(xs),
        min_y=min(ys),
        max_x=max(xs),
        max_y=max(ys),
    )
    if poly.width == 0 or poly.height == 0:
        raise ZeroWidthOrHeight(f"{id or 'polygon'}: zero extent")
    return poly


def extents(p: ConvexPolygon):
    """(width, height, area, bbox); bbox anchored at the polygon's min corner."""
    return (p.width, p.height, p.area, p.bbox)


def spine_of(p: ConvexPolygon) -> Spine:
    """Deterministic spine: leftmost lowest point to leftmost highest point."""
    bottom = min(p.vertices, key=lambda v: (v.y, v.x))
    top = min(p.vertices, key=lambda v: (-v.y, v.x))
    return Spine(bottom=bottom, top=top, polygon_id=p.id)


def chord_interval(p: ConvexPolygon, y) -> tuple[Rat, Rat]:
    """Exact x-interval of the horizontal slice of p at height y."""
    y = rat(y)
    if y < p.min_y or y > p.max_y:
        raise OutOfVerticalRange(f"y={y} outside [{p.min_y}, {p.max_y}]")
    lo = hi = None
    verts = p.vertices
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        if a.y == b.y:
            if a.y != y:
                continue
            xs = (a.x, b.x)
        else:
            if not (min(a.y, b.y) <= y <= max(a.y, b.y)):
                continue
            t = (y - a.y) / (b.y - a.y)
            xs = (a.x + t * (b.x - a.x),)
        for x in xs:
            if lo is None or x < lo:
                lo = x
            if hi is None or x > hi:
                hi = x
    return (lo, hi)


def chord_width(p: ConvexPolygon, y) -> Rat:
    """Length of p intersected with the horizontal line at y (0 at a touch)."""
    lo, hi = chord_interval(p, y)
    return hi - lo


def eta(p: ConvexPolygon) -> Rat:
    """Maximum horizontal chord length of p.

    Chord width is a concave piecewise-linear function of y on a convex
    polygon, so the maximum is attained at some vertex level.
    """
    return max(chord_width(p, y) for y in {v.y for v in p.vertices})


def clip_halfplane(points: Sequence[Vec], anchor: Vec, direction: Vec,
                   keep_left: bool = True) -> list[Vec]:
    """Clip a convex cycle against the line through anchor along direction.

    Keeps the side where cross(direction, v - anchor) is >= 0 (the left of
    the directed line) or <= 0 with keep_left=False.  Output may be
    degenerate (fewer than 3 points, or a sliver on the line).
    """
    out: list[Vec] = []
    n = len(points)
    if n == 0:
        return out
    signs = []
    for v in points:
        s = direction.cross(v - anchor)
        signs.append(s if keep_left else -s)
    for i in range(n):
        cur, nxt = points[i], points[(i + 1) % n]
        c1, c2 = signs[i], signs[(i + 1) % n]
        if c1 >= 0:
            out.append(cur)
        if (c1 > 0 > c2) or (c1 < 0 < c2):
            t = c1 / (c1 - c2)
            out.append(cur + (nxt - cur).scale(t))
    dedup: list[Vec] = []
    for v in out:
        if not dedup or v != dedup[-1]:
            dedup.append(v)
    while len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _eta_of_cycle(points: Sequence[Vec]) -> Rat:
    """Max horizontal chord of a (possibly degenerate) convex cycle."""
    if len(points) < 3:
        return ZERO
    best = ZERO
    levels = {v.y for v in points}
    n = len(points)
    for y in levels:
        lo = hi = None
        for i in range(n):
            a, b = points[i], points[(i + 1) % n]
            if a.y == b.y:
                if a.y != y:
                    continue
                xs = (a.x, b.x)
            else:
                if not (min(a.y, b.y) <= y <= max(a.y, b.y)):
                    continue
                t = (y - a.y) / (b.y - a.y)
                xs = (a.x + t * (b.x - a.x),)
            for x in xs:
                if lo is None or x < lo:
                    lo = x
                if hi is None or x > hi:
                    hi = x
        if lo is not None and hi - lo > best:
            best = hi - lo
    return best


def eta_split(p: ConvexPolygon, spine: Spine) -> tuple[Rat, Rat]:
    """(eta of the part left of the spine line, eta of the part right of it)."""
    d = spine.vector
    left = clip_halfplane(list(p.vertices), spine.bottom, d, keep_left=True)
    right = clip_halfplane(list(p.vertices), spine.bottom, d, keep_left=False)
    return (_eta_of_cycle(left), _eta_of_cycle(right))


def interiors_overlap(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """True iff the open interiors intersect; boundary contact is allowed.

    Separating axis test over the edge normals of both polygons.  For each
    directed CCW edge, the polygon's own support value along the outward
    normal is attained on that edge, so one min-projection suffices.
    """
    if (a.max_x <= b.min_x or b.max_x <= a.min_x
            or a.max_y <= b.min_y or b.max_y <= a.min_y):
        return False
    for poly, other in ((a, b), (b, a)):
        verts = poly.vertices
        n = len(verts)
        overts = other.vertices
        for i in range(n):
            pv = verts[i]
            qv = verts[(i + 1) % n]
            nx = qv.y - pv.y
            ny = pv.x - qv.x
            support = nx * pv.x + ny * pv.y
            separated = True
            for w in overts:
                if nx * w.x + ny * w.y < support:
                    separated = False
                    break
            if separated:
                return False
    return True


def convex_hull(points: Iterable[Vec]) -> list[Vec]:
    """Strict convex hull (collinear boundary points dropped), CCW order."""
    pts = sorted(set((v.x, v.y) for v in points))
    pts = [Vec(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts
    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and _cross3(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross3(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True, slots=True)
class BinWalls:
    """Axis-parallel container walls; None means that side is open."""

    xmin: Optional[Rat] = None
    ymin: Optional[Rat] = None
    xmax: Optional[Rat] = None
    ymax: Optional[Rat] = None


_AXIS_DIRECTIONS = {(0, -1), (1, 0), (-1, 0), (0, 1)}


def contact_offset(moving: ConvexPolygon,
                   obstacles: Iterable[ConvexPolygon],
                   direction: Vec,
                   walls: Optional[BinWalls] = None) -> Rat:
    """Maximal slide distance before touching an obstacle or leaving the bin.

    Returns the largest lambda >= 0 such that translating `moving` by
    lambda * direction keeps all interiors disjoint and the polygon inside
    the walls.  Per obstacle the forbidden translations form the interior of
    the Minkowski region obstacle + (-moving); the slide ray is clipped
    against that convex region exactly.

    Raises Unbounded if nothing limits the motion, and ValueError if the
    start position already violates an obstacle or wall.
    """
    key = (int(direction.x), int(direction.y)) if direction.x in (-1, 0, 1) and direction.y in (-1, 0, 1) else None
    if key not in _AXIS_DIRECTIONS:
        raise ValueError("direction must be a unit axis vector")

    best = None

    for obstacle in obstacles:
        region = convex_hull(
            ov - mv for ov in obstacle.vertices for mv in moving.vertices
        )
        constraint = _ray_block(region, direction)
        if constraint is None:
            continue
        if constraint < 0:
            raise ValueError(
                f"moving polygon already overlaps obstacle {obstacle.id!r}")
        if best is None or constraint < best:
            best = constraint

    wall_limit = None
    if walls is not None:
        if key == (0, -1) and walls.ymin is not None:
            wall_limit = moving.min_y - walls.ymin
        elif key == (0, 1) and walls.ymax is not None:
            wall_limit = walls.ymax - moving.max_y
        elif key == (-1, 0) and walls.xmin is not None:
            wall_limit = moving.min_x - walls.xmin
        elif key == (1, 0) and walls.xmax is not None:
            wall_limit = walls.xmax - moving.max_x
        if wall_limit is not None:
            if wall_limit < 0:
                raise ValueError("moving polygon starts outside the walls")
            if best is None or wall_limit < best:
                best = wall_limit

    if best is None:
        raise Unbounded("no obstacle or wall limits the motion")
    return best


def _ray_block(region: Sequence[Vec], direction: Vec):
    """First strictly-interior entry of the ray {t * direction, t >= 0}.

    Returns None when the ray never enters the interior of the convex
    region, a negative value when t=0 is already interior (caller treats
    that as a violated precondition), else the blocking parameter.
    """
    n = len(region)
    if n < 3:
        return None
    lo = hi = None
    for i in range(n):
        u = region[i]
        v = region[(i + 1) % n]
        ex = v.x - u.x
        ey = v.y - u.y
        # outward normal of a CCW edge
        nx, ny = ey, -ex
        a = nx * direction.x + ny * direction.y
        c = nx * u.x + ny * u.y
        if a == 0:
            if c <= 0:
                return None
            continue
        bound = c / a
        if a > 0:
            if hi is None or bound < hi:
                hi = bound
        else:
            if lo is None or bound > lo:
                lo = bound
    if lo is None or hi is None or not (lo < hi):
        return None
    if hi <= 0:
        return None
    if lo >= 0:
        return lo
    return Rational(-1)


def rotate90(p: ConvexPolygon) -> ConvexPolygon:
    """Counter-clockwise quarter turn: (x, y) -> (-y, x)."""
    return canonicalize_polygon([Vec(-v.y, v.x) for v in p.vertices], id=p.id)


def rotate270(p: ConvexPolygon) -> ConvexPolygon:
    """Clockwise quarter turn: (x, y) -> (y, -x)."""
    return canonicalize_polygon([Vec(v.y, -v.x) for v in p.vertices], id=p.id)


def mirror_x(p: ConvexPolygon) -> ConvexPolygon:
    """Reflection across the y-axis: (x, y) -> (-x, y)."""
    return canonicalize_polygon([Vec(-v.x, v.y) for v in reversed(p.vertices)], id=p.id)


_CONGRUENCES = {
    "rotate90": rotate90,
    "rotate-90": rotate270,
    "mirror-x": mirror_x,
}


def apply_congruence(p: ConvexPolygon, transform: str) -> ConvexPolygon:
    """Apply one of the named exact congruences: rotate90, rotate-90, mirror-x."""
    try:
        fn = _CONGRUENCES[transform]
    except KeyError:
        raise ValueError(f"unknown congruence {transform!r}") from None
    return fn(p)


def intersection_cycle(a: ConvexPolygon, b: ConvexPolygon) -> list[Vec]:
    """Vertices of a /\\ b obtained by clipping a with b's halfplanes."""
    pts = list(a.vertices)
    bverts = b.vertices
    n = len(bverts)
    for i in range(n):
        if not pts:
            break
        pts = clip_halfplane(pts, bverts[i], bverts[(i + 1) % n] - bverts[i])
    return pts
