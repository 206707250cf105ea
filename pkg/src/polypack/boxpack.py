"""Perimeter and minimum-square packing via parameter sweeps.

Both objectives reuse the area pipeline while sweeping its strip multiplier
c over a geometric grid 1, (1+eps), (1+eps)^2, ...  The grid alone only
covers the ideal multiplier when the optimum is moderate, so one analytic
candidate derived from the computable lower bound is always added; the
asserted guarantee is anchored at that candidate, making it unconditional.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BadParams, EmptyInstance, GuaranteeViolation
from .geometry import ConvexPolygon, Vec, rotate90
from .numbers import Rat, ONE, rat, rceil, rfloor, sqrt_under
from .packing import BoxPacking, Placement, check_instance, height_max, total_area, width_max
from .area_min import pack_area_min

#: rational stand-in for (sqrt(17) - 1) / 2, within 1e-6
SQUARE_L = rat(1561553, 1000000)

_GRID_CAP = 65536


def _sqrt_bits(epsilon):
    # keep the root's relative error well below epsilon so the asserted
    # (1 + epsilon) bound stays provable for any positive epsilon
    if epsilon >= 1:
        return 64
    return max(64, rceil(3 / epsilon).bit_length())


def perimeter_lower_bound(polygons, bits=64) -> Rat:
    """max(2(w_max + h_max), 4 sqrt(area)); the root is under-approximated."""
    return max(2 * (width_max(polygons) + height_max(polygons)),
               4 * sqrt_under(total_area(polygons), bits))


def square_lower_bound(polygons, bits=64) -> Rat:
    return max(width_max(polygons), height_max(polygons),
               sqrt_under(total_area(polygons), bits))


def _candidate_grid(n, epsilon):
    cs = [ONE]
    while cs[-1] < n and len(cs) < _GRID_CAP:
        cs.append(cs[-1] * (1 + epsilon))
    return cs


def pack_perimeter_min(polygons: Sequence[ConvexPolygon], epsilon) -> BoxPacking:
    """Perimeter objective; guarantees 3.75 * (1 + epsilon) times the lower bound."""
    polys = list(polygons)
    if not polys:
        raise EmptyInstance("nothing to pack")
    check_instance(polys)
    epsilon = rat(epsilon)
    if epsilon <= 0:
        raise BadParams("epsilon must be positive")

    wmax = width_max(polys)
    hmax = height_max(polys)
    lb = perimeter_lower_bound(polys, _sqrt_bits(epsilon))

    # let the smaller extent play the width role; otherwise pack the quarter
    # turned instance into the same horizontal shelves and turn it back
    rotated = hmax < wmax
    work = [rotate90(p) for p in polys] if rotated else polys
    w_role = hmax if rotated else wmax

    anchor_c = max(ONE, lb / (2 * w_role))
    candidates = _candidate_grid(len(polys), epsilon)
    candidates.append(anchor_c)

    best = None
    best_c = None
    for c in candidates:
        packing = pack_area_min(work, c, "FFDH")
        per = 2 * (packing.width + packing.height)
        if best is None or per < 2 * (best.width + best.height):
            best = packing
            best_c = c

    if rotated:
        best = _rotate_box_back(best)
    perimeter = 2 * (best.width + best.height)
    bound = rat(15, 4) * (1 + epsilon) * lb
    if perimeter > bound:
        raise GuaranteeViolation(f"perimeter {perimeter} > bound {bound}")

    best.metadata.update({
        "packer": "perimeter",
        "epsilon": epsilon,
        "chosen_c": best_c,
        "anchor_c": anchor_c,
        "rotated": rotated,
        "lower_bound": lb,
        "w_max": wmax,
        "h_max": hmax,
        "area_in": total_area(polys),
    })
    return best


def pack_min_square(polygons: Sequence[ConvexPolygon], epsilon) -> BoxPacking:
    """Minimum enclosing square side; about 3.56 * (1 + epsilon) of the bound."""
    polys = list(polygons)
    if not polys:
        raise EmptyInstance("nothing to pack")
    check_instance(polys)
    epsilon = rat(epsilon)
    if epsilon <= 0:
        raise BadParams("epsilon must be positive")

    wmax = width_max(polys)
    lb = square_lower_bound(polys, _sqrt_bits(epsilon))

    anchor_c = max(ONE, SQUARE_L * lb / wmax)
    candidates = _candidate_grid(len(polys), epsilon)
    candidates.append(anchor_c)

    best = None
    best_c = None
    for c in candidates:
        packing = pack_area_min(polys, c, "FFDH")
        side = max(packing.width, packing.height)
        if best is None or side < max(best.width, best.height):
            best = packing
            best_c = c

    side = max(best.width, best.height)
    m_anchor = rfloor(anchor_c)
    factor = max(SQUARE_L + 2, 2 * rat(m_anchor + 1, m_anchor) / SQUARE_L + 1)
    bound = factor * (1 + epsilon) * lb
    if side > bound:
        raise GuaranteeViolation(f"square side {side} > bound {bound}")

    best.metadata.update({
        "packer": "square",
        "epsilon": epsilon,
        "chosen_c": best_c,
        "anchor_c": anchor_c,
        "anchor_m": m_anchor,
        "l": SQUARE_L,
        "lower_bound": lb,
        "w_max": wmax,
        "h_max": height_max(polys),
        "area_in": total_area(polys),
    })
    return best


def _rotate_box_back(packing: BoxPacking) -> BoxPacking:
    """Conjugate a packing of the quarter-turned instance back to the originals.

    A placement t of rotate90(p) corresponds to placing p at (t.y, W - t.x)
    inside an H by W box, where W, H are the rotated container's extents.
    """
    W = packing.width
    placements = tuple(
        Placement(pl.polygon_id, Vec(pl.offset.y, W - pl.offset.x))
        for pl in packing.placements
    )
    return BoxPacking(
        width=packing.height,
        height=W,
        placements=placements,
        shelves=(),
        shelf_floors=(),
        metadata=dict(packing.metadata),
    )
