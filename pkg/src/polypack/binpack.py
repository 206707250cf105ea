"""Unit-bin packing in three regimes: thin, wide-or-short, shared spine.

Thin instances (width <= 1/M) run the area pipeline with the multiplier
chosen so a shelf is exactly one bin wide, then distribute shelves over bins
with a 1D rule.  Wide-or-short instances are routed by case analysis onto
the thin packer, one-per-bin bins, or a narrow-strip pipeline.  Instances
whose polygons all share a tall spine are packed by chains along the left
wall and the floor of each bin, grouped with FFD over their largest
horizontal chords.

Every packer validates the bounds it is responsible for; failures raise
GuaranteeViolation and indicate bugs, not bad inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BadParams,
    GuaranteeViolation,
    HeightBelowThreshold,
    PreconditionViolated,
    SpineMismatch,
    SpineNotInSet,
    WidthExceedsOneOverM,
)
from .geometry import (
    BinWalls,
    ConvexPolygon,
    Spine,
    Vec,
    contact_offset,
    convex_hull,
    eta,
    interiors_overlap,
    mirror_x,
    rotate90,
)
from .numbers import Rat, ONE, ZERO, rat, rfloor
from .packing import (
    BinPacking,
    MultiBinPacking,
    Placement,
    check_instance,
    height_max,
    relay_shelf,
    total_area,
    width_max,
)
from .parallelogram import TiltClass, bounding_xpar, tilt_of
from .shelves import Item1D, RectItem, pack_1d, pack_rect_shelves

UNIT_WALLS = BinWalls(xmin=ZERO, ymin=ZERO, xmax=ONE, ymax=ONE)


def _bin_precheck(polys):
    for p in polys:
        if p.width > 1 or p.height > 1:
            raise PreconditionViolated(
                f"{p.id!r} does not fit a unit bin ({p.width} x {p.height})")


def _records_to_bins(records, rule) -> list[BinPacking]:
    """Distribute shelf records into unit bins with a 1D rule on heights."""
    items = [Item1D(rec.height, str(i)) for i, rec in enumerate(records)]
    bins = []
    for group in pack_1d(items, rule, ONE):
        placements = []
        floors = []
        floor = ZERO
        for idx_str, h in group.items:
            rec = records[int(idx_str)]
            floors.append(floor)
            for entry in rec.entries:
                placements.append(Placement(
                    entry.polygon_id,
                    entry.offset + Vec(-rec.span_lo, floor)))
            floor += h
        bins.append(BinPacking(placements=tuple(placements),
                               shelf_floors=tuple(floors)))
    return bins


def _single_bin(p: ConvexPolygon) -> BinPacking:
    """One polygon alone in a bin, anchored at the origin corner."""
    return BinPacking(placements=(
        Placement(p.id, Vec(-p.min_x, -p.min_y)),))


def pack_bins_thin(polygons: Sequence[ConvexPolygon], M: int) -> MultiBinPacking:
    """Pack polygons of width at most 1/M into unit bins."""
    if not isinstance(M, int) or M < 2:
        raise BadParams("M must be an integer >= 2")
    polys = list(polygons)
    if not polys:
        return MultiBinPacking(bins=(), metadata={"packer": "bins_thin", "M": M})
    check_instance(polys)
    _bin_precheck(polys)

    wmax = width_max(polys)
    hmax = height_max(polys)
    area_in = total_area(polys)
    if wmax > rat(1, M):
        raise WidthExceedsOneOverM(f"w_max {wmax} > 1/{M}")

    both_bounded = hmax <= rat(1, M)
    rule = "FF" if both_bounded else "NF"
    by_id = {p.id: p for p in polys}
    xpars = {p.id: bounding_xpar(p) for p in polys}

    records = []
    if M >= 3:
        c = 1 / wmax - 2
        rects = [RectItem(xpars[p.id].base, xpars[p.id].height, p.id) for p in polys]
        shelf_packing = pack_rect_shelves(rects, c * wmax, "FFDH")
        for shelf in shelf_packing.shelves:
            members = [xpars[pid] for pid, _ in shelf.items]
            records.append(relay_shelf(members, by_id, cursor_start=wmax,
                                       frame_width=ONE, shelf_height=shelf.height))
    else:
        # single-tilt classes overhang on one side only, so a strip of width
        # c * w_max plus one overhang is exactly one bin wide
        c = 1 / wmax - 1
        for tilt in (TiltClass.LEFT, TiltClass.RIGHT):
            group = [p for p in polys if tilt_of(xpars[p.id]) is tilt]
            if not group:
                continue
            rects = [RectItem(xpars[p.id].base, xpars[p.id].height, p.id)
                     for p in group]
            shelf_packing = pack_rect_shelves(rects, c * wmax, "FFDH")
            cursor = wmax if tilt is TiltClass.LEFT else ZERO
            for shelf in shelf_packing.shelves:
                members = [xpars[pid] for pid, _ in shelf.items]
                records.append(relay_shelf(members, by_id, cursor_start=cursor,
                                           frame_width=ONE,
                                           shelf_height=shelf.height))

    bins = _records_to_bins(records, rule)
    count = len(bins)
    bound = thin_bound(M, both_bounded, area_in)
    if count > bound:
        raise GuaranteeViolation(f"thin bins {count} > bound {bound}")
    return MultiBinPacking(
        bins=tuple(bins),
        metadata={
            "packer": "bins_thin",
            "M": M,
            "c": c,
            "both_bounded": both_bounded,
            "rule": rule,
            "w_max": wmax,
            "h_max": hmax,
            "area_in": area_in,
        },
    )


def thin_bound(M: int, both_bounded: bool, area_in) -> Rat:
    if M == 2:
        return (24 * area_in + 3) if both_bounded else (32 * area_in + 5)
    if both_bounded:
        return rat(2 * (M + 1) * (M - 1), (M - 2) ** 2) * area_in + 2
    return rat(4 * M * (M - 1), (M - 2) ** 2) * area_in + 3


def pack_bins_wideshort(polygons: Sequence[ConvexPolygon], delta) -> MultiBinPacking:
    """Pack polygons that are narrow or short: width or height <= 1 - delta."""
    delta = rat(delta)
    if not (0 < delta < 1):
        raise BadParams("delta must be in (0, 1)")
    polys = list(polygons)
    if not polys:
        return MultiBinPacking(bins=(), metadata={"packer": "bins_wideshort",
                                                  "delta": delta})
    check_instance(polys)
    _bin_precheck(polys)
    for p in polys:
        if p.width > 1 - delta and p.height > 1 - delta:
            raise PreconditionViolated(
                f"{p.id!r} is both wider and taller than 1 - delta")

    bins: list[BinPacking] = []
    branch_counts = {"thin": 0, "single": 0, "sliver": 0}
    bound_side = ZERO

    for upright in (True, False):
        group = [p for p in polys if (p.width <= p.height) == upright]
        if not group:
            continue
        work = group if upright else [rotate90(p) for p in group]

        thin = [p for p in work if p.width <= rat(1, 2)]
        wide = [p for p in work if p.width > rat(1, 2)]
        singles = [p for p in wide if p.area >= delta / 4]
        slivers = [p for p in wide if p.area < delta / 4]

        sub_bins: list[BinPacking] = []
        if thin:
            sub = pack_bins_thin(thin, 2)
            sub_bins.extend(sub.bins)
            branch_counts["thin"] += sub.count
            bound_side += thin_bound(2, height_max(thin) <= rat(1, 2),
                                     total_area(thin))
        for p in singles:
            sub_bins.append(_single_bin(p))
        branch_counts["single"] += len(singles)
        if singles:
            bound_side += 4 * total_area(singles) / delta
        if slivers:
            d_bins, d_bound = _pack_slivers(slivers, delta)
            sub_bins.extend(d_bins)
            branch_counts["sliver"] += len(d_bins)
            bound_side += d_bound

        if not upright:
            sub_bins = [_rotate_bin_back(b) for b in sub_bins]
        bins.extend(sub_bins)

    result = MultiBinPacking(
        bins=tuple(bins),
        metadata={
            "packer": "bins_wideshort",
            "delta": delta,
            "branches": branch_counts,
            "bound_side": bound_side,
            "area_in": total_area(polys),
        },
    )
    if result.count > bound_side:
        raise GuaranteeViolation(
            f"wideshort bins {result.count} > branch bound {bound_side}")
    return result


def _pack_slivers(slivers, delta) -> tuple[list[BinPacking], Rat]:
    """Wide, tall, small-area polygons: narrow-strip pipeline per tilt class.

    Their bounding parallelograms have base at most delta, so NFDH in a strip
    of width delta followed by next-fit over shelves needs at most
    8 * area / delta + 3 bins per tilt class; the relaid shelves are at most
    delta plus one slant width wide, which is at most 1.
    """
    by_id = {p.id: p for p in slivers}
    xpars = {p.id: bounding_xpar(p) for p in slivers}
    for p in slivers:
        q = xpars[p.id]
        if q.base > delta:
            raise GuaranteeViolation(
                f"sliver parallelogram base {q.base} > delta {delta}")

    bins: list[BinPacking] = []
    bound = ZERO
    for tilt in (TiltClass.LEFT, TiltClass.RIGHT):
        group = [p for p in slivers if tilt_of(xpars[p.id]) is tilt]
        if not group:
            continue
        overhang = max(xpars[p.id].wside for p in group)
        cursor = overhang if tilt is TiltClass.LEFT else ZERO
        rects = [RectItem(xpars[p.id].base, xpars[p.id].height, p.id)
                 for p in group]
        shelf_packing = pack_rect_shelves(rects, delta, "NFDH")
        records = []
        for shelf in shelf_packing.shelves:
            members = [xpars[pid] for pid, _ in shelf.items]
            records.append(relay_shelf(members, by_id, cursor_start=cursor,
                                       frame_width=delta + overhang,
                                       shelf_height=shelf.height))
        class_bins = _records_to_bins(records, "NF")
        class_bound = 8 * total_area(group) / delta + 3
        if len(class_bins) > class_bound:
            raise GuaranteeViolation(
                f"sliver class used {len(class_bins)} bins > {class_bound}")
        bins.extend(class_bins)
        bound += class_bound
    return bins, bound


def _rotate_bin_back(b: BinPacking) -> BinPacking:
    """Undo the quarter turn used for wide polygons, staying in the unit bin."""
    return BinPacking(
        placements=tuple(
            Placement(pl.polygon_id, Vec(pl.offset.y, 1 - pl.offset.x))
            for pl in b.placements),
        shelf_floors=(),
        metadata=dict(b.metadata),
    )


def _mirror_bin_back(b: BinPacking) -> BinPacking:
    """Undo the reflection used for left-tilted spines."""
    return BinPacking(
        placements=tuple(
            Placement(pl.polygon_id, Vec(1 - pl.offset.x, pl.offset.y))
            for pl in b.placements),
        shelf_floors=(),
        metadata=dict(b.metadata),
    )


def matching_spine(p: ConvexPolygon, template: Vec) -> Optional[Spine]:
    """A spine of p equal to the template vector, if one exists.

    The lowest and highest faces of a convex polygon are a vertex or a
    horizontal edge; any bottom point whose translate by the template lands
    on the top face yields a valid spine.  Returns the leftmost choice.
    """
    if p.height != template.y:
        return None
    bottom = [v for v in p.vertices if v.y == p.min_y]
    top = [v for v in p.vertices if v.y == p.max_y]
    bl = min(v.x for v in bottom)
    br = max(v.x for v in bottom)
    tl = min(v.x for v in top)
    tr = max(v.x for v in top)
    lo = max(bl, tl - template.x)
    hi = min(br, tr - template.x)
    if lo > hi:
        return None
    b = Vec(lo, p.min_y)
    return Spine(bottom=b, top=b + template, polygon_id=p.id)


def _spine_crossing_x(spine: Spine, offset: Vec, y=rat(1, 2)):
    """x-coordinate where the placed spine crosses the horizontal line at y."""
    b = spine.bottom + offset
    d = spine.vector
    return b.x + (y - b.y) * d.x / d.y


@dataclass
class _ChainState:
    placed: list  # (polygon at placed coords, eta, spine crossing x)
    wall_mode: bool = True


def pack_bins_shared_spine(polygons: Sequence[ConvexPolygon],
                           template) -> MultiBinPacking:
    """Pack polygons that all share one spine (up to translation).

    The template is the spine vector (dx, H) with H >= 3/4.  Left-tilted
    templates are handled in mirrored coordinates.  For each guess g, the g
    polygons of largest eta go one per bin and the rest are grouped by FFD
    over rho = min(2 eta, x_max - x_min); the guess minimizing g + groups
    wins.  Each group is laid as a chain: first polygon in the top left
    corner, the next ones sliding down the left wall onto the previous one,
    then sliding left along the floor once the wall is used up.
    """
    template = template.vector if isinstance(template, Spine) else template
    polys = list(polygons)
    if not polys:
        return MultiBinPacking(bins=(), metadata={"packer": "bins_spine"})
    check_instance(polys)
    _bin_precheck(polys)

    H = template.y
    if H < rat(3, 4):
        raise HeightBelowThreshold(f"spine height {H} < 3/4")
    if H > 1:
        raise PreconditionViolated(f"spine height {H} > 1")

    mirrored = template.x < 0
    work_template = Vec(-template.x, template.y) if mirrored else template
    work = [mirror_x(p) for p in polys] if mirrored else polys

    spines = {}
    for p in work:
        sp = matching_spine(p, work_template)
        if sp is None:
            raise SpineMismatch(f"{p.id!r} has no spine {work_template}")
        spines[p.id] = sp

    etas = {p.id: eta(p) for p in work}
    ws = work_template.x
    x_min = (1 - 1 / (2 * H)) * ws
    x_max = 1 - x_min
    cap = x_max - x_min

    by_eta = sorted(work, key=lambda p: -etas[p.id])  # stable
    n = len(work)

    best = None  # (g + K_g, g, groups as id lists)
    for g in range(n + 1):
        rest = by_eta[g:]
        if cap <= 0:
            groups = [[p.id] for p in rest]
        else:
            items = [Item1D(min(2 * etas[p.id], cap), p.id) for p in rest]
            groups = [[pid for pid, _ in b.items]
                      for b in pack_1d(items, "FF", cap, presort="decreasing")]
        score = (g + len(groups), g)
        if best is None or score < best[0]:
            best = (score, g, groups)
    _, g_best, groups = best

    by_id = {p.id: p for p in work}
    bins = [
        _single_bin(by_id[p.id]) for p in by_eta[:g_best]
    ]
    for group in groups:
        members = [by_id[pid] for pid in group]
        bins.append(_chain_pack_bin(members, spines, etas, x_min, x_max, H))

    if mirrored:
        bins = [_mirror_bin_back(b) for b in bins]

    return MultiBinPacking(
        bins=tuple(bins),
        metadata={
            "packer": "bins_spine",
            "template": template,
            "mirrored": mirrored,
            "H": H,
            "x_min": x_min,
            "x_max": x_max,
            "g": g_best,
            "groups": len(groups),
            "area_in": total_area(polys),
        },
    )


def _chain_pack_bin(members, spines, etas, x_min, x_max, H) -> BinPacking:
    """Chain-place one FFD group into a unit bin and assert the width chain."""
    if len(members) == 1:
        return _single_bin(members[0])

    placed: list[ConvexPolygon] = []
    wall_mode = True
    for i, p in enumerate(members):
        if i == 0:
            offset = Vec(-p.min_x, 1 - p.max_y)
        elif wall_mode:
            ty = _wall_rest(p, placed[-1])
            floor_ty = -p.min_y
            if ty is not None and ty >= floor_ty:
                offset = Vec(-p.min_x, ty)
            else:
                wall_mode = False
        if i > 0 and not wall_mode:
            frontier = max(q.max_x for q in placed)
            start = Vec(frontier - p.min_x, -p.min_y)
            lam = contact_offset(p.translate(start), placed, Vec(rat(-1), ZERO),
                                 BinWalls(xmin=ZERO, ymin=ZERO, ymax=ONE))
            offset = start + Vec(-lam, ZERO)
        moved = p.translate(offset)
        for q in placed:
            if interiors_overlap(moved, q):
                raise GuaranteeViolation(
                    f"chain placement overlap: {moved.id!r} vs {q.id!r}")
        if moved.min_y < 0 or moved.max_y > 1 or moved.min_x < 0:
            raise GuaranteeViolation(f"chain placement escapes bin: {moved.id!r}")
        placed.append(moved)

    # constructive width chain: crossings advance by at most the chord sums
    xs = []
    for orig, moved in zip(members, placed):
        sp = spines[orig.id]
        xs.append(_spine_crossing_x(sp, Vec(moved.min_x - orig.min_x,
                                            moved.min_y - orig.min_y)))
    if not (x_min <= xs[0] and xs[0] - x_min <= etas[members[0].id]):
        raise GuaranteeViolation("chain start exceeds eta(p1)")
    for j in range(len(xs) - 1):
        gap = xs[j + 1] - xs[j]
        if gap < 0 or gap > etas[members[j].id] + etas[members[j + 1].id]:
            raise GuaranteeViolation(f"chain gap {gap} out of bounds at {j}")
    width = max(q.max_x for q in placed) - min(q.min_x for q in placed)
    if max(q.max_x for q in placed) > 1 or width > 1:
        raise GuaranteeViolation(f"chain width {width} exceeds the bin")

    return BinPacking(placements=tuple(
        Placement(m.id, Vec(moved.min_x - m.min_x, moved.min_y - m.min_y))
        for m, moved in zip(members, placed)))


def _wall_rest(p: ConvexPolygon, prev: ConvexPolygon):
    """Lowest wall-pinned position of p touching prev from above, if any.

    With p pinned to the left wall (min_x = 0), the translations overlapping
    prev form the interior of the region prev + (-p); its vertical chord at
    the pinned x gives the forbidden open interval, whose lower end is the
    resting offset.
    """
    tx = -p.min_x
    region = convex_hull(ov - mv for ov in prev.vertices for mv in p.vertices)
    if len(region) < 3:
        return None
    rx_lo = min(v.x for v in region)
    rx_hi = max(v.x for v in region)
    if not (rx_lo < tx < rx_hi):
        return None
    lo = None
    n = len(region)
    for i in range(n):
        a, b = region[i], region[(i + 1) % n]
        if a.x == b.x:
            if a.x == tx:
                ys = (a.y, b.y)
            else:
                continue
        else:
            if not (min(a.x, b.x) <= tx <= max(a.x, b.x)):
                continue
            t = (tx - a.x) / (b.x - a.x)
            ys = (a.y + t * (b.y - a.y),)
        for y in ys:
            if lo is None or y < lo:
                lo = y
    return lo


def pack_bins_spine_set(polygons: Sequence[ConvexPolygon],
                        templates: Sequence[Vec]) -> MultiBinPacking:
    """Route by spine template; short polygons go to the wide-or-short packer."""
    polys = list(polygons)
    if not polys:
        return MultiBinPacking(bins=(), metadata={"packer": "bins_spine_set"})
    check_instance(polys)
    _bin_precheck(polys)
    templates = [t.vector if isinstance(t, Spine) else t for t in templates]

    short = [p for p in polys if p.height < rat(3, 4)]
    tall = [p for p in polys if p.height >= rat(3, 4)]

    groups: dict[int, list[ConvexPolygon]] = {}
    for p in tall:
        probe = mirror_x(p)
        for i, t in enumerate(templates):
            cand = p if t.x >= 0 else probe
            tvec = t if t.x >= 0 else Vec(-t.x, t.y)
            if matching_spine(cand, tvec) is not None:
                groups.setdefault(i, []).append(p)
                break
        else:
            raise SpineNotInSet(f"{p.id!r} matches no spine template")

    bins = []
    routing = {"short": 0}
    if short:
        sub = pack_bins_wideshort(short, rat(1, 4))
        bins.extend(sub.bins)
        routing["short"] = sub.count
    for i in sorted(groups):
        sub = pack_bins_shared_spine(groups[i], templates[i])
        bins.extend(sub.bins)
        routing[f"spine_{i}"] = sub.count

    return MultiBinPacking(
        bins=tuple(bins),
        metadata={
            "packer": "bins_spine_set",
            "templates": templates,
            "routing": routing,
            "area_in": total_area(polys),
        },
    )
