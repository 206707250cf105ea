"""Packing validation, lower bounds, and guarantee reports.

Validation is exact: pairwise open-interior overlap tests plus vertex
containment, with violations returned as data (never exceptions).  Lower
bounds are certified values never exceeding the optimum, so a reported
ratio of achieved/bound is an upper estimate of the true approximation
ratio.  Guarantee reports evaluate the checkable right-hand side of the
bound each packer promises and compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import UnknownPackerTag
from .geometry import ConvexPolygon, Vec, intersection_cycle
from .numbers import Rat, ONE, ZERO, rat, rceil, sqrt_under
from .packing import (
    BinPacking,
    BoxPacking,
    MultiBinPacking,
    Placement,
    StripPackingResult,
    height_max,
    total_area,
    width_max,
)
from .area_min import area_bound
from .strip import strip_bound
from .binpack import thin_bound

OBJECTIVES = ("area", "perimeter", "square", "strip", "bins")


@dataclass(frozen=True)
class Violation:
    kind: str  # Overlap | OutOfContainer | MissingPolygon | DuplicatePolygon
    ids: tuple
    witness: Optional[tuple] = None

    def __str__(self):
        w = f" at {self.witness}" if self.witness else ""
        return f"{self.kind}({', '.join(self.ids)}){w}"


@dataclass
class ValidationResult:
    ok: bool
    violations: list = field(default_factory=list)


def _container_groups(result):
    """(container width, height, placements) per container of any result type."""
    if isinstance(result, BoxPacking):
        return [(result.width, result.height, result.placements)]
    if isinstance(result, StripPackingResult):
        return [(result.width, result.height, result.placements)]
    if isinstance(result, MultiBinPacking):
        return [(ONE, ONE, b.placements) for b in result.bins]
    if isinstance(result, BinPacking):
        return [(ONE, ONE, result.placements)]
    raise TypeError(f"unsupported result type {type(result).__name__}")


def validate_packing(polygons: Sequence[ConvexPolygon], result,
                     method: str = "pairwise") -> ValidationResult:
    """Exact validity check of a packing against its instance.

    method "pairwise" tests every pair; "sweep" sorts by min-x and skips
    pairs whose bounding boxes cannot meet.  Both return identical results.
    """
    if method not in ("pairwise", "sweep"):
        raise ValueError(f"unknown method {method!r}")
    by_id = {p.id: p for p in polygons}
    violations: list[Violation] = []

    seen: dict[str, int] = {}
    for W, H, placements in _container_groups(result):
        for pl in placements:
            seen[pl.polygon_id] = seen.get(pl.polygon_id, 0) + 1
    for pid in by_id:
        n = seen.get(pid, 0)
        if n == 0:
            violations.append(Violation("MissingPolygon", (pid,)))
        elif n > 1:
            violations.append(Violation("DuplicatePolygon", (pid,)))
    for pid in seen:
        if pid not in by_id:
            violations.append(Violation("MissingPolygon", (pid,),
                                        witness=("unknown id",)))

    for W, H, placements in _container_groups(result):
        placed = []
        for pl in placements:
            base = by_id.get(pl.polygon_id)
            if base is None:
                continue
            poly = base.translate(pl.offset)
            placed.append(poly)
            if poly.min_x < 0 or poly.min_y < 0 or poly.max_x > W or poly.max_y > H:
                violations.append(Violation(
                    "OutOfContainer", (pl.polygon_id,),
                    witness=(str(poly.min_x), str(poly.min_y),
                             str(poly.max_x), str(poly.max_y))))
        violations.extend(_overlap_violations(placed, method))

    return ValidationResult(ok=not violations, violations=violations)


def _overlap_violations(placed, method):
    from .geometry import interiors_overlap

    out = []
    n = len(placed)
    if method == "pairwise":
        pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
    else:
        order = sorted(range(n), key=lambda i: (placed[i].min_x, i))
        pairs = []
        for a in range(n):
            i = order[a]
            for b in range(a + 1, n):
                j = order[b]
                if placed[j].min_x >= placed[i].max_x:
                    break
                pairs.append((min(i, j), max(i, j)))
        pairs.sort()
    for i, j in pairs:
        if interiors_overlap(placed[i], placed[j]):
            cycle = intersection_cycle(placed[i], placed[j])
            witness = None
            if cycle:
                cx = sum((v.x for v in cycle), ZERO) / len(cycle)
                cy = sum((v.y for v in cycle), ZERO) / len(cycle)
                witness = (str(cx), str(cy))
            out.append(Violation("Overlap", (placed[i].id, placed[j].id),
                                 witness=witness))
    return out


def lower_bound(polygons: Sequence[ConvexPolygon], objective: str) -> Rat:
    """A certified value never above the optimum of the given objective."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if not polygons:
        return ZERO
    wmax = width_max(polygons)
    hmax = height_max(polygons)
    area = total_area(polygons)
    if objective == "area":
        return max(area, wmax * hmax)
    if objective == "perimeter":
        return max(2 * (wmax + hmax), 4 * sqrt_under(area))
    if objective == "square":
        return max(wmax, hmax, sqrt_under(area))
    if objective == "strip":
        return max(hmax, area)
    return rat(max(1, rceil(area)))  # bins


@dataclass
class GuaranteeReport:
    objective: str
    achieved: Rat
    lower_bound: Rat
    bound_value: Rat
    ratio: Rat
    passed: bool

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return (f"{self.objective}: achieved {self.achieved} <= bound "
                f"{self.bound_value} [{status}], ratio vs LB {self.lower_bound}: "
                f"{self.ratio}")


def guarantee_report(polygons: Sequence[ConvexPolygon], result,
                     known_feasible_bins: Optional[int] = None) -> GuaranteeReport:
    """Evaluate the packer's checkable bound for this run, exactly."""
    meta = result.metadata
    tag = meta.get("packer")
    area = total_area(polygons) if polygons else ZERO
    wmax = width_max(polygons) if polygons else ZERO
    hmax = height_max(polygons) if polygons else ZERO

    if tag in ("area", "area_xpar"):
        objective = "area"
        achieved = result.width * result.height
        bound = area_bound(tag, meta["engine"], meta["c"], area, wmax, hmax)
    elif tag == "perimeter":
        objective = "perimeter"
        achieved = 2 * (result.width + result.height)
        bound = rat(15, 4) * (1 + meta["epsilon"]) * meta["lower_bound"]
    elif tag == "square":
        objective = "square"
        achieved = max(result.width, result.height)
        l = meta["l"]
        m = meta["anchor_m"]
        factor = max(l + 2, 2 * rat(m + 1, m) / l + 1)
        bound = factor * (1 + meta["epsilon"]) * meta["lower_bound"]
    elif tag == "strip":
        objective = "strip"
        achieved = result.height
        bound = strip_bound(meta["c"], area, hmax) if polygons else ZERO
    elif tag == "bins_thin":
        objective = "bins"
        achieved = rat(result.count)
        bound = thin_bound(meta["M"], meta["both_bounded"], area) \
            if polygons else ZERO
    elif tag == "bins_wideshort":
        objective = "bins"
        achieved = rat(result.count)
        if known_feasible_bins is not None:
            bound = (8 / meta["delta"] + 3) * known_feasible_bins
        else:
            bound = meta["bound_side"]
    elif tag in ("bins_spine", "bins_spine_set"):
        objective = "bins"
        achieved = rat(result.count)
        if known_feasible_bins is None:
            raise ValueError(f"{tag} reports need known_feasible_bins")
        bound = rat(55, 2) * known_feasible_bins
        if tag == "bins_spine_set":
            routing = meta.get("routing", {})
            short = routing.get("short", 0)
            spine_groups = sum(1 for k in routing if k.startswith("spine_"))
            # short branch adds (8/delta + 3) k at delta = 1/4, each spine
            # group its own 27.5 k
            bound = (35 * known_feasible_bins if short else ZERO) \
                + rat(55, 2) * known_feasible_bins * max(spine_groups, 0)
    else:
        raise UnknownPackerTag(f"metadata packer tag {tag!r}")

    lb = lower_bound(polygons, objective)
    ratio = achieved / lb if lb > 0 else ZERO
    return GuaranteeReport(
        objective=objective,
        achieved=achieved,
        lower_bound=lb,
        bound_value=bound,
        ratio=ratio,
        passed=achieved <= bound,
    )
