"""Instance and packing files, plus deterministic instance generators.

Files are JSON with every number carried as an exact string ("a/b" or a
decimal); parsing and serialization round-trip exactly.  Generators are pure
functions of (kind, n, seed, params); the known-bins and shared-spine kinds
certify feasibility by construction and record the certificate in metadata.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional, Sequence

from .errors import BadParams, InvalidPolygon, ParseError, PolypackError
from .geometry import ConvexPolygon, Vec, canonicalize_polygon, shoelace_doubled, clip_halfplane
from .numbers import Rat, Rational, ZERO, format_rational, parse_rational, rat
from .packing import (
    BinPacking,
    BoxPacking,
    MultiBinPacking,
    Placement,
    StripPackingResult,
)

FORMAT_VERSION = 1
GEN_KINDS = ("random-convex", "known-bins", "shared-spine", "thin-1overM")


@dataclass
class InstanceFile:
    polygons: list
    metadata: dict = field(default_factory=dict)

    def by_id(self):
        return {p.id: p for p in self.polygons}


@dataclass
class PackingFile:
    objective: str
    params: dict
    containers: list  # dicts with width/height strings
    placements: list  # dicts with id, dx, dy, container
    guarantee: Optional[dict] = None


def parse_instance(data) -> InstanceFile:
    """Parse instance JSON text or bytes; numbers may be "a/b" or decimals."""
    obj = _load_json(data)
    if not isinstance(obj, dict) or "polygons" not in obj:
        raise ParseError("instance file needs a top-level 'polygons' list")
    polys = []
    for i, entry in enumerate(obj["polygons"]):
        pid = entry.get("id")
        if not pid or not isinstance(pid, str):
            raise ParseError(f"polygon #{i} has no id")
        verts = entry.get("vertices")
        if not isinstance(verts, list):
            raise ParseError(f"polygon {pid!r} has no vertices list")
        try:
            pts = [(parse_rational(v[0]), parse_rational(v[1])) for v in verts]
        except (ValueError, IndexError, TypeError) as exc:
            raise ParseError(f"polygon {pid!r}: bad vertex: {exc}") from None
        try:
            polys.append(canonicalize_polygon(pts, id=pid))
        except PolypackError as exc:
            raise InvalidPolygon(pid, exc) from None
    return InstanceFile(polygons=polys, metadata=obj.get("metadata", {}))


def serialize_instance(inst: InstanceFile) -> str:
    obj = {
        "format": FORMAT_VERSION,
        "polygons": [
            {"id": p.id,
             "vertices": [[format_rational(v.x), format_rational(v.y)]
                          for v in p.vertices]}
            for p in inst.polygons
        ],
    }
    if inst.metadata:
        obj["metadata"] = inst.metadata
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def _load_json(data):
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, position=exc.pos) from None


def result_to_packing_file(result, objective: str, params: dict,
                           guarantee=None) -> PackingFile:
    """Flatten any packer result into the on-disk representation."""
    if isinstance(result, MultiBinPacking):
        containers = [{"width": "1", "height": "1"} for _ in result.bins]
        placements = [
            {"id": pl.polygon_id, "dx": format_rational(pl.offset.x),
             "dy": format_rational(pl.offset.y), "container": i}
            for i, b in enumerate(result.bins) for pl in b.placements
        ]
    else:
        containers = [{"width": format_rational(result.width),
                       "height": format_rational(result.height)}]
        placements = [
            {"id": pl.polygon_id, "dx": format_rational(pl.offset.x),
             "dy": format_rational(pl.offset.y), "container": 0}
            for pl in result.placements
        ]
    gdict = None
    if guarantee is not None:
        gdict = {
            "objective": guarantee.objective,
            "achieved": format_rational(guarantee.achieved),
            "lower_bound": format_rational(guarantee.lower_bound),
            "bound_value": format_rational(guarantee.bound_value),
            "ratio": format_rational(guarantee.ratio),
            "passed": guarantee.passed,
        }
    return PackingFile(objective=objective, params=params,
                       containers=containers, placements=placements,
                       guarantee=gdict)


def serialize_packing(pf: PackingFile) -> str:
    obj = {
        "format": FORMAT_VERSION,
        "objective": pf.objective,
        "params": pf.params,
        "containers": pf.containers,
        "placements": pf.placements,
    }
    if pf.guarantee is not None:
        obj["guarantee"] = pf.guarantee
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def parse_packing(data) -> PackingFile:
    obj = _load_json(data)
    for key in ("objective", "containers", "placements"):
        if key not in obj:
            raise ParseError(f"packing file needs {key!r}")
    return PackingFile(
        objective=obj["objective"],
        params=obj.get("params", {}),
        containers=obj["containers"],
        placements=obj["placements"],
        guarantee=obj.get("guarantee"),
    )


def packing_file_to_result(pf: PackingFile):
    """Rebuild a result object (for validation or rendering) from a file."""
    if pf.objective == "bins":
        bins = [[] for _ in pf.containers]
        for pl in pf.placements:
            bins[pl["container"]].append(Placement(
                pl["id"], Vec(parse_rational(pl["dx"]), parse_rational(pl["dy"]))))
        return MultiBinPacking(bins=tuple(
            BinPacking(placements=tuple(group)) for group in bins))
    width = parse_rational(pf.containers[0]["width"])
    height = parse_rational(pf.containers[0]["height"])
    placements = tuple(Placement(
        pl["id"], Vec(parse_rational(pl["dx"]), parse_rational(pl["dy"])))
        for pl in pf.placements)
    if pf.objective == "strip":
        return StripPackingResult(width=width, height=height,
                                  placements=placements)
    return BoxPacking(width=width, height=height, placements=placements)


# -- generators ---------------------------------------------------------------

_GRID = 720


def gen_instance(kind: str, n: int, seed: int, k: Optional[int] = None,
                 M: Optional[int] = None, spine: Optional[Vec] = None) -> InstanceFile:
    """Deterministic instance generator; see GEN_KINDS for the kinds."""
    if kind not in GEN_KINDS:
        raise BadParams(f"unknown kind {kind!r}")
    if n < 1:
        raise BadParams("n must be >= 1")
    rng = random.Random(seed)
    meta = {"generator": {"kind": kind, "n": n, "seed": seed}}

    if kind == "random-convex":
        polys = [_random_convex(rng, f"p{i}") for i in range(n)]
    elif kind == "thin-1overM":
        M = 4 if M is None else M
        if M < 2:
            raise BadParams("M must be >= 2")
        meta["generator"]["M"] = M
        polys = [_scaled_to_width(_random_convex(rng, f"p{i}"), rng, M)
                 for i in range(n)]
    elif kind == "known-bins":
        k = 2 if k is None else k
        if k < 1 or n < 2 * k:
            raise BadParams("known-bins needs k >= 1 and n >= 2k")
        meta["generator"]["k"] = k
        polys, certificate = _gen_known_bins(rng, n, k)
        meta["known_feasible_bins"] = k
        meta["certificate"] = certificate
    else:  # shared-spine
        spine = Vec(rat(1, 5), rat(4, 5)) if spine is None else spine
        k = 2 if k is None else k
        if k < 1 or n < k:
            raise BadParams("shared-spine needs k >= 1 and n >= k")
        if not (rat(3, 4) <= spine.y <= 1) or abs(spine.x) >= 1:
            raise BadParams("spine must have 3/4 <= height <= 1 and |dx| < 1")
        meta["generator"]["k"] = k
        meta["generator"]["spine"] = [format_rational(spine.x),
                                      format_rational(spine.y)]
        polys, certificate = _gen_shared_spine(rng, n, k, spine)
        meta["known_feasible_bins"] = k
        meta["certificate"] = certificate
        meta["spine"] = [format_rational(spine.x), format_rational(spine.y)]

    return InstanceFile(polygons=polys, metadata=meta)


def _angle_cmp(u, v):
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    cr = u[0] * v[1] - u[1] * v[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _chain_deltas(rng, vals):
    lo, hi = vals[0], vals[-1]
    a, b = [lo], [lo]
    for v in vals[1:-1]:
        (a if rng.randrange(2) else b).append(v)
    a.append(hi)
    b.append(hi)
    deltas = [a[i + 1] - a[i] for i in range(len(a) - 1)]
    deltas += [b[i] - b[i + 1] for i in range(len(b) - 1)]
    return deltas


def _random_convex(rng, pid, min_vertices=5, max_vertices=30) -> ConvexPolygon:
    """Random convex polygon on a grid, scaled into the unit square.

    Classic construction: random x and y increments that sum to zero are
    paired, sorted by angle, and walked; the result is convex by
    construction, so only degenerate draws need retrying.
    """
    target = rng.randint(min_vertices, max_vertices)
    while True:
        xs = sorted(rng.randrange(_GRID + 1) for _ in range(target))
        ys = sorted(rng.randrange(_GRID + 1) for _ in range(target))
        dx = _chain_deltas(rng, xs)
        dy = _chain_deltas(rng, ys)
        rng.shuffle(dy)
        vecs = [v for v in zip(dx, dy) if v != (0, 0)]
        if len(vecs) < 3:
            continue
        vecs.sort(key=cmp_to_key(_angle_cmp))
        pts = []
        x = y = 0
        for vx, vy in vecs:
            pts.append((Rational(x, _GRID), Rational(y, _GRID)))
            x += vx
            y += vy
        try:
            poly = canonicalize_polygon(pts, id=pid)
        except PolypackError:
            continue
        return poly.translate(Vec(-poly.min_x, -poly.min_y))


def _scaled_to_width(p: ConvexPolygon, rng, M) -> ConvexPolygon:
    target = Rational(rng.randrange(_GRID // 2, _GRID + 1), _GRID) / M
    factor = target / p.width
    return canonicalize_polygon(
        [Vec(v.x * factor, v.y * factor) for v in p.vertices], id=p.id)


def _split_cell(rng, cell):
    """Cut a convex cell along a chord between interior points of two edges."""
    m = len(cell)
    e1 = rng.randrange(m)
    e2 = (e1 + 1 + rng.randrange(m - 1)) % m
    if e1 > e2:
        e1, e2 = e2, e1

    def interior_point(i):
        t = Rational(rng.randrange(1, 8), 8)
        a, b = cell[i], cell[(i + 1) % m]
        return a + (b - a).scale(t)

    p1 = interior_point(e1)
    p2 = interior_point(e2)
    d = p2 - p1
    left = clip_halfplane(cell, p1, d, keep_left=True)
    right = clip_halfplane(cell, p1, d, keep_left=False)
    if len(left) < 3 or len(right) < 3:
        return None
    if shoelace_doubled(left) == 0 or shoelace_doubled(right) == 0:
        return None
    return left, right


def _gen_known_bins(rng, n, k):
    """Slice k unit bins into n convex cells; the slicing certifies opt <= k.

    The first cut of every bin is vertical within [3/8, 5/8], so no cell is
    wider than 5/8; that keeps the cells inside the preconditions of the
    narrow/short bin packers for delta up to 3/8.
    """
    counts = [n // k + (1 if i < n % k else 0) for i in range(k)]
    polys = []
    certificate = []
    for bin_i in range(k):
        square = [Vec(ZERO, ZERO), Vec(rat(1), ZERO),
                  Vec(rat(1), rat(1)), Vec(ZERO, rat(1))]
        x0 = Rational(rng.randrange(15, 26), 40)  # in [3/8, 5/8]
        d = Vec(ZERO, rat(1))
        anchor = Vec(x0, ZERO)
        # keep cells strictly convex (canonical) so chords never degenerate
        cells = [
            list(canonicalize_polygon(
                clip_halfplane(square, anchor, d, keep_left=side)).vertices)
            for side in (True, False)
        ]
        while len(cells) < counts[bin_i]:
            idx = max(range(len(cells)),
                      key=lambda i: (shoelace_doubled(cells[i]), -i))
            pieces = _split_cell(rng, cells[idx])
            if pieces is None:
                continue
            cells[idx: idx + 1] = [list(canonicalize_polygon(pc).vertices)
                                   for pc in pieces]
        for j, cell in enumerate(cells):
            pid = f"p{len(polys)}"
            polys.append(canonicalize_polygon(cell, id=pid))
            certificate.append({"id": pid, "container": bin_i})
    return polys, certificate


def _gen_shared_spine(rng, n, k, spine):
    """Cells sharing the given spine, tiling a band of height H in k bins.

    Each bin's band [0,1] x [0,H] is cut by lines parallel to the spine; the
    wall pieces are trapezoids and the middle pieces parallelograms, and all
    of them admit the spine (up to translation).  The identity placement is
    the certificate.
    """
    dx = abs(spine.x)
    H = spine.y
    mirrored = spine.x < 0
    counts = [n // k + (1 if i < n % k else 0) for i in range(k)]
    polys = []
    certificate = []
    for bin_i in range(k):
        m = counts[bin_i]
        room = 1 - dx
        grid = max(64, 2 * m)
        cuts = []
        if m > 1:
            picks = sorted(rng.sample(range(1, grid), m - 1))
            cuts = [room * Rational(j, grid) for j in picks]
        xs = [ZERO] + cuts + [None]  # None marks the right wall piece
        for j in range(len(xs) - 1):
            lo = xs[j]
            hi = xs[j + 1]
            if hi is None:
                corners = [Vec(lo, ZERO), Vec(rat(1), ZERO),
                           Vec(rat(1), H), Vec(lo + dx, H)]
            else:
                corners = [Vec(lo, ZERO), Vec(hi, ZERO),
                           Vec(hi + dx, H), Vec(lo + dx, H)]
            if mirrored:
                corners = [Vec(1 - v.x, v.y) for v in corners]
            pid = f"p{len(polys)}"
            polys.append(canonicalize_polygon(corners, id=pid))
            certificate.append({"id": pid, "container": bin_i})
    return polys, certificate
