"""polypack: packing convex polygons under translation.

An exact rational geometry kernel, the classic shelf engines, approximation
packers for area, perimeter, square, strip and unit-bin objectives, and a
validator plus guarantee reporter that check every produced packing against
its provable bound.
"""

from .numbers import Rational, rat, parse_rational, format_rational, sqrt_under
from .geometry import (
    BinWalls,
    ConvexPolygon,
    Point,
    Spine,
    Vec,
    apply_congruence,
    canonicalize_polygon,
    chord_width,
    contact_offset,
    convex_hull,
    eta,
    eta_split,
    extents,
    interiors_overlap,
    mirror_x,
    rotate90,
    rotate270,
    spine_of,
    vec,
)
from .parallelogram import (
    TiltClass,
    XParallelogram,
    angle_sort_key,
    bounding_xpar,
    tilt_of,
    xpar_of_polygon,
)
from .shelves import (
    Bin1D,
    Item1D,
    RectItem,
    Shelf,
    ShelfPacking,
    exact_1d_opt,
    pack_1d,
    pack_rect_shelves,
)
from .packing import (
    BinPacking,
    BoxPacking,
    MultiBinPacking,
    PackParams,
    Placement,
    StripPackingResult,
)
from .area_min import pack_area_min, pack_area_min_xpar
from .boxpack import pack_min_square, pack_perimeter_min
from .strip import pack_strip, split_shelf
from .binpack import (
    matching_spine,
    pack_bins_shared_spine,
    pack_bins_spine_set,
    pack_bins_thin,
    pack_bins_wideshort,
)
from .verify import (
    GuaranteeReport,
    ValidationResult,
    Violation,
    guarantee_report,
    lower_bound,
    validate_packing,
)
from .instances import (
    InstanceFile,
    PackingFile,
    gen_instance,
    parse_instance,
    parse_packing,
    packing_file_to_result,
    result_to_packing_file,
    serialize_instance,
    serialize_packing,
)
from .render import render_svg
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
