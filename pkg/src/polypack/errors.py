"""Exception hierarchy shared by all polypack modules."""


class PolypackError(Exception):
    """Base class for all errors raised by this package."""


# -- geometry kernel ---------------------------------------------------------

class NonConvex(PolypackError):
    """Vertex list does not describe a convex polygon."""


class DegenerateZeroArea(PolypackError):
    """Vertex list encloses zero area (collinear or too few points)."""


class ZeroWidthOrHeight(PolypackError):
    """Polygon has a zero horizontal or vertical extent."""


class OutOfVerticalRange(PolypackError):
    """Horizontal chord requested outside the polygon's y-range."""


class Unbounded(PolypackError):
    """Sliding motion meets no obstacle and no wall."""


# -- shelf engines -----------------------------------------------------------

class ItemExceedsCapacity(PolypackError):
    """A 1D item is larger than the bin capacity."""


class ItemExceedsStrip(PolypackError):
    """A rectangle is wider than the strip."""


class TooLarge(PolypackError):
    """Instance too big for the exact optimizer."""


# -- packers -----------------------------------------------------------------

class EmptyInstance(PolypackError):
    """Packer requires at least one polygon."""


class NotAParallelogram(PolypackError):
    """Input polygon is not an x-parallelogram."""


class ItemTooWide(PolypackError):
    """Polygon wider than the strip."""


class WidthExceedsOneOverM(PolypackError):
    """Thin bin packing requires every width <= 1/M."""


class PreconditionViolated(PolypackError):
    """Instance does not satisfy a packer's entry condition."""


class SpineMismatch(PolypackError):
    """Polygon has no spine matching the required template."""


class HeightBelowThreshold(PolypackError):
    """Shared-spine packing requires spine height >= 3/4."""


class SpineNotInSet(PolypackError):
    """Polygon matches none of the provided spine templates."""


class GuaranteeViolation(PolypackError):
    """A provable bound failed at runtime; this indicates a bug, never bad input."""


# -- verify / io -------------------------------------------------------------

class UnknownPackerTag(PolypackError):
    """Result metadata does not identify a known packer."""


class ParseError(PolypackError):
    """Malformed instance or packing file."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class InvalidPolygon(PolypackError):
    """A polygon entry in a file failed kernel validation."""

    def __init__(self, polygon_id, cause):
        super().__init__(f"polygon {polygon_id!r}: {cause}")
        self.polygon_id = polygon_id
        self.cause = cause


class BadParams(PolypackError):
    """Invalid generator or packer parameters."""
