"""Classic one-dimensional packing rules and shelf algorithms.

The 1D rules place items sequentially: NF only ever considers the most
recently opened bin, FF the earliest opened bin with room, BF the bin with
the least room among those that fit.  The Decreasing variants presort by
non-increasing size.  The 2D shelf rules (NFDH, FFDH, BFDH) sort rectangles
by non-increasing height and place them left to right into horizontal
shelves; a shelf's height is its first (tallest) rectangle's height.

exact_1d_opt is the exact oracle used by tests: a bitmask dynamic program
that fills bins sequentially, minimizing (bins opened, space used in the
current bin) lexicographically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ItemExceedsCapacity, ItemExceedsStrip, TooLarge
from .numbers import Rat, ZERO, rat

_1D_RULES = ("NF", "FF", "BF")
_SHELF_RULES = ("NFDH", "FFDH", "BFDH")


@dataclass(frozen=True, slots=True)
class Item1D:
    size: Rat
    id: str = ""


@dataclass(frozen=True, slots=True)
class RectItem:
    width: Rat
    height: Rat
    id: str = ""


@dataclass
class Bin1D:
    items: list = field(default_factory=list)  # (id, size) in placement order
    used: Rat = ZERO

    def free(self, capacity):
        return capacity - self.used


@dataclass
class Shelf:
    floor: Rat
    height: Rat
    items: list = field(default_factory=list)  # (id, x offset) left to right
    used: Rat = ZERO


@dataclass
class ShelfPacking:
    strip_width: Rat
    shelves: list  # of Shelf, in opening order (bottom to top)
    total_height: Rat


def pack_1d(items, rule="FF", capacity=1, presort=None):
    """Pack Item1D values into bins of the given capacity.

    presort may be None/"none" or "decreasing" (giving NFD/FFD/BFD).
    Returns the list of Bin1D in opening order.
    """
    if rule not in _1D_RULES:
        raise ValueError(f"unknown 1D rule {rule!r}")
    if presort not in (None, "none", "decreasing"):
        raise ValueError(f"unknown presort {presort!r}")
    capacity = rat(capacity)
    seq = [it if isinstance(it, Item1D) else Item1D(rat(it[0]), it[1]) for it in items]
    for it in seq:
        if it.size > capacity:
            raise ItemExceedsCapacity(f"item {it.id!r} of size {it.size} > {capacity}")
        if it.size <= 0:
            raise ItemExceedsCapacity(f"item {it.id!r} has non-positive size")
    if presort == "decreasing":
        seq = sorted(seq, key=lambda it: -it.size)  # stable: ties keep input order

    bins: list[Bin1D] = []
    for it in seq:
        target = None
        if rule == "NF":
            if bins and it.size <= bins[-1].free(capacity):
                target = bins[-1]
        elif rule == "FF":
            for b in bins:
                if it.size <= b.free(capacity):
                    target = b
                    break
        else:  # BF
            best_free = None
            for b in bins:
                f = b.free(capacity)
                if it.size <= f and (best_free is None or f < best_free):
                    best_free = f
                    target = b
        if target is None:
            target = Bin1D()
            bins.append(target)
        target.items.append((it.id, it.size))
        target.used += it.size
    return bins


def pack_rect_shelves(rects, strip_width, rule="FFDH") -> ShelfPacking:
    """Shelf-pack rectangles into a strip of the given width."""
    if rule not in _SHELF_RULES:
        raise ValueError(f"unknown shelf rule {rule!r}")
    strip_width = rat(strip_width)
    seq = [r if isinstance(r, RectItem) else RectItem(rat(r[0]), rat(r[1]), r[2])
           for r in rects]
    for r in seq:
        if r.width > strip_width:
            raise ItemExceedsStrip(f"rect {r.id!r} of width {r.width} > {strip_width}")
        if r.width <= 0 or r.height <= 0:
            raise ItemExceedsStrip(f"rect {r.id!r} has non-positive extent")
    seq = sorted(seq, key=lambda r: -r.height)  # stable

    shelves: list[Shelf] = []
    top = ZERO
    for r in seq:
        target = None
        if rule == "NFDH":
            if shelves and r.width <= strip_width - shelves[-1].used:
                target = shelves[-1]
        elif rule == "FFDH":
            for sh in shelves:
                if r.width <= strip_width - sh.used:
                    target = sh
                    break
        else:  # BFDH
            best_free = None
            for sh in shelves:
                f = strip_width - sh.used
                if r.width <= f and (best_free is None or f < best_free):
                    best_free = f
                    target = sh
        if target is None:
            target = Shelf(floor=top, height=r.height)
            shelves.append(target)
            top += r.height
        target.items.append((r.id, target.used))
        target.used += r.width
    return ShelfPacking(strip_width=strip_width, shelves=shelves, total_height=top)


def exact_1d_opt(sizes, capacity=1) -> int:
    """Exact minimum bin count for up to 20 items.

    Sizes are scaled to integers, then a 2**n dynamic program fills bins
    sequentially; state value is (bins, used in the open bin), minimized
    lexicographically.
    """
    capacity = rat(capacity)
    ss = [rat(s) for s in sizes]
    n = len(ss)
    if n == 0:
        return 0
    if n > 20:
        raise TooLarge(f"{n} items; exact search capped at 20")
    for s in ss:
        if s > capacity or s <= 0:
            raise ItemExceedsCapacity(f"size {s} invalid for capacity {capacity}")

    scale = math.lcm(int(capacity.denominator), *(int(s.denominator) for s in ss))
    cap = int(capacity * scale)
    isizes = [int(s * scale) for s in ss]

    inf = (n + 1, 0)
    dp = [inf] * (1 << n)
    dp[0] = (0, cap)  # zero bins, but treat the "open bin" as full
    for mask in range(1 << n):
        bins, used = dp[mask]
        if bins > n:
            continue
        free = cap - used
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            s = isizes[i]
            if s <= free:
                cand = (bins, used + s)
            else:
                cand = (bins + 1, s)
            idx = mask | bit
            if cand < dp[idx]:
                dp[idx] = cand
    return dp[(1 << n) - 1][0]
