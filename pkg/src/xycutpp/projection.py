"""Projection profiles and the classic recursive XY-Cut ordering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import EmptyRegion
from .model import Block, OrderResult, Page, Params, overlap_length, reading_key

X = "x"
Y = "y"


@dataclass(frozen=True)
class ProjectionProfile:
    axis: str
    intervals: Tuple[Tuple[float, float, int], ...]

    @property
    def extent(self) -> Tuple[float, float]:
        return self.intervals[0][0], self.intervals[-1][1]


def project(blocks: Sequence[Block], axis: str) -> ProjectionProfile:
    """Exact coverage profile of the blocks' projections onto ``axis``.

    Event sweep over box edges. Adjacent intervals with equal coverage are
    merged, so every zero-coverage interval in the result is maximal.
    """
    if not blocks:
        raise EmptyRegion("cannot project an empty block set")
    delta = {}
    for b in blocks:
        lo, hi = b.bbox.span(axis)
        delta[lo] = delta.get(lo, 0) + 1
        delta[hi] = delta.get(hi, 0) - 1
    coords = sorted(delta)
    intervals: List[Tuple[float, float, int]] = []
    count = 0
    for lo, hi in zip(coords, coords[1:]):
        count += delta[lo]
        if intervals and intervals[-1][2] == count:
            intervals[-1] = (intervals[-1][0], hi, count)
        else:
            intervals.append((lo, hi, count))
    return ProjectionProfile(axis, tuple(intervals))


def find_gaps(profile: ProjectionProfile, min_gap: float = 1.0) -> List[Tuple[float, float]]:
    # the extent is bounded by block edges, so no zero interval is a margin
    return [(lo, hi) for lo, hi, c in profile.intervals if c == 0 and hi - lo >= min_gap]


def split_blocks(blocks: Sequence[Block], cuts: Sequence[float], axis: str) -> List[List[Block]]:
    """Partition blocks into ``len(cuts) + 1`` slabs separated by cut lines.

    A block straddling a cut goes to the slab holding the larger share of its
    extent; ties go to the earlier slab.
    """
    cuts = sorted(cuts)
    bounds = [float("-inf")] + list(cuts) + [float("inf")]
    slabs: List[List[Block]] = [[] for _ in range(len(cuts) + 1)]
    for b in blocks:
        span = b.bbox.span(axis)
        best, best_share = 0, -1.0
        for i in range(len(slabs)):
            share = overlap_length(span, (bounds[i], bounds[i + 1]))
            if share > best_share:
                best, best_share = i, share
        slabs[best].append(b)
    return slabs


def gap_cuts(blocks: Sequence[Block], axis: str, min_gap: float) -> List[float]:
    return [(lo + hi) / 2 for lo, hi in find_gaps(project(blocks, axis), min_gap)]


def _xycut(blocks: List[Block], min_gap: float) -> List[Block]:
    if len(blocks) <= 1:
        return list(blocks)
    for axis in (Y, X):
        cuts = gap_cuts(blocks, axis, min_gap)
        if cuts:
            out: List[Block] = []
            for slab in split_blocks(blocks, cuts, axis):
                out.extend(_xycut(slab, min_gap))
            return out
    return sorted(blocks, key=reading_key)


def xycut_order(blocks: Sequence[Block], min_gap: float = 1.0) -> List[Block]:
    """Recursive XY-Cut over an arbitrary block list (horizontal cuts first)."""
    return _xycut(sorted(blocks, key=reading_key), min_gap)


def xycut_baseline(page: Page, params: Params = Params()) -> OrderResult:
    return OrderResult(page.page_id, [b.id for b in xycut_order(page.blocks, params.min_gap)])
