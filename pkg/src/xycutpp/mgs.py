"""Multi-granularity segmentation: cross-layout detection, geometric
pre-segmentation and density-driven adaptive cutting.

Produces the pre-ordered backbone of atomic regions plus the set of blocks
held out of segmentation (the mask set) for later re-insertion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import EmptyRegion
from .model import (
    AtomicRegion,
    BBox,
    Block,
    Page,
    Params,
    SemanticClass,
    aspect_ratio,
    box_distance,
    classify,
    median,
    overlap_length,
    reading_key,
)
from .premask import MaskPartition
from .projection import X, Y, gap_cuts, split_blocks


class Orientation(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    @property
    def reading_axis(self) -> str:
        # axis along which text lines run
        return X if self is Orientation.HORIZONTAL else Y


@dataclass(frozen=True)
class Region:
    bbox: BBox
    members: Tuple[Block, ...]
    cross_members: Tuple[Block, ...] = ()


@dataclass(frozen=True)
class MGSResult:
    backbone: Tuple[AtomicRegion, ...]
    masked: Tuple[Tuple[Block, SemanticClass], ...]
    orientation: Orientation
    regions: Tuple[Region, ...]
    cross_ids: frozenset
    anchor_ids: frozenset


def infer_orientation(page: Page, params: Params = Params()) -> Orientation:
    ratios = [
        aspect_ratio(b.bbox)
        for b in page.blocks
        if classify(b.label, b.bbox, params.taxonomy) is SemanticClass.OTHER
    ]
    if not ratios or median(ratios) >= 1:
        return Orientation.HORIZONTAL
    return Orientation.VERTICAL


def _length(b: Block, orientation: Orientation) -> float:
    return b.bbox.width if orientation is Orientation.HORIZONTAL else b.bbox.height


def length_threshold(blocks: Sequence[Block], orientation: Orientation, beta: float = 1.3) -> float:
    if not blocks:
        raise EmptyRegion("length threshold needs at least one block")
    return beta * median([_length(b, orientation) for b in blocks])


def detect_cross_layout(blocks: Sequence[Block], t_l: float, orientation: Orientation) -> Set:
    axis = orientation.reading_axis
    spans = [b.bbox.span(axis) for b in blocks]
    out = set()
    for i, b in enumerate(blocks):
        if _length(b, orientation) <= t_l:
            continue
        hits = sum(
            1 for j, s in enumerate(spans) if j != i and overlap_length(spans[i], s) > 0
        )
        if hits >= 2:
            out.add(b.id)
    return out


def is_isolated_center(b: Block, page: Page, text_blocks: Sequence[Block], eps_adj: float,
                       params: Params = Params()) -> bool:
    """The pre-segmentation anchor test: near the page centre and far from text."""
    cx, cy = b.bbox.cx, b.bbox.cy
    d_page = page.width if aspect_ratio(b.bbox) < params.ratio_pivot else page.height
    if math.hypot(cx - page.width / 2, cy - page.height / 2) / d_page > params.center_bound:
        return False
    return all(box_distance(b.bbox, t.bbox) > eps_adj for t in text_blocks if t.id != b.id)


def adjacency_epsilon(text_blocks: Sequence[Block], mult: float) -> float:
    # block heights stand in for line height; no glyph data is available
    if not text_blocks:
        return 0.0
    return mult * median([t.bbox.height for t in text_blocks])


def _accepted_lines(lines, singles: Sequence[Block], axis: str, lo: float, hi: float) -> List[float]:
    keep = set()
    for v in lines:
        if not lo < v < hi:
            continue
        if any(s.bbox.span(axis)[0] < v < s.bbox.span(axis)[1] for s in singles):
            continue
        keep.add(v)
    return sorted(keep)


def pre_segment(page: Page, core_blocks: Sequence[Block], candidates: Sequence[Block] = (),
                text_blocks: Sequence[Block] = (), cross_blocks: Sequence[Block] = (),
                orientation: Orientation = Orientation.HORIZONTAL,
                params: Params = Params()) -> Tuple[List[Region], List[Block]]:
    """Split the page into non-overlapping regions ordered in reading order.

    ``candidates`` are the titles and visual blocks tested as anchors;
    ``cross_blocks`` additionally contribute cut lines (horizontal for
    horizontal documents, vertical otherwise). A cut line is only used where
    it does not pass through a core block.
    """
    eps = adjacency_epsilon(text_blocks, params.eps_adj_mult)
    anchors = [b for b in candidates if is_isolated_center(b, page, text_blocks, eps, params)]

    y_lines = [v for a in anchors for v in (a.bbox.y1, a.bbox.y2)]
    x_lines: List[float] = []
    for c in cross_blocks:
        if orientation is Orientation.HORIZONTAL:
            y_lines += [c.bbox.y1, c.bbox.y2]
        else:
            x_lines += [c.bbox.x1, c.bbox.x2]

    ys = [0.0] + _accepted_lines(y_lines, core_blocks, Y, 0.0, page.height) + [page.height]
    regions: List[Region] = []
    for y_lo, y_hi in zip(ys, ys[1:]):
        band = [b for b in core_blocks if y_lo <= b.bbox.cy < y_hi
                or (y_hi == page.height and b.bbox.cy == y_hi)]
        if not band:
            continue
        xs = [0.0] + _accepted_lines(x_lines, band, X, 0.0, page.width) + [page.width]
        cells = list(zip(xs, xs[1:]))
        if orientation is Orientation.VERTICAL:
            cells.reverse()
        for x_lo, x_hi in cells:
            members = tuple(b for b in band if x_lo <= b.bbox.cx <= x_hi)
            if not members:
                continue
            band = [b for b in band if b not in members]
            rect = BBox(x_lo, y_lo, x_hi, y_hi)
            cross = tuple(c for c in cross_blocks
                          if x_lo <= c.bbox.cx <= x_hi and y_lo <= c.bbox.cy <= y_hi)
            regions.append(Region(rect, members, cross))
    return regions, anchors


def density(cross: Sequence[Block], singles: Sequence[Block]) -> float:
    single_area = sum(b.bbox.area for b in singles)
    if single_area == 0:
        return math.inf
    return sum(b.bbox.area for b in cross) / single_area


def _adaptive(members: List[Block], cross: List[Block], params: Params,
              orientation: Orientation, out: List[Block]) -> None:
    if len(members) <= 1:
        out.extend(members)
        return
    tau = density(cross, members)
    axes = (Y, X) if tau > params.theta_v else (X, Y)
    for axis in axes:
        cuts = gap_cuts(members, axis, params.min_gap)
        if not cuts:
            continue
        slabs = split_blocks(members, cuts, axis)
        cross_slabs = split_blocks(cross, cuts, axis)
        pairs = list(zip(slabs, cross_slabs))
        if axis == X and orientation is Orientation.VERTICAL:
            pairs.reverse()
        for slab, cslab in pairs:
            _adaptive(slab, cslab, params, orientation, out)
        return
    out.extend(sorted(members, key=reading_key))


def adaptive_cut(region: Region, params: Params = Params(),
                 orientation: Orientation = Orientation.HORIZONTAL,
                 start_index: int = 0) -> List[AtomicRegion]:
    ordered: List[Block] = []
    _adaptive(sorted(region.members, key=reading_key), list(region.cross_members),
              params, orientation, ordered)
    return [
        AtomicRegion(b.bbox, False, b.label, start_index + i, b.id)
        for i, b in enumerate(ordered)
    ]


def mgs_order(page: Page, partition: MaskPartition, params: Params = Params(),
              orientation: Optional[Orientation] = None) -> MGSResult:
    if orientation is None:
        orientation = infer_orientation(page, params)
    classes: Dict = {b.id: classify(b.label, b.bbox, params.taxonomy) for b in page.blocks}
    core = list(partition.core)

    cross_ids: Set = set()
    if page.blocks:
        t_l = length_threshold(core or page.blocks, orientation, params.beta)
        cross_ids = detect_cross_layout(page.blocks, t_l, orientation)
    cross = [b for b in page.blocks if b.id in cross_ids]
    singles = [b for b in core if b.id not in cross_ids]

    regions, anchors = pre_segment(
        page, singles,
        candidates=list(partition.masked),
        text_blocks=core,
        cross_blocks=cross,
        orientation=orientation,
        params=params,
    )
    backbone: List[AtomicRegion] = []
    for region in regions:
        backbone.extend(adaptive_cut(region, params, orientation, len(backbone)))

    masked = []
    for b in sorted(page.blocks, key=reading_key):
        if b.id in cross_ids:
            masked.append((b, SemanticClass.CROSS_LAYOUT))
        elif classes[b.id] is not SemanticClass.OTHER:
            masked.append((b, classes[b.id]))
    return MGSResult(
        tuple(backbone), tuple(masked), orientation, tuple(regions),
        frozenset(cross_ids), frozenset(a.id for a in anchors),
    )
