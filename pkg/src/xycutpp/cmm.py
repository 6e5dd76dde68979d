"""Cross-modal matching: restore masked blocks into the ordered backbone.

Masked blocks are processed class by class in descending label priority.
Each pending block is paired with the anchor in the target sequence that
minimises a four-term weighted geometric distance, then the sequence is
re-sorted by (anchor position, side, label priority, y1, x1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .model import BBox, Block, Params, SemanticClass, interval_iou, overlap_length, reading_key
from .mgs import Orientation

DEFAULT_EDGE_TABLE: Mapping[str, Tuple[float, float, float, float]] = {
    "title_horizontal": (1.0, 0.1, 0.1, 1.0),
    "title_vertical": (0.2, 0.1, 1.0, 1.0),
    "cross_layout": (1.0, 1.0, 0.1, 1.0),
    "other": (1.0, 1.0, 1.0, 0.1),
}

# restoration passes, highest priority first; both title orientations share a pass
CLASS_PASSES = (
    (SemanticClass.CROSS_LAYOUT,),
    (SemanticClass.TITLE_HORIZONTAL, SemanticClass.TITLE_VERTICAL),
    (SemanticClass.VISION,),
    (SemanticClass.OTHER,),
)

BEFORE, SELF, AFTER = 0, 1, 2


def dynamic_weights(width: float, height: float) -> Tuple[float, float, float, float]:
    m = max(width, height)
    return (m * m, m, 1.0, 1.0 / m)


def edge_weights(cls: SemanticClass, table: Optional[Mapping] = None) -> Tuple[float, ...]:
    table = table or DEFAULT_EDGE_TABLE
    if cls.is_title or cls is SemanticClass.CROSS_LAYOUT:
        return tuple(table[cls.value])
    return tuple(table["other"])


def direction(b: BBox) -> str:
    return "h" if b.width >= b.height else "v"


def phi(p: BBox, o: BBox, cls: SemanticClass, tau_overlap: float = 0.3) -> Tuple[float, float, float, float]:
    """The four geometric constraint terms for pending box ``p`` and anchor ``o``."""
    dir_p = direction(p)
    if dir_p != direction(o):
        phi1 = 1.0
    else:
        axis = "x" if dir_p == "h" else "y"
        phi1 = 1.0 if interval_iou(p.span(axis), o.span(axis)) < tau_overlap else 0.0

    dx, dy = abs(p.cx - o.cx), abs(p.cy - o.cy)
    ox = overlap_length(p.span("x"), o.span("x")) > 0
    oy = overlap_length(p.span("y"), o.span("y")) > 0
    if ox and oy:
        phi2 = min(dx, dy)
    elif ox:
        phi2 = dy
    elif oy:
        phi2 = dx
    else:
        phi2 = dx + dy

    if cls is SemanticClass.CROSS_LAYOUT and p.y1 > o.y2:
        phi3 = -o.y2
    else:
        phi3 = o.y1
    return (phi1, phi2, phi3, o.x1)


def distance(p: BBox, o: BBox, cls: SemanticClass, width: float, height: float,
             params: Params = Params()) -> float:
    w = dynamic_weights(width, height)
    e = edge_weights(cls, params.edge_table)
    f = phi(p, o, cls, params.tau_overlap)
    return sum(w[k] * e[k] * f[k] for k in range(4))


def precedes(p: BBox, o: BBox, orientation: Orientation) -> bool:
    """Whether ``p`` is read before ``o`` judging by their relative placement."""
    ox = overlap_length(p.span("x"), o.span("x")) > 0
    oy = overlap_length(p.span("y"), o.span("y")) > 0
    if orientation is Orientation.HORIZONTAL:
        if oy and not ox:
            return (p.cx, p.cy) < (o.cx, o.cy)
        return (p.cy, p.cx) < (o.cy, o.cx)
    if ox and not oy:
        return (p.cy, -p.cx) < (o.cy, -o.cx)
    return (-p.cx, p.cy) < (-o.cx, o.cy)


def _fully_before(e: BBox, p: BBox, orientation: Orientation) -> bool:
    # e is read earlier than p: above it in the same stack, or in an earlier
    # stack (left for horizontal text; for vertical text, right and above)
    if orientation is Orientation.HORIZONTAL:
        return e.x2 <= p.x1 or (e.cy <= p.y1 and overlap_length(e.span("x"), p.span("x")) > 0)
    return e.y2 <= p.y1 or (e.cx >= p.x2 and overlap_length(e.span("y"), p.span("y")) > 0)


def _fully_after(e: BBox, p: BBox, orientation: Orientation) -> bool:
    if orientation is Orientation.HORIZONTAL:
        return e.x1 >= p.x2 or (e.cy >= p.y2 and overlap_length(e.span("x"), p.span("x")) > 0)
    return e.y1 >= p.y2 or (e.cx <= p.x1 and overlap_length(e.span("y"), p.span("y")) > 0)


@dataclass(frozen=True)
class Entry:
    block: Block
    cls: SemanticClass
    anchor: bool
    anchor_pos: int = -1
    side: int = SELF
    distance: float = 0.0

    def sort_key(self, own_pos: int = -1, orientation: Orientation = Orientation.HORIZONTAL):
        if self.side == SELF:
            return (own_pos, SELF, 0, 0.0, 0.0)
        bb = self.block.bbox
        if orientation is Orientation.VERTICAL:
            # rotated frame: right-most first, then top-most
            return (self.anchor_pos, self.side, -self.cls.priority, -bb.x2, bb.y1)
        return (self.anchor_pos, self.side, -self.cls.priority, bb.y1, bb.x1)


@dataclass(frozen=True)
class MatchPair:
    pending: Block
    anchor: Block
    nearest: Block
    distance: float
    side: int


@dataclass(frozen=True)
class MatchResult:
    order: Tuple
    entries: Tuple[Entry, ...]
    pairs: Tuple[MatchPair, ...]
    unmatched: Tuple[Block, ...]


def best_anchor(p: Block, cls: SemanticClass, candidates: Sequence[Entry], width: float,
                height: float, params: Params = Params()) -> Tuple[Optional[int], float]:
    """Index of the minimum-distance candidate, with per-term early exit."""
    w = dynamic_weights(width, height)
    e = edge_weights(cls, params.edge_table)
    scale = [w[k] * e[k] for k in range(4)]
    d_min, best = math.inf, None
    for idx, cand in enumerate(candidates):
        f = phi(p.bbox, cand.block.bbox, cls, params.tau_overlap)
        d = 0.0
        for k in range(4):
            d += scale[k] * f[k]
            if params.early_termination and d > d_min:
                break
        if d < d_min:
            d_min, best = d, idx
    return best, d_min


def _refine(pos: int, side: int, p: BBox, snapshot: Sequence[Entry], orientation: Orientation) -> int:
    # slide the insertion slot past neighbours that clearly sit on the same side of p
    if side == AFTER:
        while pos + 1 < len(snapshot) and _fully_before(snapshot[pos + 1].block.bbox, p, orientation):
            pos += 1
    else:
        while pos - 1 >= 0 and _fully_after(snapshot[pos - 1].block.bbox, p, orientation):
            pos -= 1
    return pos


def semantic_filter_pass(snapshot: Sequence[Entry], pending: Iterable[Tuple[Block, SemanticClass]],
                         width: float, height: float, params: Params = Params(),
                         orientation: Orientation = Orientation.HORIZONTAL):
    """Match every pending block of one priority class against ``snapshot``.

    Returns (new entries, pairs, deferred blocks). Blocks for which no anchor
    of strictly higher priority (or backbone anchor) exists are deferred.
    """
    new: List[Entry] = []
    pairs: List[MatchPair] = []
    deferred: List[Block] = []
    for b, cls in pending:
        if not any(e.anchor or e.cls.priority > cls.priority for e in snapshot):
            deferred.append(b)
            continue
        idx, d = best_anchor(b, cls, snapshot, width, height, params)
        if idx is None:
            deferred.append(b)
            continue
        side = BEFORE if precedes(b.bbox, snapshot[idx].block.bbox, orientation) else AFTER
        pos = _refine(idx, side, b.bbox, snapshot, orientation)
        new.append(Entry(b, cls, False, pos, side, d))
        pairs.append(MatchPair(b, snapshot[pos].block, snapshot[idx].block, d, side))
    return new, pairs, deferred


def _sorted_target(snapshot: Sequence[Entry], new: Sequence[Entry],
                   orientation: Orientation = Orientation.HORIZONTAL) -> List[Entry]:
    keyed = [(e.sort_key(i), i, e) for i, e in enumerate(snapshot)]
    keyed += [(e.sort_key(orientation=orientation), len(snapshot) + j, e) for j, e in enumerate(new)]
    keyed.sort(key=lambda t: (t[0], t[1]))
    out = []
    for _, _, e in keyed:
        # previously placed entries become fixed members of the sequence
        out.append(e if e.side == SELF else Entry(e.block, e.cls, e.anchor, -1, SELF, e.distance))
    return out


def _fallback_key(b: Block, orientation: Orientation):
    if orientation is Orientation.VERTICAL:
        bb = b.bbox
        return (-bb.x2, bb.y1, -bb.x1, bb.y2, b.label)
    return reading_key(b)


def match_all(backbone: Sequence[Block], masked: Sequence[Tuple[Block, SemanticClass]],
              width: float, height: float, params: Params = Params(),
              orientation: Orientation = Orientation.HORIZONTAL) -> MatchResult:
    target = [Entry(b, SemanticClass.OTHER, True) for b in backbone]
    remaining = sorted(masked, key=lambda bc: _fallback_key(bc[0], orientation))

    if not target and remaining:
        top = max(cls.priority for _, cls in remaining)
        seeds = [bc for bc in remaining if bc[1].priority == top]
        target = [Entry(b, cls, True) for b, cls in seeds]
        remaining = [bc for bc in remaining if bc[1].priority != top]

    all_pairs: List[MatchPair] = []
    unmatched: List[Block] = []
    for group in CLASS_PASSES:
        pending = [bc for bc in remaining if bc[1] in group]
        if not pending:
            continue
        new, pairs, deferred = semantic_filter_pass(target, pending, width, height, params, orientation)
        target = _sorted_target(target, new, orientation)
        all_pairs.extend(pairs)
        unmatched.extend(deferred)

    unmatched.sort(key=lambda b: _fallback_key(b, orientation))
    order = [e.block.id for e in target] + [b.id for b in unmatched]
    return MatchResult(tuple(order), tuple(target), tuple(all_pairs), tuple(unmatched))

