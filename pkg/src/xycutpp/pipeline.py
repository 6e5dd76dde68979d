"""Ordering engines: the XY-Cut baseline, the ablation ladder and the full pipeline."""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cmm import match_all
from .mgs import Orientation, mgs_order
from .model import Block, OrderResult, Page, Params, overlap_length, reading_key
from .premask import build_premask
from .projection import xycut_baseline, xycut_order


def naive_remap(backbone: Sequence[Block], masked: Sequence[Block]) -> List[Block]:
    """Re-insert masked blocks by position alone, without any matching.

    A masked block goes right after the closest block above it that shares
    some horizontal extent; with no such block it goes before the first
    block whose top edge lies below its own. Used by the ablation engines.
    """
    out = list(backbone)
    for m in sorted(masked, key=reading_key):
        mb = m.bbox
        above = [
            (b.bbox.y2, i) for i, b in enumerate(out)
            if b.bbox.y2 <= mb.y1 and overlap_length(b.bbox.span("x"), mb.span("x")) > 0
        ]
        if above:
            pos = max(above)[1] + 1
        else:
            pos = next((i for i, b in enumerate(out) if b.bbox.y1 > mb.y1), len(out))
        out.insert(pos, m)
    return out


def order_premask(page: Page, params: Params = Params(), orientation=None) -> OrderResult:
    part = build_premask(page, params.taxonomy)
    core = xycut_order(part.core, params.min_gap)
    return OrderResult(page.page_id, [b.id for b in naive_remap(core, part.masked)])


def order_premask_mgs(page: Page, params: Params = Params(), orientation=None) -> OrderResult:
    part = build_premask(page, params.taxonomy)
    res = mgs_order(page, part, params, orientation)
    by_id = {b.id: b for b in page.blocks}
    backbone = [by_id[r.block_id] for r in res.backbone]
    merged = naive_remap(backbone, [b for b, _ in res.masked])
    return OrderResult(page.page_id, [b.id for b in merged])


def order_xycutpp(page: Page, params: Params = Params(),
                  orientation: Optional[Orientation] = None) -> OrderResult:
    part = build_premask(page, params.taxonomy)
    res = mgs_order(page, part, params, orientation)
    by_id = {b.id: b for b in page.blocks}
    backbone = [by_id[r.block_id] for r in res.backbone]
    matched = match_all(backbone, res.masked, page.width, page.height, params, res.orientation)
    return OrderResult(page.page_id, matched.order)


def _baseline(page: Page, params: Params = Params(), orientation=None) -> OrderResult:
    return xycut_baseline(page, params)


ENGINES: Dict[str, Callable[..., OrderResult]] = {
    "baseline": _baseline,
    "premask": order_premask,
    "premask+mgs": order_premask_mgs,
    "xycut++": order_xycutpp,
}

# the progressive component ladder, weakest first
ABLATION_LADDER: Tuple[str, ...] = ("baseline", "premask", "premask+mgs", "xycut++")


def order_page(page: Page, engine: str = "xycut++", params: Params = Params(),
               orientation: Optional[Orientation] = None) -> OrderResult:
    try:
        fn = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {sorted(ENGINES)}") from None
    return fn(page, params, orientation)
