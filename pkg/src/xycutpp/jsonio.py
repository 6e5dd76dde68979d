"""JSON page documents: parsing with path-qualified errors, and serialization.

Input documents carry ``page_id``, ``page_size`` and ``blocks`` (each with
``bbox`` and ``label``). Ground-truth documents add an integer ``index`` per
block. Block ids are file positions unless every block has an ``id`` field.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import DuplicateIndex, SchemaError
from .model import BBox, Block, Page, clamp_bbox

log = logging.getLogger(__name__)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _num_out(v: float):
    return int(v) if float(v).is_integer() else v


def parse_page(data: Union[bytes, str], source: str = "<input>") -> Page:
    """Parse one page document; errors name the offending JSON path."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("$", f"{source}: not UTF-8 ({exc})") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{source}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "document must be a JSON object")

    page_id = doc.get("page_id")
    if isinstance(page_id, bool) or not isinstance(page_id, (str, int)):
        raise SchemaError("page_id", "must be a string")
    page_id = str(page_id)

    size = doc.get("page_size")
    if not (isinstance(size, list) and len(size) == 2 and all(_is_number(v) and v > 0 for v in size)):
        raise SchemaError("page_size", "must be [width, height] with positive numbers")
    width, height = float(size[0]), float(size[1])

    raw_blocks = doc.get("blocks")
    if not isinstance(raw_blocks, list):
        raise SchemaError("blocks", "must be an array")
    if not raw_blocks:
        raise SchemaError("blocks", "a page needs at least one block")

    has_index = [isinstance(b, dict) and "index" in b for b in raw_blocks]
    has_id = [isinstance(b, dict) and "id" in b for b in raw_blocks]
    if any(has_index) and not all(has_index):
        raise SchemaError(f"blocks[{has_index.index(False)}].index", "index must be given for every block or none")
    if any(has_id) and not all(has_id):
        raise SchemaError(f"blocks[{has_id.index(False)}].id", "id must be given for every block or none")

    blocks = []
    seen_ids = set()
    for k, rb in enumerate(raw_blocks):
        path = f"blocks[{k}]"
        if not isinstance(rb, dict):
            raise SchemaError(path, "block must be an object")
        bbox = rb.get("bbox")
        if not (isinstance(bbox, list) and len(bbox) == 4 and all(_is_number(v) for v in bbox)):
            raise SchemaError(f"{path}.bbox", "must be [x1, y1, x2, y2] of finite numbers")
        if bbox[2] <= bbox[0] or bbox[3] <= bbox[1]:
            raise SchemaError(f"{path}.bbox", f"degenerate box {bbox} (need x2 > x1 and y2 > y1)")
        coords, changed = clamp_bbox(bbox, width, height)
        if changed:
            log.warning("%s: %s.bbox %s clamped to page bounds", page_id, path, bbox)
        try:
            box = BBox(*coords)
        except ValueError as exc:
            raise SchemaError(f"{path}.bbox", f"box lies outside the page ({exc})") from None
        label = rb.get("label")
        if not isinstance(label, str):
            raise SchemaError(f"{path}.label", "must be a string")
        index = None
        if "index" in rb:
            index = rb["index"]
            if isinstance(index, bool) or not isinstance(index, int):
                raise SchemaError(f"{path}.index", "must be an integer")
        bid = rb["id"] if "id" in rb else k
        if isinstance(bid, (list, dict)):
            raise SchemaError(f"{path}.id", "must be a scalar")
        if bid in seen_ids:
            raise SchemaError(f"{path}.id", f"duplicate id {bid!r}")
        seen_ids.add(bid)
        blocks.append(Block(bid, box, label, index))

    if any(has_index):
        indices = [b.gt_index for b in blocks]
        if sorted(indices) != list(range(len(blocks))):
            dup = len(set(indices)) != len(indices)
            what = "duplicate" if dup else "out-of-range"
            raise DuplicateIndex("blocks[*].index", f"{what} indices; expected a permutation of 0..{len(blocks) - 1}")
    return Page(page_id, width, height, blocks)


def load_page(path: Union[str, Path]) -> Page:
    path = Path(path)
    return parse_page(path.read_bytes(), str(path))


def page_to_dict(page: Page, order: Optional[Sequence] = None, with_index: bool = True) -> dict:
    """Serialize a page. ``order`` assigns indices; otherwise stored GT indices are used."""
    if order is not None:
        pos = {bid: i for i, bid in enumerate(order)}
    elif with_index and page.blocks and all(b.gt_index is not None for b in page.blocks):
        pos = {b.id: b.gt_index for b in page.blocks}
    else:
        pos = None
    positional = [b.id for b in page.blocks] == list(range(len(page.blocks)))
    blocks = []
    for b in page.blocks:
        d = {"bbox": [_num_out(v) for v in b.bbox.as_list()], "label": b.label}
        if pos is not None and with_index:
            d["index"] = pos[b.id]
        if not positional:
            d["id"] = b.id
        blocks.append(d)
    return {
        "page_id": page.page_id,
        "page_size": [_num_out(page.width), _num_out(page.height)],
        "blocks": blocks,
    }


def dump_page(page: Page, order: Optional[Sequence] = None, with_index: bool = True) -> str:
    return json.dumps(page_to_dict(page, order, with_index), indent=2) + "\n"
