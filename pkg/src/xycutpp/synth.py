"""Deterministic synthetic page layouts with constructive ground-truth order.

Each generator lays blocks out on a fixed 1000 x 1414 canvas and records the
order in which they were emitted as the ground truth. Gaps along every
intended cut are kept at or above ``2 * MIN_GAP`` so projection cuts never
depend on the gap threshold.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import InfeasibleLayout
from .jsonio import dump_page
from .model import BBox, Block, OrderResult, Page

PAGE_W, PAGE_H = 1000.0, 1414.0
MARGIN = 60.0
MIN_GAP = 1.0
MIN_H = 8.0  # smallest block height a layout may shrink to


class LayoutClass(enum.Enum):
    SINGLE_COLUMN = "SingleColumn"
    DOUBLE_COLUMN = "DoubleColumn"
    MULTI_COLUMN = "MultiColumn3Plus"
    SPANNING_HEADER = "SpanningHeader"
    L_SHAPE = "LShape"
    CENTERED_TITLE = "CenteredTitlePage"
    VERTICAL = "VerticalDoc"

    @property
    def split(self) -> str:
        return "regular" if self in (LayoutClass.SINGLE_COLUMN, LayoutClass.DOUBLE_COLUMN) else "complex"


# minimum block count each class needs to express its structure
MIN_BLOCKS = {
    LayoutClass.SINGLE_COLUMN: 1,
    LayoutClass.DOUBLE_COLUMN: 2,
    LayoutClass.MULTI_COLUMN: 3,
    LayoutClass.SPANNING_HEADER: 3,
    LayoutClass.L_SHAPE: 3,
    LayoutClass.CENTERED_TITLE: 5,
    LayoutClass.VERTICAL: 1,
}

# block-count range used when a corpus does not fix n
DEFAULT_N_RANGE = {
    LayoutClass.SINGLE_COLUMN: (4, 12),
    LayoutClass.DOUBLE_COLUMN: (6, 20),
    LayoutClass.MULTI_COLUMN: (9, 30),
    LayoutClass.SPANNING_HEADER: (8, 24),
    LayoutClass.L_SHAPE: (3, 8),
    LayoutClass.CENTERED_TITLE: (8, 20),
    LayoutClass.VERTICAL: (3, 10),
}


@dataclass
class _Item:
    """A block awaiting vertical placement inside a column."""
    label: str
    h: float
    width_frac: float = 1.0


@dataclass(frozen=True)
class Placed:
    bbox: BBox
    label: str


def _gap(rng: random.Random) -> float:
    return rng.uniform(12.0, 30.0)


def _text_items(rng: random.Random, n: int, lo: float = 40.0, hi: float = 200.0) -> List[_Item]:
    return [_Item("text", rng.uniform(lo, hi), rng.uniform(0.9, 1.0)) for _ in range(n)]


def _column_items(rng: random.Random, n: int, col_w: float, rich: bool,
                  lo: float = 40.0, hi: float = 200.0) -> List[_Item]:
    """Column content in reading order; ``rich`` mixes in titles and figure/caption pairs."""
    items: List[_Item] = []
    while len(items) < n:
        left = n - len(items)
        r = rng.random()
        if rich and left >= 2 and r < 0.2:
            items.append(_Item("title", rng.uniform(22.0, 34.0), rng.uniform(0.45, 0.9)))
            items.append(_Item("text", rng.uniform(lo, hi), rng.uniform(0.9, 1.0)))
        elif rich and left >= 2 and r < 0.32:
            wf = rng.uniform(0.7, 1.0)
            items.append(_Item("figure", col_w * wf * rng.uniform(0.4, 0.75), wf))
            items.append(_Item("text", rng.uniform(20.0, 40.0), rng.uniform(0.5, 0.9)))
        else:
            items.append(_Item("text", rng.uniform(lo, hi), rng.uniform(0.9, 1.0)))
    return items


def _fit_scale(columns: Sequence[Sequence[_Item]], gap: float, avail: float) -> float:
    """Uniform height scale (<= 1) so every column fits into ``avail``."""
    scale = 1.0
    for col in columns:
        if not col:
            continue
        room = avail - gap * (len(col) - 1)
        if room < MIN_H * len(col):
            raise InfeasibleLayout(f"{len(col)} blocks do not fit into {avail:.0f} units")
        scale = min(scale, room / sum(it.h for it in col))
    if any(it.h * scale < MIN_H for col in columns for it in col):
        raise InfeasibleLayout("blocks would shrink below the minimum height")
    return scale


def _column_bounds(k: int, x_lo: float, x_hi: float, gutter: float) -> List[Tuple[float, float]]:
    w = (x_hi - x_lo - gutter * (k - 1)) / k
    return [(x_lo + i * (w + gutter), x_lo + i * (w + gutter) + w) for i in range(k)]


def _stack(col: Sequence[_Item], x1: float, x2: float, y: float, gap: float, scale: float) -> List[Placed]:
    out = []
    for it in col:
        h = it.h * scale
        out.append(Placed(BBox(x1, y, x1 + (x2 - x1) * it.width_frac, y + h), it.label))
        y += h + gap
    return out


def _split_counts(rng: random.Random, n: int, k: int) -> List[int]:
    base = [n // k] * k
    for i in rng.sample(range(k), n % k):
        base[i] += 1
    return base


def _column_group(rng: random.Random, n: int, k: int, y_top: float, y_bot: float,
                  rich: bool, aligned: bool, h_range: Tuple[float, float] = (40.0, 200.0),
                  x_lo: float = MARGIN, x_hi: float = PAGE_W - MARGIN) -> List[Placed]:
    """Lay ``n`` blocks into ``k`` columns between y_top and y_bot, column-major order."""
    gutter = rng.uniform(30.0, 50.0)
    bounds = _column_bounds(k, x_lo, x_hi, gutter)
    col_w = bounds[0][1] - bounds[0][0]
    gap = _gap(rng)
    avail = y_bot - y_top
    if aligned:
        rows = -(-n // k)
        heights = [rng.uniform(*h_range) for _ in range(rows)]
        counts = [min(rows, max(0, n - i * rows)) for i in range(k)]
        columns = [[_Item("text", heights[r], 1.0) for r in range(c)] for c in counts]
    else:
        counts = _split_counts(rng, n, k)
        columns = [_column_items(rng, c, col_w, rich, *h_range) for c in counts]
    scale = _fit_scale(columns, gap, avail)
    out: List[Placed] = []
    for (x1, x2), col in zip(bounds, columns):
        out.extend(_stack(col, x1, x2, y_top, gap, scale))
    return out


def _sections_height(parts: Sequence[List[Placed]]) -> float:
    return max(p.bbox.y2 for part in parts for p in part)


# ---------------------------------------------------------------- classes

def _single_column(rng: random.Random, n: int) -> List[Placed]:
    items = _column_items(rng, n, PAGE_W - 2 * MARGIN, rich=False)
    gap = _gap(rng)
    scale = _fit_scale([items], gap, PAGE_H - 2 * MARGIN)
    return _stack(items, MARGIN, PAGE_W - MARGIN, MARGIN, gap, scale)


def _double_column(rng: random.Random, n: int) -> List[Placed]:
    return _column_group(rng, n, 2, MARGIN, PAGE_H - MARGIN, rich=False, aligned=False)


def _header(rng: random.Random, label: str, y: float, h: float) -> Placed:
    return Placed(BBox(MARGIN, y, PAGE_W - MARGIN, y + h), label)


def _multi_column(rng: random.Random, n: int) -> List[Placed]:
    k = rng.choice((3, 3, 4)) if n >= 4 else 3
    with_header = n >= k + 1 and rng.random() < 0.5
    aligned = rng.random() < 0.5
    out: List[Placed] = []
    y = MARGIN
    if with_header:
        h = rng.uniform(30.0, 50.0)
        gap = _gap(rng)
        out.append(_header(rng, "title", y, h))
        y += h + gap
        n -= 1
    out += _column_group(rng, n, k, y, PAGE_H - MARGIN, rich=not aligned, aligned=aligned)
    if with_header and rng.random() < 0.5:
        # detector-style jitter: the header reaches a few units into the columns
        hdr = out[0].bbox
        out[0] = Placed(BBox(hdr.x1, hdr.y1, hdr.x2, y + rng.uniform(2.0, 5.0)), "title")
    return out


def _spanning_header(rng: random.Random, n: int) -> List[Placed]:
    k = rng.choice((2, 3))
    out: List[Placed] = []
    y = MARGIN
    h = rng.uniform(30.0, 50.0)
    gap = _gap(rng)
    out.append(_header(rng, "title", y, h))
    y += h + gap
    body = n - 1
    has_mid = body >= 2 * k + 1 and rng.random() < 0.6
    avail = PAGE_H - MARGIN - y
    if has_mid:
        mid_h = rng.uniform(50.0, 120.0)
        sec_gap = rng.uniform(25.0, 40.0)
        upper_n = (body - 1) // 2
        lower_n = body - 1 - upper_n
        half = (avail - mid_h - 2 * sec_gap) / 2
        upper = _column_group(rng, upper_n, k, y, y + half, rich=True, aligned=False)
        y_mid = _sections_height([upper]) + sec_gap
        mid = Placed(BBox(MARGIN, y_mid, PAGE_W - MARGIN, y_mid + mid_h), "text")
        lower = _column_group(rng, lower_n, k, mid.bbox.y2 + sec_gap, PAGE_H - MARGIN,
                              rich=True, aligned=False)
        out += upper + [mid] + lower
    else:
        out += _column_group(rng, body, k, y, PAGE_H - MARGIN, rich=True, aligned=False)
    # the header reaches a few units into the first row, as detectors often report
    hdr = out[0].bbox
    out[0] = Placed(BBox(hdr.x1, hdr.y1, hdr.x2, y + rng.uniform(2.0, 5.0)), "title")
    return out


def _centered_title(rng: random.Random, n: int) -> List[Placed]:
    """Two-column section, a centred separator, another two-column section."""
    rest = n - 1
    upper_n = rest // 2
    lower_n = rest - upper_n
    cy = PAGE_H / 2 + rng.uniform(-40.0, 40.0)
    out: List[Placed] = []
    if rng.random() < 0.5:
        # isolated centred title surrounded by whitespace
        th = rng.uniform(24.0, 36.0)
        tw = rng.uniform(220.0, 380.0)
        title = Placed(BBox(PAGE_W / 2 - tw / 2, cy - th / 2, PAGE_W / 2 + tw / 2, cy + th / 2), "title")
        upper = _centered_section(rng, upper_n, MARGIN, title.bbox.y1 - rng.uniform(190.0, 260.0),
                                  bottom_align=True)
        lower = _centered_section(rng, lower_n, title.bbox.y2 + rng.uniform(190.0, 260.0), PAGE_H - MARGIN)
        out = upper + [title] + lower
    else:
        # caption above a page-wide figure; the figure is read right after its caption
        fig_h = rng.uniform(160.0, 240.0)
        # a long caption spans both columns
        cap_h = rng.uniform(30.0, 50.0)
        cap_w = rng.uniform(620.0, PAGE_W - 2 * MARGIN)
        gap = rng.uniform(12.0, 20.0)
        fig = Placed(BBox(MARGIN, cy - fig_h / 2, PAGE_W - MARGIN, cy + fig_h / 2), "figure")
        cap_y2 = fig.bbox.y1 - gap
        cap = Placed(BBox(PAGE_W / 2 - cap_w / 2, cap_y2 - cap_h, PAGE_W / 2 + cap_w / 2, cap_y2), "caption")
        upper_n = max(2, upper_n - 1) if lower_n + upper_n - 1 >= 4 else upper_n
        lower_n = n - 2 - upper_n
        if lower_n < 2:
            raise InfeasibleLayout("not enough blocks for two sections around the figure")
        sec_gap = rng.uniform(30.0, 50.0)
        upper = _centered_section(rng, upper_n, MARGIN, cap.bbox.y1 - sec_gap, bottom_align=True)
        lower = _centered_section(rng, lower_n, fig.bbox.y2 + sec_gap, PAGE_H - MARGIN)
        out = upper + [cap, fig] + lower
    return out


def _centered_section(rng: random.Random, n: int, y_top: float, y_bot: float,
                      bottom_align: bool = False) -> List[Placed]:
    if y_bot - y_top < MIN_H:
        raise InfeasibleLayout("no room for a section")
    # short text blocks keep the adjacency radius well below the surrounding whitespace
    placed = _column_group(rng, n, 2, y_top, y_bot, rich=False, aligned=False, h_range=(40.0, 90.0))
    if bottom_align:
        shift = y_bot - max(p.bbox.y2 for p in placed)
        placed = [Placed(p.bbox.translated(0.0, shift), p.label) for p in placed]
    return placed


def _l_shape(rng: random.Random, n: int) -> List[Placed]:
    """Text across the top, a tall text block at the lower left, a figure beside it."""
    top_n = n - 2
    top_items = _text_items(rng, top_n, 30.0, 90.0)
    gap = _gap(rng)
    scale = _fit_scale([top_items], gap, 420.0)
    top = _stack(top_items, MARGIN, PAGE_W - MARGIN, MARGIN, gap, scale)
    top = [Placed(BBox(p.bbox.x1, p.bbox.y1, PAGE_W - MARGIN, p.bbox.y2), p.label) for p in top]
    y = top[-1].bbox.y2 + rng.uniform(4.0, 8.0)
    split_x = rng.uniform(560.0, 620.0)
    left_h = rng.uniform(600.0, PAGE_H - MARGIN - y)
    left = Placed(BBox(MARGIN, y, split_x - rng.uniform(20.0, 40.0), y + left_h), "text")
    fig_w = PAGE_W - MARGIN - split_x
    fig_y1 = top[-1].bbox.y2 - rng.uniform(2.0, 5.0)  # slight overlap with the text above
    fig_h = rng.uniform(max(fig_w * 1.1, 0.5 * left_h), 0.8 * left_h)
    fig = Placed(BBox(split_x, fig_y1, PAGE_W - MARGIN, fig_y1 + fig_h), "figure")
    return top + [left, fig]


def _vertical(rng: random.Random, n: int) -> List[Placed]:
    """Tall narrow blocks read right to left."""
    gutter = rng.uniform(10.0, 20.0)
    width = (PAGE_W - 2 * MARGIN - gutter * (n - 1)) / n
    if width < MIN_H:
        raise InfeasibleLayout(f"{n} vertical columns do not fit")
    top = MARGIN
    out = []
    for i in range(n):
        x2 = PAGE_W - MARGIN - i * (width + gutter)
        w = width * rng.uniform(0.6, 1.0)
        h = rng.uniform(max(2 * w, 300.0), PAGE_H - 2 * MARGIN)
        out.append(Placed(BBox(x2 - w, top, x2, top + h), "text"))
    return out


_GENERATORS = {
    LayoutClass.SINGLE_COLUMN: _single_column,
    LayoutClass.DOUBLE_COLUMN: _double_column,
    LayoutClass.MULTI_COLUMN: _multi_column,
    LayoutClass.SPANNING_HEADER: _spanning_header,
    LayoutClass.L_SHAPE: _l_shape,
    LayoutClass.CENTERED_TITLE: _centered_title,
    LayoutClass.VERTICAL: _vertical,
}


def _coerce(cls: Union[LayoutClass, str]) -> LayoutClass:
    if isinstance(cls, LayoutClass):
        return cls
    for c in LayoutClass:
        if cls in (c.value, c.name):
            return c
    raise ValueError(f"unknown layout class {cls!r}")


def generate(cls: Union[LayoutClass, str], seed: int, n_blocks: Optional[int] = None,
             page_id: Optional[str] = None) -> Tuple[Page, OrderResult]:
    """Generate one page and its ground-truth order.

    Block ids are file positions; the file order is shuffled so that it
    carries no ordering information.
    """
    cls = _coerce(cls)
    rng = random.Random(f"{cls.value}:{seed}")
    if n_blocks is None:
        n_blocks = rng.randint(*DEFAULT_N_RANGE[cls])
    if n_blocks < 1:
        raise ValueError("n_blocks must be >= 1")
    if n_blocks < MIN_BLOCKS[cls]:
        raise InfeasibleLayout(f"{cls.value} needs at least {MIN_BLOCKS[cls]} blocks")
    placed = _GENERATORS[cls](rng, n_blocks)
    if len(placed) != n_blocks:  # pragma: no cover - generator contract
        raise AssertionError(f"{cls.value} produced {len(placed)} blocks, wanted {n_blocks}")
    for p in placed:
        if p.bbox.x2 > PAGE_W + 1e-9 or p.bbox.y2 > PAGE_H + 1e-9:
            raise InfeasibleLayout(f"{n_blocks} blocks overflow the page")

    perm = list(range(n_blocks))
    rng.shuffle(perm)  # perm[file_pos] = gt index
    blocks = [Block(pos, _rounded(placed[gt].bbox), placed[gt].label, gt) for pos, gt in enumerate(perm)]
    pid = page_id or f"{cls.value}-{seed:04d}"
    page = Page(pid, PAGE_W, PAGE_H, blocks)
    return page, OrderResult(pid, page.gt_order())


def _rounded(b: BBox) -> BBox:
    # quarter-unit grid keeps JSON output short and exactly representable
    return BBox(*(round(v * 4) / 4 for v in b.as_list()))


# default stratification: 30 complex pages and 70 regular pages
DEFAULT_CORPUS_SPEC: Tuple[Tuple[LayoutClass, int, str], ...] = (
    (LayoutClass.MULTI_COLUMN, 18, "complex"),
    (LayoutClass.SPANNING_HEADER, 9, "complex"),
    (LayoutClass.CENTERED_TITLE, 2, "complex"),
    (LayoutClass.L_SHAPE, 1, "complex"),
    (LayoutClass.SINGLE_COLUMN, 27, "regular"),
    (LayoutClass.DOUBLE_COLUMN, 38, "regular"),
    (LayoutClass.MULTI_COLUMN, 5, "regular"),
)


@dataclass(frozen=True)
class CorpusPage:
    page: Page
    gt: OrderResult
    layout: LayoutClass
    split: str


def _spec_entries(spec) -> List[Tuple[LayoutClass, int, str]]:
    if isinstance(spec, Mapping):
        return [(_coerce(c), n, _coerce(c).split) for c, n in spec.items()]
    return [(_coerce(c), n, split) for c, n, split in spec]


def generate_corpus(spec=None, seed: int = 0) -> List[CorpusPage]:
    """Generate a tagged corpus.

    ``spec`` maps layout class to page count, or is a sequence of
    (class, count, split) triples; the default is ``DEFAULT_CORPUS_SPEC``.
    """
    entries = _spec_entries(DEFAULT_CORPUS_SPEC if spec is None else spec)
    out: List[CorpusPage] = []
    used: Dict[LayoutClass, int] = {}
    for cls, count, split in entries:
        if count < 0:
            raise ValueError(f"negative count for {cls.value}")
        for _ in range(count):
            i = used.get(cls, 0)
            used[cls] = i + 1
            pid = f"{cls.value}-{seed}-{i:04d}"
            page, gt = generate(cls, seed * 100_000 + i, page_id=pid)
            out.append(CorpusPage(page, gt, cls, split))
    return out


def write_corpus(corpus: Sequence[CorpusPage], out_dir: Union[str, Path]) -> Path:
    """Write ``input/`` (no index), ``gt/`` (with index) and ``manifest.json``."""
    out = Path(out_dir)
    (out / "input").mkdir(parents=True, exist_ok=True)
    (out / "gt").mkdir(parents=True, exist_ok=True)
    manifest = {}
    for cp in corpus:
        name = f"{cp.page.page_id}.json"
        (out / "input" / name).write_text(dump_page(cp.page, with_index=False), encoding="utf-8")
        (out / "gt" / name).write_text(dump_page(cp.page, cp.gt.order), encoding="utf-8")
        manifest[cp.page.page_id] = cp.split
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out
