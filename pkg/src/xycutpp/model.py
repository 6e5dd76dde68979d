"""Domain types, label taxonomy and elementary box geometry."""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass, field
from statistics import median  # noqa: F401  (even count -> mean of middle pair)
from typing import Hashable, Mapping, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

MIN_EXTENT = 1e-6


@dataclass(frozen=True)
class BBox:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        coords = (self.x1, self.y1, self.x2, self.y2)
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite bbox {coords}")
        if min(coords) < 0:
            raise ValueError(f"negative coordinate in bbox {coords}")
        if self.x2 - self.x1 < MIN_EXTENT or self.y2 - self.y1 < MIN_EXTENT:
            raise ValueError(f"degenerate bbox {coords}")

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def cx(self) -> float:
        return (self.x1 + self.x2) / 2

    @property
    def cy(self) -> float:
        return (self.y1 + self.y2) / 2

    def span(self, axis: str) -> Tuple[float, float]:
        """The projection interval of the box onto ``axis`` ("x" or "y")."""
        return (self.x1, self.x2) if axis == "x" else (self.y1, self.y2)

    def as_list(self):
        return [self.x1, self.y1, self.x2, self.y2]

    def translated(self, dx: float, dy: float) -> "BBox":
        return BBox(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def scaled(self, s: float) -> "BBox":
        return BBox(self.x1 * s, self.y1 * s, self.x2 * s, self.y2 * s)


def center(b: BBox) -> Tuple[float, float]:
    return (b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2


def aspect_ratio(b: BBox) -> float:
    return (b.x2 - b.x1) / (b.y2 - b.y1)


def overlap_length(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return max(0.0, min(a[1], b[1]) - max(a[0], b[0]))


def interval_iou(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    inter = overlap_length(a, b)
    union = (a[1] - a[0]) + (b[1] - b[0]) - inter
    return inter / union if union > 0 else 0.0


def box_distance(a: BBox, b: BBox) -> float:
    """Minimum boundary-to-boundary Euclidean distance (0 when boxes touch)."""
    dx = max(0.0, a.x1 - b.x2, b.x1 - a.x2)
    dy = max(0.0, a.y1 - b.y2, b.y1 - a.y2)
    return math.hypot(dx, dy)


class SemanticClass(enum.Enum):
    CROSS_LAYOUT = "cross_layout"
    TITLE_HORIZONTAL = "title_horizontal"
    TITLE_VERTICAL = "title_vertical"
    VISION = "vision"
    OTHER = "other"

    @property
    def priority(self) -> int:
        """Matching priority; larger is restored first."""
        return _PRIORITY[self]

    @property
    def is_title(self) -> bool:
        return self in (SemanticClass.TITLE_HORIZONTAL, SemanticClass.TITLE_VERTICAL)


_PRIORITY = {
    SemanticClass.CROSS_LAYOUT: 3,
    SemanticClass.TITLE_HORIZONTAL: 2,
    SemanticClass.TITLE_VERTICAL: 2,
    SemanticClass.VISION: 1,
    SemanticClass.OTHER: 0,
}

# raw label -> coarse group; CrossLayout is assigned geometrically, never from a label
DEFAULT_TAXONOMY: Mapping[str, str] = {
    "text": "other",
    "reference": "other",
    "equation": "other",
    "title": "title",
    "figure": "vision",
    "table": "vision",
    "image": "vision",
    "chart": "vision",
}

_GROUPS = ("title", "vision", "other")


@dataclass(frozen=True)
class Taxonomy:
    table: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_TAXONOMY))

    def __post_init__(self):
        bad = {k: v for k, v in self.table.items() if v not in _GROUPS}
        if bad:
            raise ValueError(f"taxonomy groups must be one of {_GROUPS}: {bad}")

    @classmethod
    def from_file(cls, path) -> "Taxonomy":
        with open(path, encoding="utf-8") as fh:
            overrides = json.load(fh)
        table = dict(DEFAULT_TAXONOMY)
        table.update({str(k).lower(): str(v).lower() for k, v in overrides.items()})
        return cls(table)

    def group(self, raw: str) -> str:
        return self.table.get(raw.lower(), "other")


DEFAULT_TAXONOMY_OBJ = Taxonomy()


def classify(label: str, bbox: BBox, taxonomy: Taxonomy = DEFAULT_TAXONOMY_OBJ) -> SemanticClass:
    group = taxonomy.group(label)
    if group == "title":
        if aspect_ratio(bbox) < 1:
            return SemanticClass.TITLE_VERTICAL
        return SemanticClass.TITLE_HORIZONTAL
    if group == "vision":
        return SemanticClass.VISION
    return SemanticClass.OTHER


@dataclass(frozen=True)
class Block:
    id: Hashable
    bbox: BBox
    label: str
    gt_index: Optional[int] = None


@dataclass(frozen=True)
class Page:
    page_id: str
    width: float
    height: float
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("page dimensions must be positive")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        ids = [b.id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError("block ids must be unique within a page")

    def block(self, block_id) -> Block:
        for b in self.blocks:
            if b.id == block_id:
                return b
        raise KeyError(block_id)

    def gt_order(self) -> list:
        """Block ids sorted by ground-truth index (requires every gt_index)."""
        if any(b.gt_index is None for b in self.blocks):
            raise ValueError(f"page {self.page_id} has no complete ground truth")
        return [b.id for b in sorted(self.blocks, key=lambda b: b.gt_index)]

    def scaled(self, s: float) -> "Page":
        blocks = tuple(
            Block(b.id, b.bbox.scaled(s), b.label, b.gt_index) for b in self.blocks
        )
        return Page(self.page_id, self.width * s, self.height * s, blocks)


def clamp_bbox(coords: Sequence[float], width: float, height: float) -> Tuple[Tuple[float, ...], bool]:
    """Clamp raw coordinates to the page rectangle; returns (coords, changed)."""
    x1, y1, x2, y2 = (float(c) for c in coords)
    cl = (
        min(max(x1, 0.0), width),
        min(max(y1, 0.0), height),
        min(max(x2, 0.0), width),
        min(max(y2, 0.0), height),
    )
    return cl, cl != (x1, y1, x2, y2)


@dataclass(frozen=True)
class AtomicRegion:
    bbox: BBox
    cross_layout: bool
    label: str
    index: int
    block_id: Hashable = None

    @property
    def content_type(self) -> str:
        return "cross-layout" if self.cross_layout else "single-layout"


@dataclass(frozen=True)
class OrderResult:
    page_id: str
    order: Tuple

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    def indices(self) -> dict:
        """Map block id -> reading position."""
        return {bid: i for i, bid in enumerate(self.order)}


@dataclass(frozen=True)
class Params:
    beta: float = 1.3
    theta_v: float = 0.9
    tau_overlap: float = 0.3
    min_gap: float = 1.0
    eps_adj_mult: float = 2.0
    center_bound: float = 0.2
    ratio_pivot: float = 3.0
    early_termination: bool = True
    taxonomy: Taxonomy = DEFAULT_TAXONOMY_OBJ
    edge_table: Optional[Mapping[str, Tuple[float, float, float, float]]] = None

    def __post_init__(self):
        for name in ("beta", "min_gap", "eps_adj_mult", "ratio_pivot"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("theta_v", "tau_overlap", "center_bound"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)!r}")

    @classmethod
    def from_file(cls, path, **overrides) -> "Params":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if "edge_table" in data:
            data["edge_table"] = {k: tuple(v) for k, v in data["edge_table"].items()}
        data.update(overrides)
        return cls(**data)


def reading_key(b: Block):
    """Deterministic geometric sort key: (y1, x1) then the far corner and label."""
    bb = b.bbox
    return (bb.y1, bb.x1, bb.y2, bb.x2, b.label)
