"""Pre-masking of highly dynamic elements (titles, figures, tables)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .model import DEFAULT_TAXONOMY_OBJ, Block, Page, SemanticClass, Taxonomy, classify


@dataclass(frozen=True)
class MaskPartition:
    core: Tuple[Block, ...]
    masked: Tuple[Block, ...]


def build_premask(page: Page, taxonomy: Taxonomy = DEFAULT_TAXONOMY_OBJ) -> MaskPartition:
    core, masked = [], []
    for b in page.blocks:
        cls = classify(b.label, b.bbox, taxonomy)
        (core if cls is SemanticClass.OTHER else masked).append(b)
    return MaskPartition(tuple(core), tuple(masked))
