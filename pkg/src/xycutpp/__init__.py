"""Block-level reading-order recovery for detected page layouts."""

from .errors import (
    DuplicateIndex,
    EmptyCorpus,
    EmptyRegion,
    EmptySequence,
    InfeasibleLayout,
    MissingPage,
    NotAPermutation,
    SchemaError,
    XYCutError,
)
from .jsonio import dump_page, load_page, parse_page
from .metrics import ard, bleu4_blocks, evaluate, fps_bench, kendall_tau
from .model import BBox, Block, OrderResult, Page, Params, SemanticClass, Taxonomy
from .pipeline import ABLATION_LADDER, ENGINES, order_page

__version__ = "0.1.0"

__all__ = [
    "ABLATION_LADDER", "ENGINES", "BBox", "Block", "DuplicateIndex", "EmptyCorpus",
    "EmptyRegion", "EmptySequence", "InfeasibleLayout", "MissingPage", "NotAPermutation",
    "OrderResult", "Page", "Params", "SchemaError", "SemanticClass", "Taxonomy", "XYCutError",
    "ard", "bleu4_blocks", "dump_page", "evaluate", "fps_bench", "kendall_tau",
    "load_page", "order_page", "parse_page",
]
