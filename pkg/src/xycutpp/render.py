"""Visual output: SVG reading-order overlays and a metrics bar chart."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence, Union
from xml.sax.saxutils import escape

from .errors import SchemaError
from .model import DEFAULT_TAXONOMY_OBJ, Page, Taxonomy

GROUP_COLORS = {"title": "#d62728", "vision": "#1f77b4", "other": "#2ca02c"}


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def render_svg(page: Page, order: Sequence, taxonomy: Taxonomy = DEFAULT_TAXONOMY_OBJ) -> str:
    """One rectangle per block, its reading position centred inside, arrows between consecutive blocks.

    Output depends only on the inputs, so repeated calls are byte-identical.
    """
    if not page.blocks:
        raise SchemaError("blocks", "a page needs at least one block")
    pos = {bid: i for i, bid in enumerate(order)}
    missing = [b.id for b in page.blocks if b.id not in pos]
    if missing or len(pos) != len(page.blocks):
        raise SchemaError("order", f"order does not cover the page blocks (missing {missing})")
    w, h = page.width, page.height
    font = max(10.0, min(w, h) / 40)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}" style="background-color:white">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto">'
        '<path d="M0,0 L10,5 L0,10 z" fill="#444"/></marker>',
        "</defs>",
    ]
    by_id = {b.id: b for b in page.blocks}
    for bid in order:
        b = by_id[bid]
        bb = b.bbox
        color = GROUP_COLORS[taxonomy.group(b.label)]
        lines.append(
            f'<rect x="{_fmt(bb.x1)}" y="{_fmt(bb.y1)}" width="{_fmt(bb.width)}" height="{_fmt(bb.height)}" '
            f'fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="2">'
            f"<title>{escape(str(b.label))}</title></rect>"
        )
    for a, b in zip(order, order[1:]):
        pa, pb = by_id[a].bbox, by_id[b].bbox
        lines.append(
            f'<line x1="{_fmt(pa.cx)}" y1="{_fmt(pa.cy)}" x2="{_fmt(pb.cx)}" y2="{_fmt(pb.cy)}" '
            'stroke="#444" stroke-width="1.5" marker-end="url(#arrow)"/>'
        )
    for bid in order:
        bb = by_id[bid].bbox
        lines.append(
            f'<text x="{_fmt(bb.cx)}" y="{_fmt(bb.cy)}" font-size="{_fmt(font)}" font-family="sans-serif" '
            f'text-anchor="middle" dominant-baseline="central">{pos[bid]}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def plot_metrics(aggregates: Mapping[str, Mapping[str, Mapping[str, float]]],
                 out_path: Union[str, Path]) -> Path:
    """Grouped bar chart of BLEU-4 / ARD / Tau per method and split, saved as PNG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    metrics = ("bleu4", "ard", "tau")
    titles = {"bleu4": "BLEU-4 (higher is better)", "ard": "ARD (lower is better)", "tau": "Tau (higher is better)"}
    methods = list(aggregates)
    splits = sorted({s for a in aggregates.values() for s in a})
    fig, axes = plt.subplots(1, len(metrics), figsize=(4 * len(metrics), 3.5))
    width = 0.8 / max(1, len(methods))
    for ax, metric in zip(axes, metrics):
        for k, method in enumerate(methods):
            vals = [aggregates[method].get(s, {}).get(metric, 0.0) for s in splits]
            ax.bar([i + k * width for i in range(len(splits))], vals, width, label=method)
        ax.set_xticks([i + width * (len(methods) - 1) / 2 for i in range(len(splits))])
        ax.set_xticklabels(splits)
        ax.set_title(titles[metric], fontsize=10)
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return out
