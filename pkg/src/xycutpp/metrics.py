"""Block-level ordering metrics and the ordering throughput harness."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from statistics import mean
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from scipy.stats import kendalltau as _scipy_kendalltau

from .errors import EmptyCorpus, EmptySequence, NotAPermutation

SPLIT_ORDER = ("complex", "regular", "all")
SPLIT_HEADINGS = {"complex": "D_c", "regular": "D_r", "all": "mu"}


def _ngrams(seq: Sequence, n: int) -> Counter:
    return Counter(tuple(seq[i:i + n]) for i in range(len(seq) - n + 1))


def bleu4_blocks(pred: Sequence, ref: Sequence) -> float:
    """BLEU over block identifiers, clipped counts, brevity penalty, no smoothing.

    The n-gram order is capped at the shorter sequence length so pages with
    fewer than four blocks can still score.
    """
    if not pred or not ref:
        raise EmptySequence("BLEU needs non-empty sequences")
    pred, ref = list(pred), list(ref)
    k = min(4, len(pred), len(ref))
    precisions = []
    for n in range(1, k + 1):
        hyp, ref_counts = _ngrams(pred, n), _ngrams(ref, n)
        clipped = sum(min(c, ref_counts[g]) for g, c in hyp.items())
        if clipped == 0:
            return 0.0
        precisions.append(clipped / sum(hyp.values()))
    c, r = len(pred), len(ref)
    bp = math.exp(1 - r / c) if c <= r else 1.0
    # product form keeps a perfect match at exactly 1.0
    return bp * math.prod(precisions) ** (1 / k)


def _check_permutation(pred: Sequence, ref: Sequence) -> None:
    if len(pred) != len(ref) or set(pred) != set(ref) or len(set(ref)) != len(ref):
        raise NotAPermutation("prediction is not a permutation of the reference ids")


def ard(pred: Sequence, ref: Sequence) -> float:
    """Mean absolute rank displacement, normalised by the sequence length."""
    _check_permutation(pred, ref)
    n = len(ref)
    if n == 0:
        raise EmptySequence("ARD needs at least one block")
    pos = {b: i for i, b in enumerate(pred)}
    return sum(abs(pos[b] - i) for i, b in enumerate(ref)) / n / n


def kendall_tau(pred: Sequence, ref: Sequence) -> float:
    _check_permutation(pred, ref)
    if len(ref) < 2:
        return 1.0
    pos = {b: i for i, b in enumerate(pred)}
    # permutations have no ties, so scipy's tau-b equals tau-a here; rounding
    # drops the last-ulp noise of its square-root normaliser
    return round(float(_scipy_kendalltau(range(len(ref)), [pos[b] for b in ref]).statistic), 12)


@dataclass(frozen=True)
class PageScore:
    bleu4: float
    ard: float
    tau: float
    split: Optional[str] = None


def score_page(pred: Sequence, ref: Sequence, split: Optional[str] = None) -> PageScore:
    return PageScore(bleu4_blocks(pred, ref), ard(pred, ref), kendall_tau(pred, ref), split)


@dataclass
class MetricReport:
    per_page: Dict[str, PageScore] = field(default_factory=dict)
    fps: Optional[float] = None
    method: str = "xycut++"

    def aggregates(self) -> Dict[str, Dict[str, float]]:
        groups: Dict[str, List[PageScore]] = {"all": list(self.per_page.values())}
        for s in self.per_page.values():
            if s.split:
                groups.setdefault(s.split, []).append(s)
        out = {}
        for name, scores in groups.items():
            if not scores:
                continue
            out[name] = {
                "bleu4": mean(s.bleu4 for s in scores),
                "ard": mean(s.ard for s in scores),
                "tau": mean(s.tau for s in scores),
                "pages": len(scores),
            }
        return out

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "per_page": {
                pid: {"bleu4": s.bleu4, "ard": s.ard, "tau": s.tau, "split": s.split}
                for pid, s in sorted(self.per_page.items())
            },
            "aggregates": self.aggregates(),
            "fps": self.fps,
        }

    def format_table(self) -> str:
        return format_table({self.method: self})


def format_table(reports: Mapping[str, "MetricReport"]) -> str:
    """Plain-text table: one row per method, BLEU-4/ARD/Tau per split."""
    aggs = {name: r.aggregates() for name, r in reports.items()}
    splits = [s for s in SPLIT_ORDER if any(s in a for a in aggs.values())]
    width = max([len("Method")] + [len(n) for n in reports])
    head1 = "Method".ljust(width)
    head2 = " " * width
    for s in splits:
        head1 += " | " + SPLIT_HEADINGS[s].center(22)
        head2 += " | " + f"{'BLEU-4':>6} {'ARD':>7} {'Tau':>7}"
    lines = [head1, head2, "-" * len(head2)]
    for name, a in aggs.items():
        row = name.ljust(width)
        for s in splits:
            if s in a:
                m = a[s]
                row += " | " + f"{m['bleu4']:6.3f} {m['ard']:7.3f} {m['tau']:7.3f}"
            else:
                row += " | " + " " * 22
        lines.append(row)
    return "\n".join(lines)


def evaluate(pred: Mapping[str, Sequence], gt: Mapping[str, Sequence],
             splits: Optional[Mapping[str, str]] = None, method: str = "xycut++") -> MetricReport:
    splits = splits or {}
    report = MetricReport(method=method)
    for pid in sorted(gt):
        report.per_page[pid] = score_page(pred[pid], gt[pid], splits.get(pid))
    return report


@dataclass(frozen=True)
class FpsReport:
    runs: tuple
    pages: int

    @property
    def mean(self) -> float:
        return mean(self.runs)

    @property
    def min(self) -> float:
        return min(self.runs)

    @property
    def max(self) -> float:
        return max(self.runs)

    def format(self) -> str:
        return (f"pages={self.pages} runs={len(self.runs)} "
                f"fps_mean={self.mean:.1f} fps_min={self.min:.1f} fps_max={self.max:.1f}")


def fps_bench(pages: Sequence, engine: Callable, repeats: int = 10) -> FpsReport:
    """Time ``engine(page)`` over an in-memory corpus; parsing is not timed."""
    if not pages:
        raise EmptyCorpus("no pages to benchmark")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    runs = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for page in pages:
            engine(page)
        runs.append(len(pages) / (time.perf_counter() - t0))
    return FpsReport(tuple(runs), len(pages))
