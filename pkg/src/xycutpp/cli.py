"""Command line interface: order, eval, render, bench, synth.

Exit status: 0 on success, 1 on data errors (bad files, mismatched corpora),
2 on usage errors (argparse).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyCorpus, MissingPage, XYCutError
from .jsonio import dump_page, load_page
from .metrics import evaluate, fps_bench
from .mgs import Orientation
from .model import Page, Params, Taxonomy
from .pipeline import ENGINES, order_page
from .render import plot_metrics, render_svg
from .synth import DEFAULT_CORPUS_SPEC, LayoutClass, generate_corpus, write_corpus

log = logging.getLogger("xycutpp")

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


def _json_files(path: Path) -> List[Path]:
    if path.is_dir() and (path / "input").is_dir():
        path = path / "input"
    if path.is_dir():
        return sorted(p for p in path.glob("*.json") if p.name != "manifest.json")
    return [path]


def _params(args) -> Params:
    overrides = {}
    for flag, name in (("beta", "beta"), ("theta_v", "theta_v"), ("tau_overlap", "tau_overlap"),
                       ("min_gap", "min_gap"), ("eps_adj_mult", "eps_adj_mult")):
        v = getattr(args, flag, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "no_early_term", False):
        overrides["early_termination"] = False
    if getattr(args, "taxonomy", None):
        overrides["taxonomy"] = Taxonomy.from_file(args.taxonomy)
    if getattr(args, "config", None):
        return Params.from_file(args.config, **overrides)
    return dataclasses.replace(Params(), **overrides)


def _orientation(args) -> Optional[Orientation]:
    value = getattr(args, "orientation", "auto")
    return None if value == "auto" else Orientation(value)


# ------------------------------------------------------------------ order

def cmd_order(args) -> int:
    params = _params(args)
    orientation = _orientation(args)
    src = Path(args.input)
    files = _json_files(src)
    batch = src.is_dir()
    if batch:
        if not args.output:
            log.error("directory input needs -o OUTPUT_DIR")
            return EXIT_USAGE
        out_dir = Path(args.output)
        out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for f in files:
        try:
            page = load_page(f)
            result = order_page(page, args.engine, params, orientation)
            text = dump_page(page, result.order)
        except (XYCutError, OSError) as exc:
            failures += 1
            print(f"error: {f}: {exc}", file=sys.stderr)
            continue
        if batch:
            (out_dir / f.name).write_text(text, encoding="utf-8")
        elif args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        log.info("%s: %d blocks ordered", f, len(result.order))
    if failures:
        print(f"{failures} of {len(files)} file(s) failed", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


# ------------------------------------------------------------------- eval

def _load_orders(path: Path) -> Dict[str, Tuple]:
    orders = {}
    for f in _json_files(path):
        page = load_page(f)
        if any(b.gt_index is None for b in page.blocks):
            raise XYCutError(f"{f}: blocks carry no index field")
        orders[page.page_id] = tuple(page.gt_order())
    return orders


def _load_manifest(explicit: Optional[str], gt_dir: Path) -> Dict[str, str]:
    candidates = [Path(explicit)] if explicit else [gt_dir / "manifest.json", gt_dir.parent / "manifest.json"]
    for c in candidates:
        if c.is_file():
            data = json.loads(c.read_text(encoding="utf-8"))
            return {str(k): str(v) for k, v in data.items()}
    if explicit:
        raise FileNotFoundError(explicit)
    return {}


def cmd_eval(args) -> int:
    pred_dir, gt_dir = Path(args.pred), Path(args.gt)
    if (gt_dir / "gt").is_dir():
        gt_dir = gt_dir / "gt"
    try:
        pred = _load_orders(pred_dir)
        gt = _load_orders(gt_dir)
        if not gt:
            raise EmptyCorpus(f"no ground-truth pages in {gt_dir}")
        missing = sorted(set(gt) ^ set(pred))
        if missing:
            raise MissingPage(f"page ids differ between prediction and ground truth: {missing[:10]}")
        splits = _load_manifest(args.manifest, gt_dir)
        report = evaluate(pred, gt, splits, method=args.method)
    except (XYCutError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    print(report.format_table())
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=2) + "\n", encoding="utf-8")
    with open(out / "per_page.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["page_id", "split", "bleu4", "ard", "tau"])
        for pid, s in sorted(report.per_page.items()):
            w.writerow([pid, s.split or "", f"{s.bleu4:.6f}", f"{s.ard:.6f}", f"{s.tau:.6f}"])
    if args.figure:
        plot_metrics({report.method: report.aggregates()}, out / "metrics.png")
    print(f"wrote {out / 'report.json'} and {out / 'per_page.csv'}")
    return EXIT_OK


# ----------------------------------------------------------------- render

def cmd_render(args) -> int:
    try:
        page = load_page(args.page)
        source = load_page(args.order) if args.order else page
        if any(b.gt_index is None for b in source.blocks):
            raise XYCutError("no index field to render; pass an ordered JSON")
        order = source.gt_order()
        svg = render_svg(page, order, _params(args).taxonomy)
    except (XYCutError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    Path(args.output).write_text(svg, encoding="utf-8")
    return EXIT_OK


# ------------------------------------------------------------------ bench

def cmd_bench(args) -> int:
    params = _params(args)
    orientation = _orientation(args)
    try:
        src = Path(args.corpus)
        if not src.exists():
            raise FileNotFoundError(str(src))
        pages: List[Page] = [load_page(f) for f in _json_files(src)]
        report = fps_bench(pages, lambda p: order_page(p, args.engine, params, orientation), args.repeats)
    except (XYCutError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"engine={args.engine} {report.format()}")
    return EXIT_OK


# ------------------------------------------------------------------ synth

def _parse_counts(items: Sequence[str]):
    spec = {}
    for item in items:
        name, _, count = item.partition("=")
        try:
            cls = next(c for c in LayoutClass if name in (c.value, c.name))
            spec[cls] = int(count)
        except (StopIteration, ValueError):
            raise argparse.ArgumentTypeError(f"bad --count {item!r}; use CLASS=N") from None
    return spec


def cmd_synth(args) -> int:
    try:
        spec = _parse_counts(args.count) if args.count else DEFAULT_CORPUS_SPEC
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        corpus = generate_corpus(spec, args.seed)
    except XYCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    out = write_corpus(corpus, args.output)
    n_complex = sum(cp.split == "complex" for cp in corpus)
    print(f"wrote {len(corpus)} pages ({n_complex} complex, {len(corpus) - n_complex} regular) to {out}")
    return EXIT_OK


# ----------------------------------------------------------------- parser

def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("algorithm parameters")
    g.add_argument("--beta", type=float, help="cross-layout length multiplier (default 1.3)")
    g.add_argument("--theta-v", dest="theta_v", type=float, help="density threshold for axis choice (default 0.9)")
    g.add_argument("--tau-overlap", dest="tau_overlap", type=float, help="projection IoU threshold (default 0.3)")
    g.add_argument("--min-gap", dest="min_gap", type=float, help="smallest projection gap that splits (default 1.0)")
    g.add_argument("--eps-adj-mult", dest="eps_adj_mult", type=float,
                   help="isolation radius as a multiple of the median text height (default 2.0)")
    g.add_argument("--config", help="JSON file with parameter values")
    g.add_argument("--taxonomy", help="JSON file mapping raw labels to title/vision/other")
    g.add_argument("--orientation", choices=("auto", "horizontal", "vertical"), default="auto")
    g.add_argument("--no-early-term", dest="no_early_term", action="store_true",
                   help="evaluate every distance term in full")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xycutpp", description="Block-level reading-order recovery.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="assign reading-order indices to page JSON files")
    p.add_argument("input", help="page JSON file or directory of them")
    p.add_argument("-o", "--output", help="output file (file input) or directory (directory input)")
    p.add_argument("--engine", choices=sorted(ENGINES), default="xycut++")
    _add_params(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("eval", help="score predicted orders against ground truth")
    p.add_argument("pred", help="directory of ordered JSON files")
    p.add_argument("gt", help="directory of ground-truth JSON files (or a corpus root with gt/)")
    p.add_argument("--manifest", help="JSON mapping page_id to complex/regular")
    p.add_argument("--method", default="xycut++", help="row name in the report")
    p.add_argument("-o", "--out-dir", default="eval_out", help="where report.json and per_page.csv go")
    p.add_argument("--figure", action="store_true", help="also render metrics.png")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="draw a page and its order as SVG")
    p.add_argument("page", help="page JSON")
    p.add_argument("order", nargs="?", help="ordered JSON (defaults to the indices in PAGE)")
    p.add_argument("-o", "--output", required=True, help="SVG path")
    p.add_argument("--taxonomy", help="JSON file mapping raw labels to title/vision/other")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="time the ordering stage over a corpus")
    p.add_argument("corpus", help="directory of page JSON files (or a corpus root with input/)")
    p.add_argument("--engine", choices=sorted(ENGINES), default="xycut++")
    p.add_argument("--repeats", type=int, default=10)
    _add_params(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write a synthetic corpus with ground truth")
    p.add_argument("output", help="corpus directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", action="append", metavar="CLASS=N",
                   help="pages per layout class, repeatable (default: 100-page stratified corpus)")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "repeats", 1) < 1:
        parser.error("--repeats must be >= 1")
    try:
        return args.func(args)
    except (ValueError, TypeError, OSError) as exc:
        # bad config or taxonomy files land here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
