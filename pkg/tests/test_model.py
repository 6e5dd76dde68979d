import json

import pytest
from hypothesis import given, strategies as st

from xycutpp.model import (
    BBox,
    Block,
    OrderResult,
    Page,
    Params,
    SemanticClass,
    Taxonomy,
    aspect_ratio,
    box_distance,
    center,
    clamp_bbox,
    classify,
)


@pytest.mark.parametrize("box,expected", [
    ((0, 0, 10, 5), (5, 2.5)),
    ((2, 2, 2.0001, 8), (2.00005, 5)),
    ((10, 20, 30, 40), (20, 30)),
])
def test_center(box, expected):
    assert center(BBox(*box)) == pytest.approx(expected)


@pytest.mark.parametrize("box,expected", [((0, 0, 30, 10), 3.0), ((0, 0, 10, 30), 1 / 3), ((0, 0, 7, 7), 1.0)])
def test_aspect_ratio(box, expected):
    assert aspect_ratio(BBox(*box)) == pytest.approx(expected)


@pytest.mark.parametrize("label,box,cls", [
    ("figure", (0, 0, 100, 100), SemanticClass.VISION),
    ("title", (0, 0, 200, 20), SemanticClass.TITLE_HORIZONTAL),
    ("title", (0, 0, 20, 200), SemanticClass.TITLE_VERTICAL),
    ("chart_caption", (0, 0, 50, 10), SemanticClass.OTHER),
    ("Table", (0, 0, 50, 10), SemanticClass.VISION),
    ("text", (0, 0, 50, 10), SemanticClass.OTHER),
])
def test_classify(label, box, cls):
    assert classify(label, BBox(*box)) is cls


def test_priority_order():
    p = [c.priority for c in (SemanticClass.CROSS_LAYOUT, SemanticClass.TITLE_HORIZONTAL,
                              SemanticClass.VISION, SemanticClass.OTHER)]
    assert p == sorted(p, reverse=True) and len(set(p)) == 4
    assert SemanticClass.TITLE_VERTICAL.priority == SemanticClass.TITLE_HORIZONTAL.priority


def test_taxonomy_overrides(tmp_path):
    f = tmp_path / "tax.json"
    f.write_text(json.dumps({"header": "title", "Figure_Caption": "vision"}))
    tax = Taxonomy.from_file(f)
    assert classify("header", BBox(0, 0, 100, 10), tax) is SemanticClass.TITLE_HORIZONTAL
    assert classify("figure_caption", BBox(0, 0, 100, 10), tax) is SemanticClass.VISION
    assert classify("figure", BBox(0, 0, 100, 10), tax) is SemanticClass.VISION


def test_taxonomy_rejects_unknown_group():
    with pytest.raises(ValueError):
        Taxonomy({"text": "body"})


@pytest.mark.parametrize("coords", [(0, 0, 0, 5), (5, 0, 4, 5), (-1, 0, 5, 5), (0, 0, float("nan"), 3)])
def test_bbox_rejects_invalid(coords):
    with pytest.raises(ValueError):
        BBox(*coords)


def test_clamp_bbox():
    assert clamp_bbox([-5, 10, 120, 50], 100, 100) == ((0.0, 10.0, 100.0, 50.0), True)
    assert clamp_bbox([1, 2, 3, 4], 100, 100) == ((1.0, 2.0, 3.0, 4.0), False)


def test_box_distance():
    assert box_distance(BBox(0, 0, 10, 10), BBox(13, 14, 20, 20)) == pytest.approx(5.0)
    assert box_distance(BBox(0, 0, 10, 10), BBox(5, 5, 20, 20)) == 0.0


def test_page_rejects_duplicate_ids():
    with pytest.raises(ValueError):
        Page("p", 10, 10, [Block(0, BBox(0, 0, 1, 1), "text"), Block(0, BBox(2, 2, 3, 3), "text")])


def test_page_gt_order_and_scaling():
    page = Page("p", 10, 10, [Block("a", BBox(0, 5, 1, 6), "text", 1), Block("b", BBox(0, 0, 1, 1), "text", 0)])
    assert page.gt_order() == ["b", "a"]
    big = page.scaled(3)
    assert big.width == 30 and big.block("a").bbox == BBox(0, 15, 3, 18)


def test_order_result_indices():
    assert OrderResult("p", ["x", "y"]).indices() == {"x": 0, "y": 1}


def test_params_from_file(tmp_path):
    f = tmp_path / "cfg.json"
    f.write_text(json.dumps({"beta": 1.5, "edge_table": {"other": [1, 1, 1, 0.5]}}))
    p = Params.from_file(f, theta_v=0.5)
    assert (p.beta, p.theta_v, p.tau_overlap) == (1.5, 0.5, 0.3)
    assert p.edge_table["other"] == (1, 1, 1, 0.5)


coord = st.floats(0, 1000, allow_nan=False)
size = st.floats(0.5, 500, allow_nan=False)


@given(coord, coord, size, size, st.floats(0, 200), st.floats(0, 200))
def test_translation_consistency(x, y, w, h, dx, dy):
    b = BBox(x, y, x + w, y + h)
    t = b.translated(dx, dy)
    cx, cy = center(b)
    tx, ty = center(t)
    assert tx - cx == pytest.approx(dx, abs=1e-6) and ty - cy == pytest.approx(dy, abs=1e-6)
    assert aspect_ratio(t) == pytest.approx(aspect_ratio(b), rel=1e-6)


@given(st.sampled_from(["text", "title", "figure", "unknown", "table"]), coord, coord, size, size)
def test_classify_is_pure(label, x, y, w, h):
    b = BBox(x, y, x + w, y + h)
    assert classify(label, b) is classify(label, BBox(x, y, x + w, y + h))
