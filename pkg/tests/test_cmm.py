import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from xycutpp.cmm import (
    AFTER,
    BEFORE,
    SELF,
    DEFAULT_EDGE_TABLE,
    Entry,
    best_anchor,
    distance,
    dynamic_weights,
    edge_weights,
    match_all,
    phi,
    semantic_filter_pass,
)
from xycutpp.mgs import Orientation
from xycutpp.model import BBox, Block, Params, SemanticClass as SC
from xycutpp.pipeline import order_page

from conftest import SPAN_GT, make_page


@pytest.mark.parametrize("w,h,expected", [
    (1000, 800, (1_000_000, 1000, 1, 0.001)),
    (1, 1, (1, 1, 1, 1)),
    (600, 800, (640_000, 800, 1, 0.00125)),
])
def test_dynamic_weights(w, h, expected):
    assert dynamic_weights(w, h) == pytest.approx(expected)


@given(st.floats(1.001, 1e5), st.floats(1.001, 1e5))
def test_weight_ladder_is_strict(w, h):
    w1, w2, w3, w4 = dynamic_weights(w, h)
    assert w1 > w2 > w3 > w4 > 0


@pytest.mark.parametrize("cls,expected", [
    (SC.TITLE_HORIZONTAL, (1, 0.1, 0.1, 1)),
    (SC.TITLE_VERTICAL, (0.2, 0.1, 1, 1)),
    (SC.CROSS_LAYOUT, (1, 1, 0.1, 1)),
    (SC.VISION, (1, 1, 1, 0.1)),
    (SC.OTHER, (1, 1, 1, 0.1)),
])
def test_edge_weights(cls, expected):
    assert edge_weights(cls) == expected


def test_edge_table_override():
    table = dict(DEFAULT_EDGE_TABLE, other=(2, 2, 2, 2))
    assert edge_weights(SC.VISION, table) == (2, 2, 2, 2)


def test_phi_direction_mismatch():
    assert phi(BBox(0, 0, 100, 10), BBox(0, 20, 10, 100), SC.OTHER)[0] == 1.0


def test_phi_low_overlap_is_penalised():
    # x-extents overlap by 20 of a 180 union -> IoU below 0.3
    assert phi(BBox(0, 0, 100, 10), BBox(80, 20, 180, 30), SC.OTHER)[0] == 1.0
    assert phi(BBox(0, 0, 100, 10), BBox(20, 20, 120, 30), SC.OTHER)[0] == 0.0


def test_phi_stacked_neighbours_use_along_column_distance():
    # shared x-extent only: the centre gap along y is the meaningful distance
    f = phi(BBox(0, 0, 100, 10), BBox(0, 20, 100, 30), SC.OTHER)
    assert f == (0.0, 20.0, 20.0, 0.0)


def test_phi2_branches():
    p = BBox(0, 0, 10, 10)
    assert phi(p, BBox(5, 5, 25, 25), SC.OTHER)[1] == 10.0      # both axes overlap: min(10, 10)
    assert phi(p, BBox(30, 2, 40, 12), SC.OTHER)[1] == 30.0     # side by side: dx
    assert phi(p, BBox(30, 40, 40, 50), SC.OTHER)[1] == 70.0    # diagonal: dx + dy


def test_phi3_cross_layout_below_anchor():
    f = phi(BBox(0, 500, 100, 520), BBox(0, 200, 100, 300), SC.CROSS_LAYOUT)
    assert f[2] == -300
    # other classes and cross-layout blocks above the anchor use y1'
    assert phi(BBox(0, 500, 100, 520), BBox(0, 200, 100, 300), SC.OTHER)[2] == 200
    assert phi(BBox(0, 0, 100, 20), BBox(0, 200, 100, 300), SC.CROSS_LAYOUT)[2] == 200


def test_distance_worked_value():
    p = o = BBox(5, 20, 105, 30)
    assert phi(p, o, SC.OTHER) == (0.0, 0.0, 20.0, 5.0)
    # w = (1e6, 1e3, 1, 1e-3), e = (1, 1, 1, 0.1)
    assert distance(p, o, SC.OTHER, 1000, 800) == pytest.approx(20 + 1e-3 * 0.1 * 5, abs=1e-12)


def test_distance_phi1_dominates():
    assert distance(BBox(0, 0, 100, 10), BBox(0, 20, 10, 100), SC.OTHER, 1000, 800) >= 1_000_000


def entries(*boxes, cls=SC.OTHER):
    return [Entry(Block(i, BBox(*b), "text"), cls, True) for i, b in enumerate(boxes)]


def test_title_matches_paragraph_below():
    snap = entries((100, 200, 900, 400), (100, 420, 900, 600))
    title = Block("t", BBox(100, 160, 500, 190), "title")
    new, pairs, deferred = semantic_filter_pass(snap, [(title, SC.TITLE_HORIZONTAL)], 1000, 1414)
    assert pairs[0].nearest.id == 0 and pairs[0].side == BEFORE and not deferred


def test_empty_pending_leaves_target():
    snap = entries((0, 0, 10, 10))
    assert semantic_filter_pass(snap, [], 100, 100) == ([], [], [])


def test_figure_matches_caption_by_exhaustive_minimum():
    snap = entries((100, 100, 900, 300), (100, 520, 700, 550), (100, 800, 900, 1000))
    fig = Block("f", BBox(100, 330, 700, 500), "figure")
    idx, d = best_anchor(fig, SC.VISION, snap, 1000, 1414)
    brute = min(range(3), key=lambda i: distance(fig.bbox, snap[i].block.bbox, SC.VISION, 1000, 1414))
    assert idx == brute == 1
    assert d == pytest.approx(distance(fig.bbox, snap[1].block.bbox, SC.VISION, 1000, 1414))


def test_match_all_without_masked_keeps_backbone():
    bb = [Block(i, BBox(0, 100 * i, 100, 100 * i + 50), "text") for i in range(3)]
    assert match_all(bb, [], 1000, 1000).order == (0, 1, 2)


def test_same_slot_sorted_by_priority_then_position():
    # a title and a figure both land directly above the same paragraph
    bb = [Block("p", BBox(100, 600, 900, 900), "text")]
    masked = [
        (Block("f", BBox(100, 300, 700, 560), "figure"), SC.VISION),
        (Block("t", BBox(100, 200, 500, 230), "title"), SC.TITLE_HORIZONTAL),
    ]
    res = match_all(bb, masked, 1000, 1414)
    assert res.order == ("t", "f", "p")


def test_match_all_all_masked_page_seeds_anchors():
    masked = [
        (Block("fig", BBox(100, 100, 900, 500), "figure"), SC.VISION),
        (Block("t2", BBox(100, 700, 500, 730), "title"), SC.TITLE_HORIZONTAL),
        (Block("t1", BBox(100, 20, 500, 50), "title"), SC.TITLE_HORIZONTAL),
    ]
    res = match_all([], masked, 1000, 1414)
    assert res.order == ("t1", "fig", "t2")


def test_block_without_higher_priority_anchor_is_deferred():
    snap = [Entry(Block("v", BBox(0, 0, 10, 10), "figure"), SC.VISION, False)]
    new, pairs, deferred = semantic_filter_pass(snap, [(Block("w", BBox(0, 20, 10, 30), "figure"), SC.VISION)], 100, 100)
    assert [b.id for b in deferred] == ["w"] and not new


def test_spanning_fixture(spanning_page):
    assert order_page(spanning_page).order == SPAN_GT


def test_sort_key_uses_side_then_priority():
    b = Block(0, BBox(0, 10, 5, 15), "x")
    before = Entry(b, SC.VISION, False, 3, BEFORE).sort_key()
    after = Entry(b, SC.TITLE_HORIZONTAL, False, 3, AFTER).sort_key()
    own = Entry(b, SC.OTHER, True).sort_key(3)
    assert before < own < after


# -- properties on random pages

box_st = st.tuples(st.integers(0, 900), st.integers(0, 1300), st.integers(5, 300), st.integers(5, 200))
label_st = st.sampled_from(["text", "text", "title", "figure", "table"])


@st.composite
def pages(draw):
    raw = draw(st.lists(st.tuples(box_st, label_st), min_size=1, max_size=14))
    return make_page([(x, y, x + w, y + h) for (x, y, w, h), _ in raw], [lab for _, lab in raw],
                     width=1300, height=1600)


@given(pages())
@settings(max_examples=150, deadline=None)
def test_output_is_permutation(page):
    res = order_page(page)
    assert sorted(res.order) == sorted(b.id for b in page.blocks)


@given(pages())
@settings(max_examples=100, deadline=None)
def test_pairs_respect_their_side(page):
    from xycutpp.mgs import mgs_order
    from xycutpp.premask import build_premask

    r = mgs_order(page, build_premask(page))
    by = {b.id: b for b in page.blocks}
    res = match_all([by[a.block_id] for a in r.backbone], r.masked, page.width, page.height,
                    Params(), r.orientation)
    pos = {bid: i for i, bid in enumerate(res.order)}
    for pair in res.pairs:
        if pair.side == AFTER:
            assert pos[pair.pending.id] > pos[pair.anchor.id]
        else:
            assert pos[pair.pending.id] < pos[pair.anchor.id]
    # the target only grows: every anchor (backbone or seeded) plus every matched block
    anchors = sum(e.anchor for e in res.entries)
    assert anchors >= len(r.backbone)
    assert len(res.entries) == anchors + len(res.pairs)
    assert len(res.entries) + len(res.unmatched) == len(page.blocks)


@given(st.lists(box_st, min_size=1, max_size=12), box_st, st.sampled_from([SC.OTHER, SC.VISION, SC.TITLE_HORIZONTAL]))
def test_early_exit_is_exact_for_non_negative_terms(raw, pb, cls):
    snap = entries(*[(x, y, x + w, y + h) for x, y, w, h in raw])
    x, y, w, h = pb
    p = Block("p", BBox(x, y, x + w, y + h), "title")
    on = best_anchor(p, cls, snap, 1300, 1600, Params())
    off = best_anchor(p, cls, snap, 1300, 1600, Params(early_termination=False))
    assert on[0] == off[0]
