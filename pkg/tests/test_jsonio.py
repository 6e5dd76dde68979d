import json
import logging

import pytest
from hypothesis import given, strategies as st

from xycutpp.errors import DuplicateIndex, SchemaError
from xycutpp.jsonio import dump_page, page_to_dict, parse_page


def doc(blocks, **extra):
    d = {"page_id": "p1", "page_size": [100, 200], "blocks": blocks}
    d.update(extra)
    return json.dumps(d)


def test_minimal_document():
    page = parse_page(doc([{"bbox": [1, 2, 30, 40], "label": "text"}]).encode())
    assert len(page.blocks) == 1
    assert page.blocks[0].id == 0 and page.blocks[0].bbox.as_list() == [1, 2, 30, 40]
    assert (page.width, page.height) == (100, 200)


def test_duplicate_index():
    blocks = [{"bbox": [0, 0, 5, 5], "label": "text", "index": i} for i in (0, 0, 1)]
    with pytest.raises(DuplicateIndex):
        parse_page(doc(blocks))


def test_out_of_range_index():
    blocks = [{"bbox": [0, 0, 5, 5], "label": "text", "index": i} for i in (0, 2)]
    with pytest.raises(DuplicateIndex):
        parse_page(doc(blocks))


def test_inverted_bbox_names_block():
    blocks = [{"bbox": [1, 1, 5, 5], "label": "text"}, {"bbox": [10, 10, 5, 20], "label": "text"}]
    with pytest.raises(SchemaError) as err:
        parse_page(doc(blocks))
    assert err.value.path == "blocks[1].bbox"


@pytest.mark.parametrize("text,path", [
    ("[]", "$"),
    ("{not json", "$"),
    (json.dumps({"page_size": [1, 1], "blocks": []}), "page_id"),
    (json.dumps({"page_id": "a", "page_size": [0, 1], "blocks": []}), "page_size"),
    (json.dumps({"page_id": "a", "page_size": [1, 1], "blocks": []}), "blocks"),
    (doc([{"bbox": [0, 0, 1], "label": "t"}]), "blocks[0].bbox"),
    (doc([{"bbox": [0, 0, 1, 1]}]), "blocks[0].label"),
    (doc([{"bbox": [0, 0, 1, 1], "label": "t", "index": "0"}]), "blocks[0].index"),
    (doc([{"bbox": [0, 0, 1, 1], "label": "t", "index": 0}, {"bbox": [0, 0, 1, 1], "label": "t"}]), "blocks[1].index"),
    (doc([{"bbox": [300, 300, 400, 400], "label": "t"}]), "blocks[0].bbox"),
])
def test_schema_errors_carry_paths(text, path):
    with pytest.raises(SchemaError) as err:
        parse_page(text)
    assert err.value.path == path


def test_non_utf8():
    with pytest.raises(SchemaError):
        parse_page(b"\xff\xfe")


def test_overflowing_box_is_clamped(caplog):
    with caplog.at_level(logging.WARNING):
        page = parse_page(doc([{"bbox": [-3, 10, 120, 50], "label": "text"}]))
    assert page.blocks[0].bbox.as_list() == [0, 10, 100, 50]
    assert "clamped" in caplog.text


def test_explicit_ids_are_kept():
    page = parse_page(doc([{"bbox": [0, 0, 5, 5], "label": "t", "id": "a"}, {"bbox": [0, 9, 5, 15], "label": "t", "id": "b"}]))
    assert [b.id for b in page.blocks] == ["a", "b"]
    assert [b["id"] for b in page_to_dict(page)["blocks"]] == ["a", "b"]


def test_float_coordinates_kept_as_reals():
    page = parse_page(doc([{"bbox": [0.5, 1.25, 5.75, 9.125], "label": "t"}]))
    assert page.blocks[0].bbox.as_list() == [0.5, 1.25, 5.75, 9.125]


def test_order_assigns_indices():
    page = parse_page(doc([{"bbox": [0, 50, 5, 55], "label": "t"}, {"bbox": [0, 0, 5, 5], "label": "t"}]))
    out = json.loads(dump_page(page, order=[1, 0]))
    assert [b["index"] for b in out["blocks"]] == [1, 0]


coord = st.integers(0, 90) | st.floats(0, 90, allow_nan=False).map(lambda v: round(v, 3))


@st.composite
def documents(draw):
    n = draw(st.integers(1, 8))
    blocks = []
    for _ in range(n):
        x, y = draw(coord), draw(coord)
        w, h = draw(st.integers(1, 10)), draw(st.integers(1, 10))
        blocks.append({"bbox": [x, y, x + w, y + h], "label": draw(st.sampled_from(["text", "title", "figure"]))})
    if draw(st.booleans()):
        idx = draw(st.permutations(list(range(n))))
        for b, i in zip(blocks, idx):
            b["index"] = i
    return {"page_id": draw(st.text(min_size=1, max_size=8)), "page_size": [100, 200], "blocks": blocks}


@given(documents())
def test_round_trip(d):
    page = parse_page(json.dumps(d))
    again = json.loads(dump_page(page))
    assert again == d
    assert parse_page(json.dumps(again)) == page
