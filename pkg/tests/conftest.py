import pytest

from xycutpp.model import BBox, Block, Page

# seven cells: two rows of two columns, a spanning cell, then one more two-column row
SPAN_BOXES = [
    (0, 100, 290, 300), (310, 100, 600, 300),
    (0, 320, 290, 500), (310, 320, 600, 500),
    (0, 520, 600, 600),
    (0, 620, 290, 800), (310, 620, 600, 800),
]
SPAN_GT = (1, 3, 2, 4, 5, 6, 7)


def make_page(boxes, labels=None, page_id="p", width=1000.0, height=1414.0, ids=None):
    labels = labels or ["text"] * len(boxes)
    ids = ids if ids is not None else list(range(len(boxes)))
    return Page(page_id, width, height, [Block(i, BBox(*b), l) for i, b, l in zip(ids, boxes, labels)])


@pytest.fixture
def spanning_page():
    blocks = [Block(i + 1, BBox(*b), "text") for i, b in enumerate(SPAN_BOXES)]
    return Page("spanning", 600, 820, blocks)


@pytest.fixture
def lshape_page():
    # wide text on top, tall text lower left, figure to its right reaching slightly into the top text
    blocks = [
        Block(1, BBox(400, 95, 600, 360), "figure"),
        Block(2, BBox(0, 0, 600, 100), "text"),
        Block(3, BBox(0, 105, 380, 500), "text"),
    ]
    return Page("lshape", 600, 520, blocks)
