"""Packed spatial index: scan equivalence, shape, and serialization."""

import random

import numpy as np
import pytest

from islandatlas.errors import CacheTruncatedError
from islandatlas.smartcache.index import build_index, index_from_bytes

from oracles import scan_bbox, scan_bbox_loop


def random_boxes(rng: random.Random, n: int, extent: float = 1e6) -> np.ndarray:
    out = np.empty((n, 4))
    for i in range(n):
        x = rng.uniform(0.0, extent)
        y = rng.uniform(0.0, extent)
        w = rng.uniform(0.0, extent * 0.01)
        h = rng.uniform(0.0, extent * 0.01)
        out[i] = (x, y, x + w, y + h)
    return out


def query_windows(rng: random.Random, n: int, extent: float = 1e6):
    for _ in range(n):
        x = rng.uniform(-0.05 * extent, extent)
        y = rng.uniform(-0.05 * extent, extent)
        w = rng.uniform(0.0, extent * rng.choice([0.002, 0.02, 0.3, 1.1]))
        yield (x, y, x + w, y + w)


def test_matches_linear_scan_on_random_corpus():
    rng = random.Random(4021)
    boxes = random_boxes(rng, 3000)
    index = build_index(boxes)
    for window in query_windows(rng, 400):
        got = set(index.search(window).tolist())
        want = set(scan_bbox(boxes, *window).tolist())
        assert got == want


def test_matches_loop_scan_small():
    rng = random.Random(77)
    boxes = random_boxes(rng, 137)
    index = build_index(boxes)
    for window in query_windows(rng, 60):
        got = sorted(index.search(window).tolist())
        assert got == scan_bbox_loop(boxes.tolist(), *window)


def test_empty_index():
    index = build_index(np.empty((0, 4)))
    assert len(index) == 0
    assert index.depth == 0
    assert index.search((0.0, 0.0, 1.0, 1.0)).size == 0
    assert index.to_bytes() == b""


def test_single_entry_index():
    index = build_index(np.array([[1.0, 2.0, 3.0, 4.0]]))
    assert index.depth == 1
    assert index.search((0.0, 0.0, 10.0, 10.0)).tolist() == [0]
    assert index.search((5.0, 0.0, 10.0, 10.0)).size == 0


@pytest.mark.parametrize(
    "n,depth", [(1, 1), (16, 2), (17, 3), (256, 3), (257, 4), (5000, 5)]
)
def test_level_structure(n, depth):
    rng = random.Random(n)
    index = build_index(random_boxes(rng, n))
    assert index.depth == depth
    counts = index.level_counts()
    assert counts[0] == n
    assert counts[-1] == 1
    for upper, lower in zip(counts[1:], counts):
        assert upper == -(-lower // 16)


def test_touching_edges_count_as_hits():
    boxes = np.array([[0.0, 0.0, 10.0, 10.0], [20.0, 0.0, 30.0, 10.0]])
    index = build_index(boxes)
    assert sorted(index.search((10.0, 5.0, 15.0, 5.0)).tolist()) == [0]
    assert sorted(index.search((10.0, 10.0, 20.0, 20.0)).tolist()) == [0, 1]
    assert index.search((10.5, 11.0, 19.5, 20.0)).size == 0


def test_serialization_round_trip():
    rng = random.Random(99)
    boxes = random_boxes(rng, 500)
    index = build_index(boxes)
    blob = index.to_bytes()
    back = index_from_bytes(blob, len(index), index.level_counts(), index.fanout)
    assert back.order.tolist() == index.order.tolist()
    for a, b in zip(back.levels, index.levels):
        assert np.array_equal(a, b)
    for window in query_windows(rng, 50):
        assert set(back.search(window).tolist()) == set(index.search(window).tolist())


def test_serialization_rejects_wrong_length():
    index = build_index(np.array([[0.0, 0.0, 1.0, 1.0]]))
    blob = index.to_bytes()
    with pytest.raises(CacheTruncatedError):
        index_from_bytes(blob[:-8], 1, index.level_counts(), index.fanout)


def test_build_is_deterministic_with_ties():
    boxes = np.tile(np.array([[5.0, 5.0, 6.0, 6.0]]), (40, 1))
    a = build_index(boxes)
    b = build_index(boxes)
    assert a.to_bytes() == b.to_bytes()
    assert a.order.tolist() == list(range(40))


def test_build_is_deterministic_on_random_input():
    boxes = random_boxes(random.Random(5), 800)
    assert build_index(boxes).to_bytes() == build_index(boxes.copy()).to_bytes()
