"""Static packed spatial index: STR-ordered leaves, implicit-tree levels.

Leaf entries are feature bounding boxes sorted by Sort-Tile-Recursive
packing (vertical slices by centre x, each slice by centre y).  Upper
levels union runs of ``fanout`` consecutive child boxes, so node ``i``
at level ``k`` always covers children ``[i*fanout, (i+1)*fanout)`` at
level ``k-1`` and no child pointers are stored.  Built once, queried
read-only; a box touching a query edge counts as intersecting.

Serialized form: the leaf-order-to-record-ordinal permutation as u32s,
then per level (leaves first) four double arrays: min x, min y, max x,
max y.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import CacheTruncatedError

FANOUT = 16

Box = tuple[float, float, float, float]


class PackedIndex:
    __slots__ = ("order", "levels", "fanout")

    def __init__(self, order: np.ndarray, levels: list[np.ndarray], fanout: int) -> None:
        self.order = order
        self.levels = levels
        self.fanout = fanout

    def __len__(self) -> int:
        return len(self.order)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level_counts(self) -> list[int]:
        return [len(level) for level in self.levels]

    def search(self, box: Box) -> np.ndarray:
        """Record ordinals whose box intersects ``box``, unsorted."""
        if not self.levels:
            return np.empty(0, dtype=np.uint32)
        qminx, qminy, qmaxx, qmaxy = box
        frontier = np.arange(len(self.levels[-1]), dtype=np.int64)
        for k in range(len(self.levels) - 1, -1, -1):
            boxes = self.levels[k][frontier]
            hit = (
                (boxes[:, 0] <= qmaxx)
                & (boxes[:, 2] >= qminx)
                & (boxes[:, 1] <= qmaxy)
                & (boxes[:, 3] >= qminy)
            )
            frontier = frontier[hit]
            if k == 0:
                break
            children = frontier[:, None] * self.fanout + np.arange(self.fanout)
            children = children.ravel()
            frontier = children[children < len(self.levels[k - 1])]
        return self.order[frontier]

    def to_bytes(self) -> bytes:
        parts = [np.ascontiguousarray(self.order, dtype="<u4").tobytes()]
        for level in self.levels:
            for col in range(4):
                parts.append(np.ascontiguousarray(level[:, col], dtype="<f8").tobytes())
        return b"".join(parts)


def build_index(bboxes: np.ndarray, fanout: int = FANOUT) -> PackedIndex:
    """Bulk-load the index over ``bboxes`` given in record-ordinal order."""
    n = len(bboxes)
    if n == 0:
        return PackedIndex(np.empty(0, dtype=np.uint32), [], fanout)
    bboxes = np.asarray(bboxes, dtype=np.float64).reshape(n, 4)
    cx = (bboxes[:, 0] + bboxes[:, 2]) * 0.5
    cy = (bboxes[:, 1] + bboxes[:, 3]) * 0.5
    pages = math.ceil(n / fanout)
    slice_cap = math.ceil(math.sqrt(pages)) * fanout
    by_x = np.argsort(cx, kind="stable")
    chunks = []
    for start in range(0, n, slice_cap):
        chunk = by_x[start : start + slice_cap]
        chunks.append(chunk[np.argsort(cy[chunk], kind="stable")])
    order = np.concatenate(chunks).astype(np.uint32)

    levels = [bboxes[order]]
    while len(levels[-1]) > 1:
        child = levels[-1]
        starts = np.arange(0, len(child), fanout)
        parent = np.empty((len(starts), 4), dtype=np.float64)
        parent[:, 0] = np.minimum.reduceat(child[:, 0], starts)
        parent[:, 1] = np.minimum.reduceat(child[:, 1], starts)
        parent[:, 2] = np.maximum.reduceat(child[:, 2], starts)
        parent[:, 3] = np.maximum.reduceat(child[:, 3], starts)
        levels.append(parent)
    return PackedIndex(order, levels, fanout)


def index_byte_length(count: int, levels: list[int]) -> int:
    return 4 * count + 32 * sum(levels)


def index_from_bytes(
    blob: bytes | memoryview, count: int, levels: list[int], fanout: int
) -> PackedIndex:
    if len(blob) != index_byte_length(count, levels):
        raise CacheTruncatedError("index blob does not match its declared shape")
    order = np.frombuffer(blob, dtype="<u4", count=count, offset=0).astype(np.uint32)
    pos = 4 * count
    arrays: list[np.ndarray] = []
    for n in levels:
        level = np.empty((n, 4), dtype=np.float64)
        for col in range(4):
            level[:, col] = np.frombuffer(blob, dtype="<f8", count=n, offset=pos)
            pos += 8 * n
        arrays.append(level)
    return PackedIndex(order, arrays, fanout)
