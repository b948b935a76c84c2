"""Overflow-checked integer reductions over numpy count arrays."""

from __future__ import annotations

import numpy as np

_INT64_SAFE = 2**62


def exact_sum(counts) -> int:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.size == 0:
        return 0
    if int(counts.max()) * counts.size < _INT64_SAFE:
        return int(counts.sum())
    return sum(int(c) for c in counts)


def exact_sum_squares(counts) -> int:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.size == 0:
        return 0
    m = int(counts.max())
    if m * m * counts.size < _INT64_SAFE:
        return int(np.dot(counts, counts))
    return sum(int(c) * int(c) for c in counts)


def merge_counts(keys: list[np.ndarray], counts: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Combine per-chunk (unique key, count) pairs into one sorted table."""
    if not keys:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    k = np.concatenate(keys)
    c = np.concatenate(counts).astype(np.int64)
    order = np.argsort(k, kind="stable")
    k, c = k[order], c[order]
    starts = np.flatnonzero(np.concatenate([[True], k[1:] != k[:-1]]))
    return k[starts], np.add.reduceat(c, starts)
