"""Candidate noise-pattern enumeration for guess-and-check decoding.

Two query orders are provided.  "hamming" enumerates flip sets by ascending
Hamming weight, lexicographic within a weight, which is the natural order
for hard-detection guessing.  "logistic" enumerates by ascending logistic
weight, the sum of the 1-based reliability ranks of the flipped bits
(rank 1 = least reliable), ties broken by fewer flips first and then
lexicographically on the sorted rank tuple; this rank-statistic order tracks
descending pattern likelihood without using reliability magnitudes.

Patterns live in the order's reference frame: "hamming" indexes bits
directly, "logistic" indexes the ascending-reliability permutation of the
bits (index 0 = least reliable).  Enumerations are cached per (kind, n) and
grown one whole weight class at a time, so a sequence can be resumed from
any global index without recomputing the prefix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QueryOrder",
    "QueryPattern",
    "query_patterns",
    "realized_positions",
    "pattern_log_probability",
    "order_table",
]

_KINDS = ("hamming", "logistic")


@dataclass(frozen=True)
class QueryOrder:
    """A pattern enumeration: ordering rule plus block length."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"block length must be positive, got {self.n}")


@dataclass(frozen=True)
class QueryPattern:
    """One flip set.

    ``positions`` are 0-based ascending indices in the order's reference
    frame; ``weight`` is the ordering weight (Hamming weight for "hamming",
    logistic weight for "logistic").
    """

    positions: tuple
    weight: int


def _partitions_fixed(total, m, lo, hi):
    """Ascending m-tuples of distinct ints in [lo, hi] summing to total, lex order."""
    if m == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, hi + 1):
        rest = total - first
        min_rest = (m - 1) * first + m * (m - 1) // 2
        if min_rest > rest:
            break
        max_rest = (m - 1) * hi - (m - 2) * (m - 1) // 2
        if max_rest < rest:
            continue
        for tail in _partitions_fixed(rest, m - 1, first + 1, hi):
            yield (first,) + tail


class _OrderTable:
    """Materialised pattern sequence for one (kind, n), grown class by class.

    ``flat`` holds the concatenated 1-based frame indices of every pattern,
    ``offsets[i]:offsets[i+1]`` delimits pattern i, so the arrays feed
    numpy ``reduceat`` calls directly.
    """

    def __init__(self, kind, n):
        self.kind = kind
        self.n = n
        self.flat = np.zeros(0, dtype=np.int32)
        self.offsets = np.zeros(1, dtype=np.int64)
        self.count = 0
        self._next_class = 0
        self._max_class = n if kind == "hamming" else n * (n + 1) // 2

    @property
    def exhausted(self):
        return self._next_class > self._max_class

    def _class_members(self, cls):
        n = self.n
        if cls == 0:
            return [()]
        if self.kind == "hamming":
            return list(itertools.combinations(range(1, n + 1), cls))
        members = []
        m = 1
        while m <= n and m * (m + 1) // 2 <= cls:
            if cls <= m * (2 * n - m + 1) // 2:
                members.extend(_partitions_fixed(cls, m, 1, n))
            m += 1
        return members

    def extend_to(self, count):
        """Grow the table until it holds at least ``count`` patterns."""
        if count <= self.count or self.exhausted:
            return
        new_flat = [self.flat]
        new_offsets = [self.offsets]
        tail = int(self.offsets[-1])
        while self.count < count and not self.exhausted:
            members = self._class_members(self._next_class)
            self._next_class += 1
            if not members:
                continue
            lengths = np.fromiter((len(p) for p in members), dtype=np.int64, count=len(members))
            vals = np.fromiter(itertools.chain.from_iterable(members), dtype=np.int32,
                               count=int(lengths.sum()))
            new_flat.append(vals)
            new_offsets.append(tail + np.cumsum(lengths))
            tail += int(lengths.sum())
            self.count += len(members)
        self.flat = np.concatenate(new_flat)
        self.offsets = np.concatenate(new_offsets)

    def pattern(self, i):
        if i >= self.count:
            raise IndexError(i)
        vals = self.flat[self.offsets[i]:self.offsets[i + 1]]
        if self.kind == "hamming":
            weight = len(vals)
        else:
            weight = int(vals.sum())
        return QueryPattern(positions=tuple(int(v) - 1 for v in vals), weight=weight)

    def slice_arrays(self, start, stop):
        """Frame indices and local offsets for patterns [start, stop).

        Returns (values, offsets, actual_stop) where ``values`` are 1-based
        frame indices, ``offsets`` has length actual_stop - start + 1 and is
        relative to ``values``, and actual_stop <= stop if the order ran out.
        """
        self.extend_to(stop)
        stop = min(stop, self.count)
        off = self.offsets[start:stop + 1]
        vals = self.flat[off[0]:off[-1]]
        return vals, (off - off[0]).astype(np.int64), stop


_TABLE_CACHE = {}


def order_table(order):
    """Shared cached table for this order (grown lazily, never shrunk)."""
    key = (order.kind, order.n)
    table = _TABLE_CACHE.get(key)
    if table is None:
        table = _OrderTable(order.kind, order.n)
        _TABLE_CACHE[key] = table
    return table


def query_patterns(order, start=0):
    """Yield patterns in query order, beginning at global index ``start``.

    The sequence is a pure function of (kind, n), so iteration can stop and
    resume at any index; nothing about an observation is captured.
    """
    table = order_table(order)
    i = int(start)
    while True:
        if i >= table.count:
            table.extend_to(i + 1024)
            if i >= table.count:
                return
        yield table.pattern(i)
        i += 1


def realized_positions(pattern, order, obs):
    """Map a pattern to actual bit positions for one observation."""
    if order.kind == "hamming":
        return tuple(pattern.positions)
    ranks = obs.ranks
    return tuple(sorted(int(ranks[p]) for p in pattern.positions))


def pattern_log_probability(obs, positions):
    """Natural-log probability that the noise flipped exactly ``positions``.

    With per-bit flip probabilities B_i = e^-l_i / (1 + e^-l_i) this is
    sum(log(1-B)) + sum_flipped(log B - log(1-B)), and log B - log(1-B)
    is exactly -l, so no B is ever formed explicitly.
    """
    base = -float(np.sum(np.log1p(np.exp(-obs.reliab))))
    positions = list(positions)
    if positions:
        base -= float(np.sum(obs.reliab[positions]))
    return base
