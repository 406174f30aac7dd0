"""Pattern enumeration: ordering rules, completeness, resumability."""

import itertools
import math

import numpy as np
import pytest

from softgrand.channel import SoftObservation
from softgrand.patterns import (QueryOrder, QueryPattern, _partitions_fixed,
                                order_table, pattern_log_probability,
                                query_patterns, realized_positions)


def take(order, count, start=0):
    return list(itertools.islice(query_patterns(order, start=start), count))


class TestOrdering:
    def test_logistic_n4_full_sequence(self):
        # Derived by hand: sort all 16 subsets by (rank sum, size, lex).
        got = [tuple(p + 1 for p in pat.positions)
               for pat in take(QueryOrder("logistic", 4), 16)]
        assert got == [(), (1,), (2,), (3,), (1, 2), (4,), (1, 3), (1, 4),
                       (2, 3), (2, 4), (1, 2, 3), (3, 4), (1, 2, 4),
                       (1, 3, 4), (2, 3, 4), (1, 2, 3, 4)]

    def test_hamming_n4_full_sequence(self):
        got = [tuple(p + 1 for p in pat.positions)
               for pat in take(QueryOrder("hamming", 4), 16)]
        assert got == [(), (1,), (2,), (3,), (4,), (1, 2), (1, 3), (1, 4),
                       (2, 3), (2, 4), (3, 4), (1, 2, 3), (1, 2, 4),
                       (1, 3, 4), (2, 3, 4), (1, 2, 3, 4)]

    def test_weights_reported(self):
        pats = take(QueryOrder("logistic", 5), 32)
        for pat in pats:
            assert pat.weight == sum(p + 1 for p in pat.positions)
        pats = take(QueryOrder("hamming", 5), 32)
        for pat in pats:
            assert pat.weight == len(pat.positions)

    @pytest.mark.parametrize("kind", ["hamming", "logistic"])
    def test_weight_monotone(self, kind):
        pats = take(QueryOrder(kind, 10), 1 << 10)
        weights = [p.weight for p in pats]
        assert all(a <= b for a, b in zip(weights, weights[1:]))

    def test_logistic_tie_break(self):
        # within a weight class: fewer flips first, then lex on rank tuples
        pats = take(QueryOrder("logistic", 8), 200)
        by_weight = {}
        for p in pats:
            by_weight.setdefault(p.weight, []).append(p.positions)
        for members in by_weight.values():
            keyed = [(len(m), m) for m in members]
            assert keyed == sorted(keyed)

    def test_hamming_lex_within_weight(self):
        pats = take(QueryOrder("hamming", 8), 256)
        by_weight = {}
        for p in pats:
            by_weight.setdefault(p.weight, []).append(p.positions)
        for members in by_weight.values():
            assert members == sorted(members)


class TestCompleteness:
    @pytest.mark.parametrize("kind", ["hamming", "logistic"])
    @pytest.mark.parametrize("n", [4, 7, 10, 12])
    def test_bijective_enumeration(self, kind, n):
        pats = take(QueryOrder(kind, n), 1 << n)
        seen = {p.positions for p in pats}
        assert len(pats) == 1 << n
        assert len(seen) == 1 << n
        # generator stops exactly at exhaustion
        tail = take(QueryOrder(kind, n), 5, start=(1 << n) - 1)
        assert len(tail) == 1


class TestResumability:
    @pytest.mark.parametrize("kind", ["hamming", "logistic"])
    def test_start_offset_matches_prefix_skip(self, kind):
        order = QueryOrder(kind, 16)
        full = take(order, 900)
        for start in (0, 1, 17, 255, 256, 777):
            assert take(order, 10, start=start) == full[start:start + 10]


class TestPartitions:
    def test_distinct_ascending_and_sum(self):
        for total in range(0, 25):
            for m in range(0, 6):
                for tup in _partitions_fixed(total, m, 1, 9):
                    assert len(tup) == m
                    assert sum(tup) == total
                    assert all(a < b for a, b in zip(tup, tup[1:]))
                    assert all(1 <= x <= 9 for x in tup)

    def test_counts_against_brute_force(self):
        for total in range(0, 20):
            got = sum(1 for m in range(0, 7)
                      for _ in _partitions_fixed(total, m, 1, 6))
            brute = 0
            for size in range(0, 7):
                for combo in itertools.combinations(range(1, 7), size):
                    brute += sum(combo) == total
            assert got == brute


class TestTableInternals:
    def test_slice_arrays_consistent_with_patterns(self):
        table = order_table(QueryOrder("logistic", 9))
        vals, off, stop = table.slice_arrays(37, 81)
        assert stop == 81
        for i in range(81 - 37):
            seg = vals[off[i]:off[i + 1]]
            assert tuple(int(v) - 1 for v in seg) == table.pattern(37 + i).positions

    def test_cache_shared(self):
        assert order_table(QueryOrder("hamming", 6)) is order_table(QueryOrder("hamming", 6))


class TestPatternProbability:
    def test_matches_direct_product(self):
        rng = np.random.default_rng(5)
        flips = rng.uniform(0.01, 0.5, size=12)
        hard = np.zeros(12, dtype=np.uint8)
        obs = SoftObservation.from_flip_probs(hard, flips)
        for _ in range(100):
            size = int(rng.integers(0, 13))
            pos = sorted(rng.choice(12, size=size, replace=False).tolist())
            direct = np.prod([flips[i] if i in pos else 1 - flips[i]
                              for i in range(12)])
            assert pattern_log_probability(obs, pos) == pytest.approx(
                math.log(direct), rel=1e-12)

    def test_empty_pattern(self):
        obs = SoftObservation.from_flip_probs(np.zeros(4, dtype=np.uint8), 0.25)
        assert pattern_log_probability(obs, []) == pytest.approx(4 * math.log(0.75))


class TestRealizedPositions:
    def test_logistic_maps_through_ranks(self):
        obs = SoftObservation.from_channel_llrs([5.0, -0.5, 2.0, -8.0])
        # ascending reliability: bit 1 (0.5), bit 2 (2.0), bit 0 (5.0), bit 3
        order = QueryOrder("logistic", 4)
        pat = QueryPattern(positions=(0, 1), weight=3)
        assert realized_positions(pat, order, obs) == (1, 2)

    def test_hamming_is_identity(self):
        obs = SoftObservation.from_channel_llrs([5.0, -0.5, 2.0, -8.0])
        pat = QueryPattern(positions=(0, 3), weight=2)
        assert realized_positions(pat, QueryOrder("hamming", 4), obs) == (0, 3)


class TestValidation:
    def test_kind_guard(self):
        with pytest.raises(ValueError):
            QueryOrder("ml", 8)

    def test_length_guard(self):
        with pytest.raises(ValueError):
            QueryOrder("hamming", 0)
