"""Confidence accounting: running sums, wrong-hit model, LLR reports."""

import math

import numpy as np
import pytest

from softgrand.channel import SoftObservation
from softgrand.patterns import QueryOrder, pattern_log_probability, query_patterns
from softgrand.softout import (ConfidenceLedger, conditional_llr, confidence_llr,
                               log_p_incorrect_cum, p_incorrect_cum,
                               p_incorrect_cum_exact, record_query)


class TestRecordQuery:
    def test_first_query_sets_sum(self):
        ledger = ConfidenceLedger(redundancy=4)
        record_query(ledger, -2.5)
        assert ledger.q == 1
        assert ledger.cum_correct_log == pytest.approx(-2.5)
        assert ledger.last_pattern_log == -2.5

    def test_normalizes_over_full_enumeration(self):
        # n=2, both flip probabilities 0.1: four patterns sum to one
        obs = SoftObservation.from_flip_probs(np.zeros(2, dtype=np.uint8), 0.1)
        ledger = ConfidenceLedger(redundancy=1)
        for pos in ((), (0,), (1,), (0, 1)):
            record_query(ledger, pattern_log_probability(obs, pos))
        assert math.exp(ledger.cum_correct_log) == pytest.approx(1.0, abs=1e-12)

    def test_matches_direct_sum_oracle(self):
        rng = np.random.default_rng(8)
        flips = rng.uniform(0.005, 0.5, size=8)
        obs = SoftObservation.from_flip_probs(np.zeros(8, dtype=np.uint8), flips)
        order = QueryOrder("logistic", 8)
        ledger = ConfidenceLedger(redundancy=3)
        direct = 0.0
        for i, pat in enumerate(query_patterns(order)):
            pos = list(pat.positions)
            direct += float(np.prod([flips[j] if j in pos else 1 - flips[j]
                                     for j in range(8)]))
            record_query(ledger, pattern_log_probability(obs, pos))
            assert math.exp(ledger.cum_correct_log) == pytest.approx(direct, abs=1e-10)
            if i >= 100:
                break

    def test_q_increments_by_one(self):
        ledger = ConfidenceLedger(redundancy=2)
        for expect in (1, 2, 3):
            record_query(ledger, -1.0)
            assert ledger.q == expect

    def test_rejects_positive_log_probability(self):
        ledger = ConfidenceLedger(redundancy=2)
        with pytest.raises(ValueError):
            record_query(ledger, 1e-9)
        with pytest.raises(ValueError):
            record_query(ledger, math.nan)

    def test_accepts_zero_mass(self):
        ledger = ConfidenceLedger(redundancy=2)
        record_query(ledger, -math.inf)
        assert ledger.cum_correct_log == -math.inf
        assert ledger.q == 1

    def test_nondecreasing_and_bounded(self):
        # disjoint-event masses from a genuine enumeration keep the running
        # sum monotone and within [0, 1] at every step
        rng = np.random.default_rng(3)
        flips = rng.uniform(0.01, 0.49, size=8)
        obs = SoftObservation.from_flip_probs(np.zeros(8, dtype=np.uint8), flips)
        ledger = ConfidenceLedger(redundancy=6)
        prev = -math.inf
        for pat in query_patterns(QueryOrder("logistic", 8)):
            record_query(ledger, pattern_log_probability(obs, pat.positions))
            assert ledger.cum_correct_log >= prev
            assert math.exp(ledger.cum_correct_log) <= 1 + 1e-9
            prev = ledger.cum_correct_log
            if ledger.q >= 50:
                break


class TestIncorrectModel:
    def test_no_queries(self):
        assert p_incorrect_cum(12, 0) == 0.0
        assert log_p_incorrect_cum(12, 0) == -math.inf

    def test_single_fair_query(self):
        assert p_incorrect_cum(1, 1) == pytest.approx(0.5)

    def test_frozen_high_precision_point(self):
        # 1 - (1 - 2^-12)^4096, mpmath 40-digit reference
        assert p_incorrect_cum(12, 4096) == pytest.approx(0.6321654705556539,
                                                          rel=1e-13)

    def test_tiny_probability_relative_accuracy(self):
        assert p_incorrect_cum(40, 1) == pytest.approx(9.0949470177292824e-13,
                                                       rel=1e-12)
        assert p_incorrect_cum(40, 1000) == pytest.approx(9.0949470135975152e-10,
                                                          rel=1e-12)

    def test_log_form_consistent(self):
        for r in (1, 5, 12, 30):
            for q in (1, 2, 100, 4096, 10 ** 7):
                lin = p_incorrect_cum(r, q)
                assert math.exp(log_p_incorrect_cum(r, q)) == pytest.approx(
                    lin, rel=1e-12)

    def test_monotone_and_limits(self):
        vals = [p_incorrect_cum(12, q) for q in range(0, 20000, 37)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert all(0 < v < 1 for v in vals[1:])
        assert p_incorrect_cum(12, 10 ** 9) == pytest.approx(1.0, abs=1e-12)

    def test_guards(self):
        with pytest.raises(ValueError):
            p_incorrect_cum(0, 5)
        with pytest.raises(ValueError):
            p_incorrect_cum(12, -1)

    def test_exact_codebook_variant(self):
        assert p_incorrect_cum_exact(8, 4, 16) == pytest.approx(
            0.64541241301267597, rel=1e-13)
        assert p_incorrect_cum_exact(8, 4, 0) == 0.0
        # differs from the simple form by O(2^-n): invisible at n=128
        assert p_incorrect_cum_exact(128, 116, 4096) == pytest.approx(
            p_incorrect_cum(12, 4096), rel=1e-13)
        with pytest.raises(ValueError):
            p_incorrect_cum_exact(8, 8, 1)


class TestConfidenceLlr:
    def test_equal_hypotheses_zero(self):
        ledger = ConfidenceLedger(redundancy=12)
        record_query(ledger, math.log(p_incorrect_cum(12, 1)))
        assert confidence_llr(ledger).llr_bits == pytest.approx(0.0, abs=1e-12)

    def test_four_to_one_is_two_bits(self):
        ledger = ConfidenceLedger(redundancy=12)
        record_query(ledger, math.log(4 * p_incorrect_cum(12, 1)))
        assert confidence_llr(ledger).llr_bits == pytest.approx(2.0, abs=1e-12)

    def test_report_fields_consistent(self):
        ledger = ConfidenceLedger(redundancy=5)
        record_query(ledger, -3.0)
        record_query(ledger, -4.0)
        rep = confidence_llr(ledger)
        assert rep.q == 2
        assert rep.llr_bits == pytest.approx(
            math.log2(rep.p_correct_cum) - math.log2(rep.p_incorrect_cum),
            abs=1e-9)

    def test_first_query_high_snr_is_large_positive(self):
        # clean [128,116]-style block: all flip probabilities tiny
        obs = SoftObservation.from_flip_probs(np.zeros(128, dtype=np.uint8), 1e-4)
        ledger = ConfidenceLedger(redundancy=12)
        record_query(ledger, pattern_log_probability(obs, []))
        rep = confidence_llr(ledger)
        direct = (math.log2(0.9999 ** 128) -
                  math.log2(p_incorrect_cum(12, 1)))
        assert rep.llr_bits == pytest.approx(direct, rel=1e-9)
        assert rep.llr_bits > 11.9

    def test_requires_a_query(self):
        with pytest.raises(ValueError):
            confidence_llr(ConfidenceLedger(redundancy=3))

    def test_zero_mass_queries_apply_monotone_pressure(self):
        ledger = ConfidenceLedger(redundancy=8)
        record_query(ledger, -5.0)
        before = confidence_llr(ledger).llr_bits
        record_query(ledger, -math.inf)
        after = confidence_llr(ledger).llr_bits
        assert after < before


class TestConditionalLlr:
    def test_symmetric_toy_is_zero(self):
        r = 6
        ledger = ConfidenceLedger(redundancy=r)
        record_query(ledger, math.log(2.0 ** -r))
        assert conditional_llr(ledger) == pytest.approx(0.0, abs=1e-12)

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(4)
        flips = rng.uniform(0.01, 0.5, size=8)
        obs = SoftObservation.from_flip_probs(np.zeros(8, dtype=np.uint8), flips)
        r = 4
        ledger = ConfidenceLedger(redundancy=r)
        for i, pat in enumerate(query_patterns(QueryOrder("logistic", 8))):
            record_query(ledger, pattern_log_probability(obs, pat.positions))
            got = conditional_llr(ledger)
            q = ledger.q
            g_eq = math.exp(ledger.last_pattern_log)
            g_gt = 1.0 - math.exp(ledger.cum_correct_log)
            u_eq = (1 - 2.0 ** -r) ** (q - 1) * 2.0 ** -r
            u_gt = (1 - 2.0 ** -r) ** q
            want = math.log2(g_eq * u_gt / (u_eq * g_gt))
            assert got == pytest.approx(want, abs=1e-9)
            if i >= 60:
                break

    def test_saturation_flagged_as_inf(self):
        ledger = ConfidenceLedger(redundancy=3)
        record_query(ledger, 0.0)
        assert math.isinf(conditional_llr(ledger))

    def test_redundancy_override(self):
        ledger = ConfidenceLedger(redundancy=3)
        record_query(ledger, math.log(2.0 ** -9))
        assert conditional_llr(ledger, redundancy=9) == pytest.approx(0.0, abs=1e-12)

    def test_requires_query(self):
        with pytest.raises(ValueError):
            conditional_llr(ConfidenceLedger(redundancy=3))

    def test_finite_under_strict_ml_order(self):
        # strictly descending pattern probabilities on a tiny instance keep
        # the numerator mass strictly below 1 before exhaustion
        obs = SoftObservation.from_flip_probs(np.zeros(4, dtype=np.uint8),
                                              [0.05, 0.1, 0.2, 0.4])
        ledger = ConfidenceLedger(redundancy=2)
        count = 0
        for pat in query_patterns(QueryOrder("logistic", 4)):
            record_query(ledger, pattern_log_probability(obs, pat.positions))
            count += 1
            if count >= 15:
                break
            assert math.isfinite(conditional_llr(ledger))
