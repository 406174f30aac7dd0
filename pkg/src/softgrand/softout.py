"""Per-query confidence accounting for guess-and-check decoding.

After q code-book queries two hypotheses compete: the decoding found at (or
by) query q is correct, meaning the channel noise really was one of the
guessed flip patterns, or the hit is a coincidental wrong code word.  The
correct-decoding probability is the running sum of the guessed patterns'
probabilities, maintained in the log domain one term per query.  The
incorrect-decoding probability uses a geometric model in which each query
independently lands on a wrong code word with probability 2^-r, r being the
number of redundant bits; it is a function of r and q alone, so it can be
tabulated.  The confidence value reported is the base-2 log ratio of the
two, and a value of t means odds of 2^t to 1 that the decoding is correct.

All internal accumulation is in natural-log domain; linear-domain running
sums underflow for long blocks at high SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfidenceLedger",
    "LlrReport",
    "record_query",
    "p_incorrect_cum",
    "log_p_incorrect_cum",
    "p_incorrect_cum_exact",
    "confidence_llr",
    "conditional_llr",
]

_LN2 = math.log(2.0)


@dataclass
class ConfidenceLedger:
    """Mutable per-trial accumulator, owned by a single decode call.

    ``cum_correct_log`` is the natural log of the summed probability of all
    patterns queried so far (-inf before the first query); it is
    nondecreasing and never exceeds log(1) beyond rounding.
    """

    redundancy: int
    q: int = 0
    cum_correct_log: float = -math.inf
    last_pattern_log: float = math.nan

    def __post_init__(self):
        if self.redundancy < 1:
            raise ValueError(f"redundancy must be >= 1, got {self.redundancy}")


def record_query(ledger, pattern_log_prob):
    """Fold one pattern's natural-log probability into the running sum."""
    lp = float(pattern_log_prob)
    if not lp <= 0.0:
        raise ValueError(f"pattern log-probability must be <= 0, got {lp}")
    ledger.q += 1
    ledger.cum_correct_log = float(np.logaddexp(ledger.cum_correct_log, lp))
    ledger.last_pattern_log = lp
    return ledger


def _check_rq(redundancy, q):
    if redundancy < 1:
        raise ValueError(f"redundancy must be >= 1, got {redundancy}")
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")


def _log1mexp(t):
    """log(1 - e^t) for t < 0, accurate for t near 0 and for t << 0."""
    if t > -_LN2:
        return math.log(-math.expm1(t))
    return math.log1p(-math.exp(t))


def p_incorrect_cum(redundancy, q):
    """Probability 1 - (1 - 2^-r)^q that a wrong code word was hit by query q.

    Evaluated as -expm1(q * log1p(-2^-r)) so that q * 2^-r << 1 keeps full
    relative accuracy.
    """
    _check_rq(redundancy, q)
    if q == 0:
        return 0.0
    return -math.expm1(q * math.log1p(-(2.0 ** -redundancy)))


def log_p_incorrect_cum(redundancy, q):
    """Natural log of p_incorrect_cum, without forming the linear value."""
    _check_rq(redundancy, q)
    if q == 0:
        return -math.inf
    return _log1mexp(q * math.log1p(-(2.0 ** -redundancy)))


def p_incorrect_cum_exact(n, k, q):
    """Exact-codebook variant 1 - (1 - 2^k/(2^n - 1))^q.

    The per-query hit probability 2^k/(2^n - 1) differs from 2^-(n-k) by
    O(2^-n); the simpler form is the default everywhere, this one exists for
    oracle comparisons.
    """
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")
    if q == 0:
        return 0.0
    per_query = (2.0 ** k) / (2.0 ** n - 1.0)
    return -math.expm1(q * math.log1p(-per_query))


@dataclass(frozen=True)
class LlrReport:
    """Confidence snapshot at query q.

    ``llr_bits`` is computed in the log domain; the linear-domain
    ``p_correct_cum`` and ``p_incorrect_cum`` fields are informational and
    may underflow to 0 in extreme conditions.
    """

    llr_bits: float
    p_correct_cum: float
    p_incorrect_cum: float
    q: int


def confidence_llr(ledger):
    """Base-2 log ratio of correct- to incorrect-decoding probability at q."""
    if ledger.q < 1:
        raise ValueError("no queries recorded yet")
    log_u = log_p_incorrect_cum(ledger.redundancy, ledger.q)
    llr_bits = (ledger.cum_correct_log - log_u) / _LN2
    return LlrReport(
        llr_bits=llr_bits,
        p_correct_cum=math.exp(ledger.cum_correct_log),
        p_incorrect_cum=p_incorrect_cum(ledger.redundancy, ledger.q),
        q=ledger.q,
    )


def conditional_llr(ledger, redundancy=None):
    """Base-2 log ratio for the *next* query hitting: diagnostic only.

    Compares P(correct hit exactly at q) * P(no wrong hit through q) against
    P(wrong hit exactly at q) * P(no correct hit through q).  Returns +inf
    when the recorded correct-probability mass has saturated at 1, which
    makes P(no correct hit) = 0; callers detect that with math.isinf.  Not
    suitable as an abandonment rule.
    """
    if ledger.q < 1:
        raise ValueError("no queries recorded yet")
    if math.isnan(ledger.last_pattern_log):
        raise ValueError("no pattern log-probability recorded")
    r = ledger.redundancy if redundancy is None else redundancy
    _check_rq(r, ledger.q)
    if ledger.cum_correct_log >= 0.0:
        return math.inf
    t = math.log1p(-(2.0 ** -r))
    log2_u_gt = ledger.q * t / _LN2
    log2_u_eq = (ledger.q - 1) * t / _LN2 - r
    log2_g_eq = ledger.last_pattern_log / _LN2
    log2_g_gt = _log1mexp(ledger.cum_correct_log) / _LN2
    return log2_g_eq + log2_u_gt - log2_u_eq - log2_g_gt
