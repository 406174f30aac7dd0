"""Shared test helpers: a one-query-at-a-time reference decoder.

The production decoder evaluates queries in vectorised chunks; every
decoder test that matters compares it against this deliberately naive
loop, which mirrors the documented semantics line by line.
"""

import math

import numpy as np

from softgrand import softout
from softgrand.codes import is_codeword
from softgrand.decoder import resolve_max_queries
from softgrand.patterns import (QueryOrder, pattern_log_probability,
                                query_patterns, realized_positions)


def reference_decode(code, obs, policy, accounting=None):
    """Scalar mirror of decoder.decode; returns (tag, q, word, llr_bits).

    tag is one of "decoded", "abandon_llr", "abandon_cap".
    """
    acct = obs if accounting is None else accounting
    order = QueryOrder(kind=policy.order_kind, n=code.n)
    cap = resolve_max_queries(policy, code)
    ledger = softout.ConfidenceLedger(redundancy=code.redundancy)
    for pat in query_patterns(order):
        if ledger.q >= cap:
            break
        pos = realized_positions(pat, order, obs)
        softout.record_query(ledger, pattern_log_probability(acct, pos))
        report = softout.confidence_llr(ledger)
        if policy.tau is not None and report.llr_bits < policy.tau:
            return ("abandon_llr", ledger.q, None, report.llr_bits)
        guess = obs.hard.copy()
        if pos:
            guess[list(pos)] ^= 1
        if is_codeword(code, guess):
            return ("decoded", ledger.q, guess, report.llr_bits)
    llr = softout.confidence_llr(ledger).llr_bits if ledger.q else math.nan
    return ("abandon_cap", ledger.q, None, llr)


def outcome_tag(result):
    """Map a DecodeOutcome onto the reference decoder's tag strings."""
    if result.decoded:
        return "decoded"
    return "abandon_llr" if result.reason == "llr_below_tau" else "abandon_cap"


def random_small_code(rng, n_lo=6, n_hi=12):
    """A random RLC whose shape admits distinct parity-check columns."""
    from softgrand.codes import make_rlc
    n = int(rng.integers(n_lo, n_hi + 1))
    rmin = max(2, math.ceil(math.log2(n + 1)))
    k = int(rng.integers(2, n - rmin + 1)) if n - rmin > 2 else 2
    return make_rlc(n, k, seed=int(rng.integers(1, 10_000)))


def random_observation(code, ebn0_db, rng):
    from softgrand.channel import ChannelParams, transmit
    from softgrand.codes import encode
    msg = rng.integers(0, 2, size=code.k, dtype=np.uint8)
    cw = encode(code, msg)
    params = ChannelParams(ebn0_db=ebn0_db, rate=code.rate)
    return cw, transmit(cw, params, rng)
