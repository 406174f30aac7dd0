"""How candidate flip patterns are ordered and mapped onto a soft block.

Run:  python3 demos/03_query_order.py
"""

import itertools

import numpy as np

from softgrand.channel import SoftObservation
from softgrand.patterns import (QueryOrder, pattern_log_probability,
                                query_patterns, realized_positions)

# rank-weight order on 5 bits: patterns are sets of reliability ranks
# (1 = least reliable) sorted by the sum of ranks, ties broken by fewer
# flips; indices in `positions` are rank slots, not frame positions
order = QueryOrder("logistic", 5)
print("first 12 patterns in rank-weight order:")
for pat in itertools.islice(query_patterns(order), 12):
    print(f"  weight {pat.weight:>2}  ranks {pat.positions}")

# the plain Hamming order flips fewer bits first
print("\nfirst 8 patterns in Hamming order:")
for pat in itertools.islice(query_patterns(QueryOrder("hamming", 5)), 8):
    print(f"  weight {pat.weight:>2}  positions {pat.positions}")

# map rank patterns onto an actual observation: channel LLRs sort the
# frame positions by reliability, then rank slot i means "the i-th least
# reliable position of this block"
llrs = np.array([+6.0, -0.8, +2.5, -9.0, +1.2])
obs = SoftObservation.from_channel_llrs(llrs)
print("\nchannel LLRs     :", llrs)
print("hard decision    :", obs.hard)
print("rank -> position :", obs.ranks)
for pat in itertools.islice(query_patterns(order), 1, 5):
    frame = realized_positions(pat, order, obs)
    lp = pattern_log_probability(obs, frame)
    print(f"  ranks {str(pat.positions):>8} -> frame positions {frame} "
          f"(log prob {lp:.3f})")

# the enumeration is a bijection onto all 2^n patterns
count = sum(1 for _ in query_patterns(order))
print(f"\npatterns enumerated for n=5: {count} == 2^5")
