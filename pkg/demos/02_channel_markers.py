"""Channel model walkthrough: BPSK over AWGN, soft values, capacity markers.

Run:  python3 demos/02_channel_markers.py
"""

import numpy as np

from softgrand.channel import (ChannelParams, bsc_crossover, capacity_markers,
                               flip_probability, transmit)
from softgrand.codes import encode, make_rlc

rng = np.random.default_rng(0)
code = make_rlc(128, 116, seed=1)

# one transmission at 4 dB: antipodal mapping, unit symbol energy, channel
# LLR lambda = 2y/sigma^2
params = ChannelParams(ebn0_db=4.0, rate=code.rate)
print(f"Eb/N0 = {params.ebn0_db} dB  ->  sigma^2 = {params.sigma2:.5f}")

cw = encode(code, rng.integers(0, 2, size=code.k, dtype=np.uint8))
obs = transmit(cw, params, rng)
errs = int(np.sum(obs.hard != cw))
print(f"hard-decision errors this block: {errs} / {code.n}")
print("least reliable positions first:", obs.ranks[:8], "...")

# reliability -> flip probability is just a logistic; deep reliabilities
# stay proper probabilities instead of underflowing to zero
for l in (0.0, 1.0, 5.0, 40.0):
    print(f"flip_probability({l:>4}) = {flip_probability(l):.6g}")

# location of the hard-detection limits for this rate: the Shannon marker
# solves 1 - h2(p) = rate, the min-capacity marker solves
# 1 + log2(1 - p) = rate; min-capacity sits below Shannon in dB
m = capacity_markers(code.rate)
print()
print(f"rate {code.k}/{code.n}:")
print(f"  shannon marker    = {m['shannon_ebn0_db']:.6f} dB "
      f"(crossover {bsc_crossover(ChannelParams(m['shannon_ebn0_db'], code.rate)):.5f})")
print(f"  min-capacity marker = {m['mincap_ebn0_db']:.6f} dB "
      f"(crossover {bsc_crossover(ChannelParams(m['mincap_ebn0_db'], code.rate)):.5f})")

# empirical check of the crossover formula at 0 dB
params0 = ChannelParams(ebn0_db=0.0, rate=code.rate)
flips = 0
blocks = 2000
for _ in range(blocks):
    o = transmit(cw, params0, rng)
    flips += int(np.sum(o.hard != cw))
print()
print(f"measured crossover at 0 dB: {flips / (blocks * code.n):.5f}  "
      f"(formula {bsc_crossover(params0):.5f})")
