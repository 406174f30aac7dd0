"""Where do wrong code words appear in the query order?  Geometrically.

Every query is a fresh chance to hit one of the ~2^k wrong code words
scattered over 2^n patterns, so the query index of an erroneous decode is
close to Geometric(2^-(n-k)) regardless of code structure -- that is the
model behind the confidence LLR's denominator.  Demonstrated here on a
small code at a deliberately noisy operating point (the model needs the
true noise pattern to sit deep in the order).

Run:  python3 demos/06_error_query_distribution.py
"""

import numpy as np

from softgrand.codes import make_rlc
from softgrand.harness import (collect_error_query_distribution, geometric_cdf)

code = make_rlc(24, 16, seed=4)
dist = collect_error_query_distribution(code, ebn0_db=-4.0, target_errors=800,
                                        seed=7)
mean_model = 2.0 ** code.redundancy
print(f"[{code.n},{code.k}] at {dist.ebn0_db} dB: {len(dist.queries)} incorrect "
      f"decodings over {dist.trials} trials")
print(f"sample mean queries  : {dist.sample_mean:.1f}")
print(f"geometric model mean : {mean_model:.0f}")
print(f"KS distance to model : {dist.ks_distance:.4f}")

# octave histogram against the model
lo, hi, counts = dist.histogram_log2()
n = counts.sum()
print(f"\n{'bin':>14} {'count':>6} {'model':>8}")
for a, b, c in zip(lo, hi, counts):
    model = n * (geometric_cdf(1 / mean_model, b - 1)
                 - geometric_cdf(1 / mean_model, a - 1))
    bar = "#" * int(round(40 * c / counts.max()))
    print(f"[{a:>5},{b:>6}) {c:>6} {model:>8.1f}  {bar}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping plot")
else:
    xs = np.sort(dist.queries)
    ys = np.arange(1, len(xs) + 1) / len(xs)
    plt.figure(figsize=(6, 4))
    plt.semilogx(xs, ys, drawstyle="steps-post", label="empirical CDF")
    grid = np.unique(np.logspace(0, np.log10(xs.max()), 200).astype(int))
    plt.semilogx(grid, geometric_cdf(1 / mean_model, grid), "--",
                 label=f"Geometric(2^-{code.redundancy})")
    plt.xlabel("query index of wrong-code-word hit")
    plt.ylabel("CDF")
    plt.legend()
    plt.tight_layout()
    plt.savefig("error_query_distribution.png", dpi=120)
    print("\nwrote error_query_distribution.png")
