"""Monte Carlo experiment engine: seeded sweeps, statistics, and oracles.

Each trial draws a uniform message, encodes, transmits, and decodes the
identical observation under every policy (common random numbers), so
policy comparisons are paired.  Trial seeds derive from
SeedSequence((master_seed, point_key, trial_index)) where point_key is the
bit pattern of the Eb/N0 value, making any cell reproducible from its
(master_seed, point, trial range) alone, independent of sweep layout.

Points where a thresholded policy abandons almost everything escalate
their trial count (up to a cap) until conditional statistics have enough
non-abandoned events to be meaningful; escalation rounds decode only the
policies still short of events.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import softout
from .channel import ChannelParams, SoftObservation, bsc_crossover, transmit
from .codes import encode, is_codeword
from .decoder import DecodePolicy, decode
from .patterns import (QueryOrder, pattern_log_probability, query_patterns,
                       realized_positions)

__all__ = [
    "GuardError",
    "TrialBatch",
    "SweepStats",
    "SweepResult",
    "run_sweep",
    "ErrorQueryDistribution",
    "collect_error_query_distribution",
    "OracleReport",
    "oracle_exact_accounting",
    "binomial_halfwidth",
    "geometric_cdf",
    "ks_distance_geometric",
    "write_sweep_csv",
    "write_trials_csv",
]

CORRECT, INCORRECT, ABANDONED = 0, 1, 2
_OUTCOME_NAMES = ("correct", "incorrect", "abandoned")


class GuardError(RuntimeError):
    """A statistical precondition failed; results would be meaningless."""


def _point_key(ebn0_db):
    # Bit pattern of the float, so the key identifies the point by value.
    return int(np.float64(ebn0_db).view(np.uint64))


def _trial_rng(master_seed, point_key, trial):
    return np.random.default_rng(np.random.SeedSequence((master_seed, point_key, trial)))


@dataclass
class TrialBatch:
    """Columnar per-trial results for one (policy, point) cell.

    outcome holds codes 0=correct, 1=incorrect, 2=abandoned; llr_bits is
    NaN when the decoder produced no confidence report.
    """

    outcome: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int8))
    q: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    llr_bits: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def extend(self, outcome, q, llr_bits):
        self.outcome = np.concatenate([self.outcome, outcome])
        self.q = np.concatenate([self.q, q])
        self.llr_bits = np.concatenate([self.llr_bits, llr_bits])

    def __len__(self):
        return len(self.outcome)


def binomial_halfwidth(x, n):
    """95% half-width for a binomial proportion x/n.

    Normal approximation once both outcome counts reach 30; Wilson interval
    half-width below that, which stays usable for rare events.
    """
    if n <= 0:
        return math.nan
    z = 1.959963984540054
    p = x / n
    if min(x, n - x) >= 30:
        return z * math.sqrt(p * (1.0 - p) / n)
    denom = 1.0 + z * z / n
    return z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom


@dataclass(frozen=True)
class SweepStats:
    """Aggregates for one (policy, Eb/N0) cell.

    bler counts abandonment as error; the _cond variants restrict to
    non-abandoned trials.  avg_queries_per_success is the total number of
    queries spent across all trials (including failures and abandonments)
    divided by the number of correct decodings, NaN when nothing succeeded.
    """

    policy: str
    ebn0_db: float
    trials: int
    n_correct: int
    n_incorrect: int
    n_abandoned: int
    bler: float
    bler_half: float
    bler_cond: float
    bler_cond_half: float
    success: float
    success_cond: float
    success_cond_half: float
    abandon_frac: float
    abandon_frac_half: float
    nonabandon_frac: float
    avg_queries_to_decision: float
    avg_queries_per_success: float


def _stats_from_batch(label, ebn0_db, batch):
    n = len(batch)
    nc = int(np.count_nonzero(batch.outcome == CORRECT))
    ni = int(np.count_nonzero(batch.outcome == INCORRECT))
    na = int(np.count_nonzero(batch.outcome == ABANDONED))
    nonab = nc + ni
    total_q = int(batch.q.sum())
    return SweepStats(
        policy=label,
        ebn0_db=float(ebn0_db),
        trials=n,
        n_correct=nc,
        n_incorrect=ni,
        n_abandoned=na,
        bler=(ni + na) / n,
        bler_half=binomial_halfwidth(ni + na, n),
        bler_cond=ni / nonab if nonab else math.nan,
        bler_cond_half=binomial_halfwidth(ni, nonab) if nonab else math.nan,
        success=nc / n,
        success_cond=nc / nonab if nonab else math.nan,
        success_cond_half=binomial_halfwidth(nc, nonab) if nonab else math.nan,
        abandon_frac=na / n,
        abandon_frac_half=binomial_halfwidth(na, n),
        nonabandon_frac=nonab / n,
        avg_queries_to_decision=total_q / n,
        avg_queries_per_success=total_q / nc if nc else math.nan,
    )


def _decode_block(code, params, policies, accounting, master_seed, point_key, lo, hi):
    """Run trials [lo, hi) at one point for the given policies.

    Returns per-policy (outcome, q, llr_bits) arrays in policy order.
    """
    m = hi - lo
    out = [(np.zeros(m, dtype=np.int8), np.zeros(m, dtype=np.int64), np.full(m, math.nan))
           for _ in policies]
    crossover = bsc_crossover(params) if accounting == "bsc" else None
    for i in range(m):
        rng = _trial_rng(master_seed, point_key, lo + i)
        msg = rng.integers(0, 2, size=code.k, dtype=np.uint8)
        cw = encode(code, msg)
        obs = transmit(cw, params, rng)
        acct = None
        if crossover is not None:
            acct = SoftObservation.from_flip_probs(obs.hard, crossover)
        for j, policy in enumerate(policies):
            res = decode(code, obs, policy, accounting=acct)
            if res.decoded:
                tag = CORRECT if np.array_equal(res.word, cw) else INCORRECT
            else:
                tag = ABANDONED
            out[j][0][i] = tag
            out[j][1][i] = res.q
            if res.report is not None:
                out[j][2][i] = res.report.llr_bits
    return out


def _block_task(args):
    return _decode_block(*args)


@dataclass
class SweepResult:
    """Everything a sweep produced: aggregates plus per-trial batches.

    ``stats`` is ordered point-major, policy-minor.  ``batches`` maps
    (policy_label, point_index) to a TrialBatch whose first
    ``base_trials`` entries are common-random-number paired across all
    policies at that point; escalation trials follow.
    """

    stats: list
    batches: dict
    points: list
    policy_labels: list
    base_trials: int


def run_sweep(code, policies, ebn0_points, trials_per_point, master_seed,
              workers=1, accounting="soft", min_conditional_events=100,
              max_trials_factor=8, escalate_abandon_frac=0.98):
    """Decode seeded trials at every (policy, Eb/N0) cell and aggregate."""
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be >= 1")
    if master_seed < 0:
        raise ValueError("master_seed must be a nonnegative integer")
    if accounting not in ("soft", "bsc"):
        raise ValueError(f"accounting must be 'soft' or 'bsc', got {accounting!r}")
    labels = [p.label() for p in policies]
    if len(set(labels)) != len(labels):
        raise ValueError(f"policy labels must be unique, got {labels}")

    points = [float(e) for e in ebn0_points]
    batches = {(lbl, pi): TrialBatch() for lbl in labels for pi in range(len(points))}
    stats = []

    for pi, ebn0_db in enumerate(points):
        params = ChannelParams(ebn0_db=ebn0_db, rate=code.rate)
        key = _point_key(ebn0_db)

        def run_block(lo, hi, active):
            for j, (o, q, l) in enumerate(_run_blocks(
                    code, params, active, accounting, master_seed, key, lo, hi, workers)):
                batches[(active[j].label(), pi)].extend(o, q, l)

        run_block(0, trials_per_point, policies)
        total = trials_per_point
        cap = trials_per_point * max_trials_factor
        while total < cap:
            deficits = []
            for policy in policies:
                b = batches[(policy.label(), pi)]
                nonab = int(np.count_nonzero(b.outcome != ABANDONED))
                frac_ab = int(np.count_nonzero(b.outcome == ABANDONED)) / len(b)
                if frac_ab > escalate_abandon_frac and nonab < min_conditional_events:
                    deficits.append(policy)
            if not deficits:
                break
            nxt = min(2 * total, cap)
            run_block(total, nxt, deficits)
            total = nxt

        for lbl in labels:
            stats.append(_stats_from_batch(lbl, ebn0_db, batches[(lbl, pi)]))

    return SweepResult(stats=stats, batches=batches, points=points,
                       policy_labels=labels, base_trials=trials_per_point)


def _run_blocks(code, params, policies, accounting, master_seed, key, lo, hi, workers):
    if workers <= 1 or hi - lo < 64:
        return _decode_block(code, params, policies, accounting, master_seed, key, lo, hi)
    edges = list(range(lo, hi, 512)) + [hi]
    tasks = [(code, params, policies, accounting, master_seed, key, a, b)
             for a, b in zip(edges[:-1], edges[1:])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_block_task, tasks))
    merged = []
    for j in range(len(policies)):
        merged.append(tuple(np.concatenate([p[j][f] for p in parts]) for f in range(3)))
    return merged


def geometric_cdf(p, q):
    """P(X <= q) for X ~ Geometric(p) on support 1, 2, ..."""
    q = np.asarray(q, dtype=float)
    out = -np.expm1(np.log1p(-p) * q)
    return float(out) if out.ndim == 0 else out


def ks_distance_geometric(samples, p):
    """Sup distance between the empirical CDF of samples and Geometric(p)."""
    vals, counts = np.unique(np.asarray(samples, dtype=np.int64), return_counts=True)
    n = counts.sum()
    if n == 0:
        raise ValueError("no samples")
    hi = np.cumsum(counts) / n
    lo = hi - counts / n
    return float(max(np.abs(hi - geometric_cdf(p, vals)).max(),
                     np.abs(lo - geometric_cdf(p, vals - 1)).max()))


@dataclass
class ErrorQueryDistribution:
    """Query counts observed at incorrect decodings, plus run bookkeeping."""

    queries: np.ndarray
    trials: int
    redundancy: int
    ebn0_db: float
    seed: int

    @property
    def sample_mean(self):
        return float(self.queries.mean())

    @property
    def ks_distance(self):
        return ks_distance_geometric(self.queries, 2.0 ** -self.redundancy)

    def histogram_log2(self):
        """Counts over bins [2^j, 2^(j+1)); returns (lo, hi, count) arrays."""
        top = int(np.max(self.queries))
        nbins = max(1, top.bit_length())
        lo = 2 ** np.arange(nbins, dtype=np.int64)
        j = np.floor(np.log2(self.queries)).astype(np.int64)
        counts = np.bincount(j, minlength=nbins)
        return lo, 2 * lo, counts


def collect_error_query_distribution(code, ebn0_db, target_errors, seed,
                                     order_kind="logistic", accounting="soft",
                                     min_crossover=1e-3, min_error_rate=1e-4,
                                     check_after=20000, max_queries=None):
    """Collect the query index of incorrect decodings under tau=None.

    Guards: the hard-decision crossover probability must clear
    ``min_crossover`` (a clean channel produces almost no errors), and if
    the realised error rate falls below ``min_error_rate`` after
    ``check_after`` trials the run aborts rather than spin forever.
    """
    if target_errors < 1:
        raise ValueError("target_errors must be >= 1")
    params = ChannelParams(ebn0_db=ebn0_db, rate=code.rate)
    crossover = bsc_crossover(params)
    if crossover < min_crossover:
        raise GuardError(
            f"crossover {crossover:.3g} at {ebn0_db} dB is below the floor "
            f"{min_crossover:g}; incorrect decodings would be too rare")
    policy = DecodePolicy(tau=None, max_queries=max_queries, order_kind=order_kind)
    acct_template = accounting
    key = _point_key(ebn0_db)
    qs = []
    trials = 0
    while len(qs) < target_errors:
        rng = _trial_rng(seed, key, trials)
        msg = rng.integers(0, 2, size=code.k, dtype=np.uint8)
        cw = encode(code, msg)
        obs = transmit(cw, params, rng)
        acct = None
        if acct_template == "bsc":
            acct = SoftObservation.from_flip_probs(obs.hard, crossover)
        res = decode(code, obs, policy, accounting=acct)
        trials += 1
        if res.decoded and not np.array_equal(res.word, cw):
            qs.append(res.q)
        if trials >= check_after and len(qs) / trials < min_error_rate:
            raise GuardError(
                f"error rate {len(qs) / trials:.2e} after {trials} trials is "
                f"below {min_error_rate:g}; pick a noisier operating point")
    return ErrorQueryDistribution(queries=np.asarray(qs, dtype=np.int64),
                                  trials=trials, redundancy=code.redundancy,
                                  ebn0_db=float(ebn0_db), seed=seed)


@dataclass
class OracleReport:
    """Exhaustive ground truth for the confidence accounting on one block.

    p_correct_exact is the direct linear-domain sum of pattern
    probabilities in query order; p_correct_ledger replays the log-domain
    running sum.  p_incorrect_exact treats the actual code book: for every
    equally-possible true noise sequence, the first query hitting a wrong
    code word is found by replaying the query order, and the indicator
    {that query <= q} is averaged under the noise posterior.
    p_incorrect_model is the geometric approximation for comparison.
    """

    q: np.ndarray
    p_correct_exact: np.ndarray
    p_correct_ledger: np.ndarray
    p_incorrect_exact: np.ndarray
    p_incorrect_model: np.ndarray

    @property
    def max_correct_deviation(self):
        return float(np.max(np.abs(self.p_correct_exact - self.p_correct_ledger)))

    @property
    def max_incorrect_deviation(self):
        return float(np.max(np.abs(self.p_incorrect_exact - self.p_incorrect_model)))


def oracle_exact_accounting(code, obs, order_kind="logistic"):
    """Brute-force per-q accounting for n <= 12 blocks; see OracleReport."""
    n = code.n
    if n > 12:
        raise ValueError(f"exhaustive oracle needs n <= 12, got {n}")
    total = 1 << n
    order = QueryOrder(kind=order_kind, n=n)

    flip = np.asarray(obs.flip_prob, dtype=float)
    stay = 1.0 - flip
    ledger = softout.ConfidenceLedger(redundancy=code.redundancy)

    probs = np.zeros(total)
    ledger_cum = np.zeros(total)
    hit_qs = []
    hit_patterns = []
    for idx, pat in enumerate(query_patterns(order)):
        pos = realized_positions(pat, order, obs)
        mask = np.zeros(n, dtype=bool)
        mask[list(pos)] = True
        probs[idx] = float(np.prod(np.where(mask, flip, stay)))
        softout.record_query(ledger, pattern_log_probability(obs, pos))
        ledger_cum[idx] = math.exp(ledger.cum_correct_log)
        guess = obs.hard.copy()
        guess[list(pos)] ^= 1
        if is_codeword(code, guess):
            hit_qs.append(idx + 1)
            hit_patterns.append(mask.astype(np.uint8))
    if len(hit_qs) < 2:
        raise RuntimeError("degenerate code: fewer than two coset hits")

    qs = np.arange(1, total + 1)
    p_correct_exact = np.cumsum(probs)

    # First wrong-code-word hit: the fixed query order meets the coset of
    # the hard decision at hit_qs[0], hit_qs[1], ...; for the single true
    # noise equal to the first-hit pattern that hit is the correct word and
    # the first WRONG hit comes second.
    j1, j2 = hit_qs[0], hit_qs[1]
    p_first_pattern = float(np.prod(np.where(hit_patterns[0].astype(bool), flip, stay)))
    p_incorrect_exact = np.where(qs >= j2, 1.0,
                                 np.where(qs >= j1, 1.0 - p_first_pattern, 0.0))
    model = np.array([softout.p_incorrect_cum(code.redundancy, int(q)) for q in qs])
    return OracleReport(q=qs, p_correct_exact=p_correct_exact,
                        p_correct_ledger=ledger_cum,
                        p_incorrect_exact=p_incorrect_exact,
                        p_incorrect_model=model)


_SWEEP_COLUMNS = (
    "policy", "ebn0_db", "trials", "n_correct", "n_incorrect", "n_abandoned",
    "bler", "bler_half", "bler_cond", "bler_cond_half", "success",
    "success_cond", "success_cond_half", "abandon_frac", "abandon_frac_half",
    "nonabandon_frac", "avg_queries_to_decision", "avg_queries_per_success",
)


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def write_sweep_csv(path, stats, meta=None):
    """Write sweep aggregates as CSV plus a JSON metadata sidecar.

    The CSV holds data rows only (no comments) so it diffs cleanly; the
    sidecar <path>.json carries everything needed to regenerate it.
    """
    with open(path, "w") as fh:
        fh.write(",".join(_SWEEP_COLUMNS) + "\n")
        for s in stats:
            row = asdict(s)
            fh.write(",".join(_fmt(row[c]) for c in _SWEEP_COLUMNS) + "\n")
    if meta is not None:
        with open(str(path) + ".json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def write_trials_csv(path, result):
    """Per-trial dump: one row per (policy, point, trial)."""
    with open(path, "w") as fh:
        fh.write("policy,ebn0_db,trial,outcome,q,llr_bits,true_noise_found\n")
        for pi, ebn0_db in enumerate(result.points):
            for lbl in result.policy_labels:
                b = result.batches[(lbl, pi)]
                for t in range(len(b)):
                    fh.write(",".join([
                        lbl, _fmt(float(ebn0_db)), str(t),
                        _OUTCOME_NAMES[b.outcome[t]], str(int(b.q[t])),
                        _fmt(float(b.llr_bits[t])),
                        str(bool(b.outcome[t] == CORRECT)).lower(),
                    ]) + "\n")
