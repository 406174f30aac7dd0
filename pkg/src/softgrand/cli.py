"""Command-line front end.

Modes: sweep (block-error/calibration sweep to CSV), fig1 (query-count
distribution at incorrect decodings), oracle (exhaustive accounting check
on a small code), markers (capacity-threshold Eb/N0 values for the code
rate).  Every run is fully described by its flags; a JSON config file can
supply the same keys, with flags taking precedence and unknown keys
rejected.  Outputs carry a JSON sidecar so any file can be regenerated
from the sidecar alone.  Exit codes: 0 success, 2 configuration error,
3 statistical-guard or tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channel import ChannelParams, capacity_markers, transmit
from .codes import encode, make_crc, make_rlc
from .decoder import DecodePolicy
from .harness import (GuardError, collect_error_query_distribution,
                      oracle_exact_accounting, run_sweep, write_sweep_csv,
                      write_trials_csv)

__all__ = ["RunConfig", "ConfigError", "parse_and_validate", "run", "main"]

ORACLE_TOLERANCE = 1e-10

_FLAG_KEYS = ("mode", "code", "decoder", "tau", "ebn0", "trials", "seed",
              "workers", "out", "trials_csv")

_DECODER_SETUP = {
    # decoder name -> (pattern order, ledger accounting)
    "orbgrand": ("logistic", "soft"),
    "grand": ("hamming", "bsc"),
}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully-resolved description of one run."""

    mode: str
    code_kind: str
    n: int
    k: int
    code_seed: int
    poly: int
    decoder: str
    taus: tuple
    ebn0_points: tuple
    trials: int
    seed: int
    workers: int
    out: str
    trials_csv: bool

    def code_string(self):
        if self.code_kind == "rlc":
            return f"rlc:{self.n}:{self.k}:{self.code_seed}"
        return f"crc:{self.n}:{self.k}:{hex(self.poly)}"

    def tau_string(self):
        return ",".join("none" if t is None else format(t, "g") for t in self.taus)

    def echo(self):
        """Canonical key/value form, written into output sidecars."""
        return {
            "mode": self.mode,
            "code": self.code_string(),
            "decoder": self.decoder,
            "tau": self.tau_string(),
            "ebn0": list(self.ebn0_points),
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "out": self.out,
            "trials_csv": self.trials_csv,
            "version": __version__,
        }


def _build_parser():
    p = argparse.ArgumentParser(
        prog="softgrand",
        description="Guess-and-check decoding experiments with soft-output "
                    "confidence and abandonment.")
    p.add_argument("--mode", choices=("sweep", "fig1", "oracle", "markers"),
                   help="what to run")
    p.add_argument("--code", help="rlc:N:K[:SEED] or crc:N:K:0xPOLY (Koopman)")
    p.add_argument("--decoder", choices=tuple(_DECODER_SETUP),
                   help="orbgrand = rank-order patterns with soft accounting; "
                        "grand = Hamming-order patterns with hard-detection "
                        "accounting (default orbgrand)")
    p.add_argument("--tau", help="comma list of abandonment thresholds in bits; "
                                 "'none' disables abandonment (default none)")
    p.add_argument("--ebn0", help="Eb/N0 in dB: single value, comma list, or "
                                  "START:STEP:STOP inclusive sweep")
    p.add_argument("--trials", type=int,
                   help="trials per sweep point; in fig1 mode, the number of "
                        "incorrect decodings to collect (default 1000)")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--workers", type=int, help="process pool size (default 1)")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--trials-csv", dest="trials_csv", action="store_true",
                   default=None, help="also dump per-trial records in sweep mode")
    p.add_argument("--config", help="JSON file supplying any of the other keys")
    return p


def _parse_code(text):
    parts = str(text).split(":")
    kind = parts[0]
    if kind == "rlc":
        if len(parts) not in (3, 4):
            raise ConfigError(f"rlc code wants rlc:N:K[:SEED], got {text!r}")
        n, k = int(parts[1]), int(parts[2])
        seed = int(parts[3]) if len(parts) == 4 else 1
        return "rlc", n, k, seed, 0
    if kind == "crc":
        if len(parts) != 4:
            raise ConfigError(f"crc code wants crc:N:K:0xPOLY, got {text!r}")
        n, k = int(parts[1]), int(parts[2])
        try:
            poly = int(parts[3], 0)
        except ValueError:
            raise ConfigError(f"bad polynomial {parts[3]!r} in {text!r}") from None
        return "crc", n, k, 0, poly
    raise ConfigError(f"unknown code kind {kind!r} (want rlc or crc)")


def _parse_taus(text):
    taus = []
    for tok in str(text).split(","):
        tok = tok.strip().lower()
        if tok == "none":
            taus.append(None)
        else:
            try:
                taus.append(float(tok))
            except ValueError:
                raise ConfigError(f"bad tau value {tok!r}") from None
    if not taus:
        raise ConfigError("empty tau list")
    return tuple(taus)


def _parse_ebn0(value):
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    s = str(value)
    try:
        if ":" in s:
            start, step, stop = (float(tok) for tok in s.split(":"))
            if step <= 0 or stop < start:
                raise ConfigError(f"bad sweep range {s!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(start + i * step for i in range(count))
        return tuple(float(tok) for tok in s.split(","))
    except ValueError:
        raise ConfigError(f"bad ebn0 value {s!r}") from None


def parse_and_validate(argv=None):
    """Resolve flags plus optional config file into a RunConfig."""
    args = _build_parser().parse_args(argv)

    merged = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config!r}: {e}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = sorted(set(file_cfg) - set(_FLAG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        merged.update(file_cfg)
    for key in _FLAG_KEYS:
        val = getattr(args, key)
        if val is not None:
            merged[key] = val

    mode = merged.get("mode")
    if mode is None:
        raise ConfigError("--mode is required (sweep, fig1, oracle, or markers)")
    if mode not in ("sweep", "fig1", "oracle", "markers"):
        raise ConfigError(f"unknown mode {mode!r}")
    if "code" not in merged:
        raise ConfigError("--code is required")
    kind, n, k, code_seed, poly = _parse_code(merged["code"])

    decoder = merged.get("decoder", "orbgrand")
    if decoder not in _DECODER_SETUP:
        raise ConfigError(f"unknown decoder {decoder!r}")
    taus = _parse_taus(merged.get("tau", "none"))

    if "ebn0" in merged:
        points = _parse_ebn0(merged["ebn0"])
    elif mode == "markers":
        points = ()
    else:
        raise ConfigError(f"--ebn0 is required for mode {mode}")
    if mode in ("fig1", "oracle") and len(points) != 1:
        raise ConfigError(f"mode {mode} needs exactly one ebn0 point, got {len(points)}")

    def as_int(key, default):
        v = merged.get(key, default)
        try:
            return int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {v!r}") from None

    trials = as_int("trials", 1000)
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    seed = as_int("seed", 0)
    if seed < 0:
        raise ConfigError(f"seed must be >= 0, got {seed}")
    workers = as_int("workers", 1)
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")

    return RunConfig(mode=mode, code_kind=kind, n=n, k=k, code_seed=code_seed,
                     poly=poly, decoder=decoder, taus=taus, ebn0_points=points,
                     trials=trials, seed=seed, workers=workers,
                     out=str(merged.get("out", ".")),
                     trials_csv=bool(merged.get("trials_csv", False)))


def _make_code(config):
    try:
        if config.code_kind == "rlc":
            return make_rlc(config.n, config.k, config.code_seed)
        return make_crc(config.n, config.k, config.poly)
    except ValueError as e:
        raise ConfigError(f"cannot build code {config.code_string()!r}: {e}") from None


def _sidecar_meta(config, code):
    return {
        "config": config.echo(),
        "code": code.descriptor,
        "parity_check_sha256": code.parity_check_sha256(),
        "markers": capacity_markers(code.rate),
    }


def _run_sweep_mode(config, code):
    policies = [DecodePolicy(tau=t, order_kind=_DECODER_SETUP[config.decoder][0])
                for t in config.taus]
    accounting = _DECODER_SETUP[config.decoder][1]
    result = run_sweep(code, policies, config.ebn0_points, config.trials,
                       config.seed, workers=config.workers, accounting=accounting)
    os.makedirs(config.out, exist_ok=True)
    csv_path = os.path.join(config.out, "sweep.csv")
    write_sweep_csv(csv_path, result.stats, meta=_sidecar_meta(config, code))
    print(f"wrote {csv_path} ({len(result.stats)} cells)")
    if config.trials_csv:
        trials_path = os.path.join(config.out, "trials.csv")
        write_trials_csv(trials_path, result)
        print(f"wrote {trials_path}")
    return 0


def _run_fig1_mode(config, code):
    order_kind, accounting = _DECODER_SETUP[config.decoder]
    dist = collect_error_query_distribution(
        code, config.ebn0_points[0], target_errors=config.trials,
        seed=config.seed, order_kind=order_kind, accounting=accounting)
    os.makedirs(config.out, exist_ok=True)
    csv_path = os.path.join(config.out, "fig1.csv")
    lo, hi, counts = dist.histogram_log2()
    with open(csv_path, "w") as fh:
        fh.write("bin_lo,bin_hi,count,sample_mean\n")
        for row in zip(lo, hi, counts):
            fh.write(f"{row[0]},{row[1]},{row[2]},{dist.sample_mean:.12g}\n")
    meta = _sidecar_meta(config, code)
    meta["fig1"] = {
        "samples": int(len(dist.queries)),
        "trials": dist.trials,
        "sample_mean": dist.sample_mean,
        "model_mean": float(2 ** code.redundancy),
        "ks_distance_vs_geometric": dist.ks_distance,
    }
    with open(csv_path + ".json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {csv_path}: {len(dist.queries)} incorrect decodings over "
          f"{dist.trials} trials, mean queries {dist.sample_mean:.1f} "
          f"(model {2 ** code.redundancy}), KS {dist.ks_distance:.4f}")
    return 0


def _run_oracle_mode(config, code):
    if code.n > 12:
        raise ConfigError(f"oracle mode needs n <= 12, got n={code.n}")
    order_kind = _DECODER_SETUP[config.decoder][0]
    rng = np.random.default_rng(config.seed)
    msg = rng.integers(0, 2, size=code.k, dtype=np.uint8)
    params = ChannelParams(ebn0_db=config.ebn0_points[0], rate=code.rate)
    obs = transmit(encode(code, msg), params, rng)
    report = oracle_exact_accounting(code, obs, order_kind=order_kind)
    dev = report.max_correct_deviation
    ok = dev < ORACLE_TOLERANCE
    print(f"correct-side accounting: max |ledger - exhaustive| = {dev:.3e} "
          f"over q in [1, {len(report.q)}] "
          f"({'PASS' if ok else 'FAIL'}, tolerance {ORACLE_TOLERANCE:g})")
    print(f"wrong-hit model vs exact codebook: max deviation = "
          f"{report.max_incorrect_deviation:.3e} (reported, not gated)")
    return 0 if ok else 3


def _run_markers_mode(config, code):
    markers = capacity_markers(code.rate)
    print(f"rate = {code.k}/{code.n} = {code.rate:.6f}")
    print(f"shannon_ebn0_db = {markers['shannon_ebn0_db']:.6f}")
    print(f"mincap_ebn0_db = {markers['mincap_ebn0_db']:.6f}")
    return 0


def run(config):
    """Execute a validated RunConfig; returns the process exit code."""
    code = _make_code(config)
    if config.mode == "sweep":
        return _run_sweep_mode(config, code)
    if config.mode == "fig1":
        return _run_fig1_mode(config, code)
    if config.mode == "oracle":
        return _run_oracle_mode(config, code)
    return _run_markers_mode(config, code)


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    if not argv:
        _build_parser().print_usage(sys.stderr)
        return 2
    try:
        config = parse_and_validate(argv)
        return run(config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GuardError as e:
        print(f"guard failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
