"""Monte Carlo experiments, lemma checks and CSV reports.

Trial ``i`` of an experiment seeded with ``seed`` always draws from
``numpy.random.default_rng(seed + i)``: first ``n`` arrival times, then ``k``
window coins.  Results therefore do not depend on how trials are split across
worker processes.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .algorithm import brute_force_opt, offline_greedy, run_submodular_secretary
from .arrivals import sample_schedule
from .errors import (DegenerateInstanceError, InstanceFormatError, ParameterError,
                     SizeLimitError)
from .oracles import (ShiftedOracle, ValueOracle, instance_from_dict, load_instance,
                      sample_random_instance)
from .secretary import INV_E, selection_probability_profile

log = logging.getLogger(__name__)

#: Slack, in standard errors, on every statistical pass/fail decision.
Z_SLACK = 3.0
ABS_TOL = 1e-9

ALGORITHMS = ("submodular-secretary",)
BASELINES = ("brute-force-opt", "offline-greedy")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(seed + trial)


def _mean_stderr(x: np.ndarray) -> tuple[float, float]:
    m = len(x)
    mean = math.fsum(x.tolist()) / m
    if m < 2:
        return mean, 0.0
    var = math.fsum(((x - mean) ** 2).tolist()) / (m - 1)
    return mean, math.sqrt(var / m)


# --------------------------------------------------------------------------
# competitive ratio


class TrialStats(NamedTuple):
    values: np.ndarray
    calls: np.ndarray


def _simulate_chunk(oracle: ValueOracle, k: int, seed: int, start: int, stop: int) -> TrialStats:
    n = oracle.n
    count = stop - start
    payload = kernels.pack(oracle)
    if payload is None:
        values = np.empty(count)
        calls = np.empty(count, dtype=np.int64)
        for j in range(count):
            rng = trial_rng(seed, start + j)
            res = run_submodular_secretary(oracle, sample_schedule(n, rng), k, rng)
            values[j], calls[j] = res.value, res.oracle_calls
        return TrialStats(values, calls)
    times = np.empty((count, n))
    coins = np.empty((count, k))
    for j in range(count):
        rng = trial_rng(seed, start + j)
        times[j] = rng.random(n)
        coins[j] = rng.random(k)
    order = np.argsort(times, axis=1, kind="stable")
    sorted_times = np.take_along_axis(times, order, axis=1)
    values, calls, _ = kernels.submodular_secretary_batch(payload, k, order, sorted_times, coins)
    return TrialStats(values, calls)


def simulate_trials(oracle: ValueOracle, k: int, trials: int, seed: int = 0,
                    workers: int = 1, chunk: int = 10_000) -> TrialStats:
    """Run ``trials`` independent executions of the online algorithm.

    With ``workers > 1`` chunks of trials go to a process pool; output is
    identical to the serial run.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if seed < 0:
        raise ParameterError("seed must be >= 0")
    bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_chunk, oracle, k, seed, a, b) for a, b in bounds]
            parts = [f.result() for f in futures]
    else:
        parts = [_simulate_chunk(oracle, k, seed, a, b) for a, b in bounds]
    return TrialStats(np.concatenate([p.values for p in parts]),
                      np.concatenate([p.calls for p in parts]))


class RatioEstimate(NamedTuple):
    ratio: float
    stderr: float


def estimate_competitive_ratio(oracle: ValueOracle, k: int, trials: int, seed: int = 0,
                               workers: int = 1) -> RatioEstimate:
    """Mean of ``f(S_k) / OPT_k`` over ``trials`` runs, with its standard error."""
    opt = brute_force_opt(oracle, oracle.n, k).value
    if opt <= 0:
        raise DegenerateInstanceError("optimum value is 0; ratio undefined")
    stats = simulate_trials(oracle, k, trials, seed, workers)
    mean, se = _mean_stderr(stats.values / opt)
    return RatioEstimate(mean, se)


# --------------------------------------------------------------------------
# sampling lemmas


class LemmaCheck(NamedTuple):
    estimate: float
    bound: float
    passed: bool
    stderr: float


def _sampled_mean(oracle: ValueOracle, a: Sequence[int], probs: np.ndarray, trials: int,
                  rng: np.random.Generator) -> tuple[float, float]:
    a = list(a)
    m = len(a)
    table = np.array([oracle._value(frozenset(a[i] for i in range(m) if mask >> i & 1))
                      for mask in range(1 << m)])
    keep = rng.random((trials, m)) < probs
    idx = keep.astype(np.int64) @ (1 << np.arange(m, dtype=np.int64))
    return _mean_stderr(table[idx])


def _check_lemma_args(oracle, a, trials):
    a = sorted(oracle.check_set(a))
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    return a


def verify_sampling_lemma(oracle: ValueOracle, a, p: float, trials: int, seed: int = 0) -> LemmaCheck:
    """Check ``E[f(A(p))] >= (1-p) f(empty) + p f(A)`` for independent inclusion."""
    if not 0 <= p <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    a = _check_lemma_args(oracle, a, trials)
    rng = np.random.default_rng(seed)
    est, se = _sampled_mean(oracle, a, np.full(len(a), p), trials, rng)
    bound = (1 - p) * oracle._value(frozenset()) + p * oracle._value(frozenset(a))
    return LemmaCheck(est, bound, est >= bound - Z_SLACK * se - ABS_TOL, se)


def verify_bounded_sampling_lemma(oracle: ValueOracle, a, probs, p: float, trials: int,
                                  seed: int = 0) -> LemmaCheck:
    """Check ``E[f(A)] >= (1-p) f(empty)`` when each element appears w.p. at most ``p``."""
    a = _check_lemma_args(oracle, a, trials)
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (len(a),):
        raise ParameterError(f"need one probability per element of a ({len(a)}), got {probs.shape}")
    if np.any(probs < 0) or np.any(probs > p):
        raise ParameterError(f"every probability must lie in [0, p={p}]")
    rng = np.random.default_rng(seed)
    est, se = _sampled_mean(oracle, a, probs, trials, rng)
    bound = (1 - p) * oracle._value(frozenset())
    return LemmaCheck(est, bound, est >= bound - Z_SLACK * se - ABS_TOL, se)


def segment_hit_mean(k: int, s: int, trials: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo mean/stderr of how many windows a fixed ``s``-set lands in."""
    rng = np.random.default_rng(seed)
    t = rng.random((trials, s))
    seg = np.minimum((t * k).astype(np.int64), k - 1)
    hit = np.zeros((trials, k), dtype=bool)
    np.put_along_axis(hit, seg, True, axis=1)
    return _mean_stderr(hit.sum(axis=1).astype(float))


# --------------------------------------------------------------------------
# verification suites


class CheckRow(NamedTuple):
    suite: str
    name: str
    observed: float
    bound: float
    relation: str
    passed: bool


LEMMA1_SIZES = (1, 2, 5, 10, 50)
LEMMA_PROBS = (0.0, 0.25, INV_E, 0.5, 1.0)
LEMMA_SET_SIZES = range(1, 9)
PROB_TOL = 0.01


def lemma1_suite(trials: int = 200_000, seed: int = 0) -> list[CheckRow]:
    rows = []
    for n in LEMMA1_SIZES:
        rng = np.random.default_rng(seed + n)
        weights = rng.permutation(n) + 1.0
        prof = selection_probability_profile(n, weights, trials, rng)
        rows.append(CheckRow("lemma1", f"n={n} best-element frequency", prof.best_frequency,
                             INV_E - PROB_TOL, ">=", prof.best_frequency >= INV_E - PROB_TOL))
        rows.append(CheckRow("lemma1", f"n={n} max per-element frequency", prof.max_frequency,
                             INV_E + PROB_TOL, "<=", prof.max_frequency <= INV_E + PROB_TOL))
        if n == 1:
            f = prof.frequencies[0]
            rows.append(CheckRow("lemma1", "n=1 frequency within 1/e +- 0.01", f, INV_E, "~=",
                                 abs(f - INV_E) <= PROB_TOL))
    return rows


def lemma_instances(seed: int = 0, n: int = 8) -> dict[str, ValueOracle]:
    """Coverage/cut/modular instances used by the sampling-lemma suites."""
    rng = np.random.default_rng(seed)
    return {
        "coverage": sample_random_instance("coverage", {"n": n, "universe": 12, "p": 0.3}, rng),
        "cut": sample_random_instance("cut", {"n": n, "edge_prob": 0.5, "max_weight": 5}, rng),
        "modular": sample_random_instance("modular", {"n": n, "max_weight": 10}, rng),
    }


def _lemma_grid(seed):
    insts = lemma_instances(seed)
    rng = np.random.default_rng(seed + 1)
    for kind, oracle in insts.items():
        perm = rng.permutation(oracle.n).tolist()
        for size in LEMMA_SET_SIZES:
            for p in LEMMA_PROBS:
                yield kind, oracle, sorted(perm[:size]), p


def fmv_suite(trials: int = 100_000, seed: int = 0) -> list[CheckRow]:
    rows = []
    for i, (kind, oracle, a, p) in enumerate(_lemma_grid(seed)):
        res = verify_sampling_lemma(oracle, a, p, trials, seed + i)
        rows.append(CheckRow("fmv", f"{kind} |a|={len(a)} p={p:.4f}", res.estimate, res.bound,
                             ">=", res.passed))
    return rows


def bfns_suite(trials: int = 100_000, seed: int = 0) -> list[CheckRow]:
    rows = []
    rng = np.random.default_rng(seed + 2)
    for i, (kind, oracle, a, p) in enumerate(_lemma_grid(seed)):
        probs = p * rng.uniform(0.5, 1.0, size=len(a))
        for label, target in ((kind, oracle), (f"{kind}+1", ShiftedOracle(oracle, 1.0))):
            res = verify_bounded_sampling_lemma(target, a, probs, p, trials, seed + i)
            rows.append(CheckRow("bfns", f"{label} |a|={len(a)} p={p:.4f}", res.estimate,
                                 res.bound, ">=", res.passed))
    return rows


SUITES = {"lemma1": lemma1_suite, "fmv": fmv_suite, "bfns": bfns_suite}


def run_suites(names: Sequence[str], trials: int | None = None, seed: int = 0) -> list[CheckRow]:
    rows = []
    for name in names:
        fn = SUITES[name]
        rows.extend(fn(seed=seed) if trials is None else fn(trials=trials, seed=seed))
    return rows


def format_rows(rows: Sequence[CheckRow]) -> str:
    width = max((len(r.name) for r in rows), default=4)
    lines = [f"{'suite':<7} {'check':<{width}} {'observed':>10}    {'bound':>10}  result"]
    for r in rows:
        lines.append(f"{r.suite:<7} {r.name:<{width}} {r.observed:>10.6f} {r.relation:>2} "
                     f"{r.bound:>10.6f}  {'PASS' if r.passed else 'FAIL'}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# experiments


@dataclass
class InstanceEntry:
    instance_id: str
    oracle: ValueOracle
    k: int | None = None


@dataclass
class ExperimentConfig:
    instances: list
    k: int = 1
    trials: int = 1000
    seed: int = 0
    algorithm: str = "submodular-secretary"
    baselines: tuple = BASELINES
    workers: int = 1
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.seed < 0:
            raise ParameterError("seed must be >= 0")
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(f"unknown algorithm {self.algorithm!r}")
        bad = set(self.baselines) - set(BASELINES)
        if bad:
            raise ParameterError(f"unknown baselines {sorted(bad)}")

    @classmethod
    def from_dict(cls, raw: dict, base_dir=".") -> "ExperimentConfig":
        raw = dict(raw)
        known = {"instances", "k", "trials", "seed", "algorithm", "baselines", "workers"}
        extra = set(raw) - known
        if extra:
            raise InstanceFormatError(f"unknown config keys {sorted(extra)}")
        if "instances" not in raw:
            raise InstanceFormatError("config needs an 'instances' list")
        if "baselines" in raw:
            raw["baselines"] = tuple(raw["baselines"])
        return cls(base_dir=Path(base_dir), **raw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InstanceFormatError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(raw, path.parent)

    def materialize(self) -> list[InstanceEntry]:
        out = []
        for i, spec in enumerate(self.instances):
            if isinstance(spec, ValueOracle):
                out.append(InstanceEntry(f"inst{i}", spec))
                continue
            spec = dict(spec)
            iid = str(spec.pop("id", f"inst{i}"))
            k = spec.pop("k", None)
            if "file" in spec:
                oracle = load_instance(self.base_dir / spec["file"])
            elif "generate" in spec:
                rng = np.random.default_rng(spec.get("seed", 0))
                oracle = sample_random_instance(spec["generate"], spec.get("params", {}), rng)
            else:
                oracle = instance_from_dict(spec)
            out.append(InstanceEntry(iid, oracle, k))
        return out


@dataclass
class ReportRow:
    instance_id: str
    n: int
    k: int
    trials: int
    mean_value: float
    stderr: float
    opt_value: float | None
    greedy_value: float | None
    ratio: float | None
    mean_oracle_calls: float


@dataclass
class Report:
    rows: list[ReportRow] = field(default_factory=list)


CSV_HEADER = ("instance_id", "n", "k", "trials", "mean_value", "stderr", "opt_value",
              "greedy_value", "ratio", "mean_oracle_calls")


def run_experiment(config: ExperimentConfig) -> Report:
    report = Report()
    for entry in config.materialize():
        oracle = entry.oracle
        k = entry.k or config.k
        opt = greedy = None
        if "brute-force-opt" in config.baselines:
            if oracle.n > 20:
                raise SizeLimitError(f"{entry.instance_id}: brute force needs n <= 20, got {oracle.n}")
            opt = brute_force_opt(oracle, oracle.n, k).value
        if "offline-greedy" in config.baselines:
            greedy = offline_greedy(oracle, oracle.n, k).value
        stats = simulate_trials(oracle, k, config.trials, config.seed, config.workers)
        mean, se = _mean_stderr(stats.values)
        ratio = mean / opt if opt else None
        calls = math.fsum(stats.calls.tolist()) / config.trials
        log.info("%s: n=%d k=%d mean=%.4f ratio=%s", entry.instance_id, oracle.n, k, mean, ratio)
        report.rows.append(ReportRow(entry.instance_id, oracle.n, k, config.trials, mean, se,
                                     opt, greedy, ratio, calls))
    return report


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(x)
    return f"{x:.6g}"


def write_csv(report: Report, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in report.rows:
            w.writerow([r.instance_id] + [_fmt(getattr(r, c)) for c in CSV_HEADER[1:]])
