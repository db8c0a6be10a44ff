"""Online submodular secretary algorithm and offline baselines."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrivals import ArrivalSchedule, partition_segments, rescale_local_times
from .errors import InvalidSetError, ParameterError, SizeLimitError
from .oracles import NONNEGATIVE_CHECK_MAX_N, TOL, ValueOracle
from .secretary import NO_ITEMS, SecretaryOutcome, WeightedStream, decide

#: Guaranteed competitive ratio, (e-1)^2 / (e^2 (1+e)) ~= 0.1075.
COMPETITIVE_RATIO = (math.e - 1) ** 2 / (math.e ** 2 * (1 + math.e))

BRUTE_FORCE_MAX_N = NONNEGATIVE_CHECK_MAX_N


@dataclass(frozen=True)
class SegmentStep:
    index: int
    outcome: SecretaryOutcome
    element: int | None
    accepted: bool
    marginal: float | None


@dataclass(frozen=True)
class RunResult:
    solution: tuple[int, ...]
    value: float
    steps: tuple[SegmentStep, ...]
    oracle_calls: int


@dataclass(frozen=True)
class OptResult:
    set: tuple[int, ...]
    value: float


class _LazyMarginals:
    """Marginal gains against a frozen base set, evaluated on first access."""

    def __init__(self, oracle, base_set, base_value, elements):
        self.oracle = oracle
        self.base_set = base_set
        self.base_value = base_value
        self.elements = elements
        self.values: dict[int, float] = {}

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, j):
        if j not in self.values:
            self.values[j] = self.oracle._value(self.base_set | {self.elements[j]})
        return self.values[j] - self.base_value


def _check_schedule(oracle, schedule):
    if sorted(schedule.elements) != list(range(oracle.n)):
        raise InvalidSetError(
            f"schedule of {len(schedule)} arrivals is not a permutation of the oracle's {oracle.n} elements"
        )


def run_submodular_secretary(oracle: ValueOracle, schedule: ArrivalSchedule, k: int,
                             rng: np.random.Generator) -> RunResult:
    """Pick at most one element per time window using marginal gains as weights.

    Consumes ``rng.random(k)`` (one coin per window) up front.  Oracle calls
    are counted exactly: one ``f(S)`` per distinct base set that is actually
    needed, plus one ``f(S + v)`` per observed arrival.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    _check_schedule(oracle, schedule)
    coins = rng.random(k)
    solution: frozenset = frozenset()
    value = None
    calls = 0
    steps = []
    for seg in partition_segments(schedule, k):
        seg = rescale_local_times(seg)
        if not seg.items:
            steps.append(SegmentStep(seg.index, SecretaryOutcome(None, None, NO_ITEMS), None, False, None))
            continue
        if value is None:
            value = oracle._value(solution)
            calls += 1
        gains = _LazyMarginals(oracle, solution, value, seg.elements)
        outcome = decide(WeightedStream(gains, seg.times), coins[seg.index - 1])
        calls += len(gains.values)
        element = marginal = None
        accepted = False
        if outcome.selected is not None:
            element = seg.elements[outcome.selected]
            marginal = gains[outcome.selected]
            if marginal >= 0:
                accepted = True
                solution = solution | {element}
                value = gains.values[outcome.selected]
        steps.append(SegmentStep(seg.index, outcome, element, accepted, marginal))
    if value is None:
        value = oracle._value(solution)
        calls += 1
    return RunResult(tuple(sorted(solution)), value, tuple(steps), calls)


def _members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def brute_force_opt(oracle: ValueOracle, n: int | None = None, k: int = 1) -> OptResult:
    """Best set of size at most ``k``; ties go to the lexicographically smallest."""
    n = oracle.n if n is None else n
    if n != oracle.n:
        raise ParameterError(f"n={n} does not match oracle ground set size {oracle.n}")
    if n > BRUTE_FORCE_MAX_N:
        raise SizeLimitError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    vals = oracle.subset_values()
    masks = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        sizes += (masks >> i) & 1
    feasible = sizes <= k
    best = vals[feasible].max()
    winners = masks[feasible & (vals >= best - TOL)]
    chosen = min(_members(int(m)) for m in winners)
    return OptResult(chosen, oracle._value(frozenset(chosen)))


def offline_greedy(oracle: ValueOracle, n: int | None = None, k: int = 1) -> OptResult:
    """Repeatedly add the element of largest positive marginal gain (smallest id on ties)."""
    n = oracle.n if n is None else n
    if n != oracle.n:
        raise ParameterError(f"n={n} does not match oracle ground set size {oracle.n}")
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    chosen: frozenset = frozenset()
    value = oracle._value(chosen)
    while len(chosen) < k:
        best_gain, best_v, best_val = 0.0, None, None
        for v in range(n):
            if v in chosen:
                continue
            val = oracle._value(chosen | {v})
            if val - value > best_gain:
                best_gain, best_v, best_val = val - value, v, val
        if best_v is None:
            break
        chosen = chosen | {best_v}
        value = best_val
    return OptResult(tuple(sorted(chosen)), value)


def expected_segment_hits(k: int, s: int) -> float:
    """Expected number of the ``k`` windows holding at least one of ``s`` fixed elements."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not 0 <= s <= k:
        raise ParameterError(f"need 0 <= s <= k, got s={s}, k={k}")
    return k * (1.0 - (1.0 - 1.0 / k) ** s)
