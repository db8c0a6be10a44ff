import itertools
import math

import numpy as np
import pytest

from conftest import all_subsets
from subsec import kernels
from subsec.algorithm import (COMPETITIVE_RATIO, brute_force_opt, expected_segment_hits,
                              offline_greedy, run_submodular_secretary)
from subsec.arrivals import ArrivalSchedule, sample_schedule
from subsec.errors import InvalidSetError, ParameterError, SizeLimitError
from subsec.harness import segment_hit_mean, simulate_trials
from subsec.oracles import (CoverageOracle, CutOracle, FunctionOracle, ModularOracle,
                            ShiftedOracle, sample_random_instance)
from subsec.secretary import INV_E

KINDS = {
    "coverage": lambda n: {"n": n, "universe": 2 * n + 1, "p": 0.3},
    "cut": lambda n: {"n": n, "edge_prob": 0.5, "max_weight": 5},
    "modular": lambda n: {"n": n, "max_weight": 10},
}


def test_ratio_constant():
    assert COMPETITIVE_RATIO == pytest.approx(0.10746, abs=1e-5)


def test_empty_ground_set(rng):
    res = run_submodular_secretary(ModularOracle([]), sample_schedule(0, rng), 3, rng)
    assert res.solution == () and res.value == 0 and res.oracle_calls == 1


def test_single_modular_element_expectation():
    stats = simulate_trials(ModularOracle([5]), 1, 200_000, seed=0)
    assert abs(stats.values.mean() - 5 / math.e) <= 0.03


def test_single_modular_element_reference_path():
    oracle = ModularOracle([5])
    vals = []
    for i in range(20_000):
        r = np.random.default_rng(i)
        vals.append(run_submodular_secretary(oracle, sample_schedule(1, r), 1, r).value)
    assert abs(np.mean(vals) - 5 / math.e) <= 0.1


def test_negative_marginal_is_rejected(single_edge):
    for seed in range(500):
        r = np.random.default_rng(seed)
        res = run_submodular_secretary(single_edge, sample_schedule(2, r), 2, r)
        assert res.solution != (0, 1)
        for step in res.steps:
            if step.element is not None and step.marginal < 0:
                assert not step.accepted


def test_guard_forces_rejection_deterministically(single_edge):
    # element 0 alone in window 1, element 1 alone in window 2; coins of 0 always take
    sched = ArrivalSchedule.from_times([0.45, 0.95])

    class ZeroCoins:
        def random(self, k):
            return np.zeros(k)

    res = run_submodular_secretary(single_edge, sched, 2, ZeroCoins())
    assert res.steps[0].accepted and res.steps[1].element == 1
    assert res.steps[1].marginal == -2 and not res.steps[1].accepted
    assert res.solution == (0,) and res.value == 2


def test_parameter_errors(modular312, rng):
    sched = sample_schedule(3, rng)
    with pytest.raises(ParameterError):
        run_submodular_secretary(modular312, sched, 0, rng)
    with pytest.raises(InvalidSetError):
        run_submodular_secretary(modular312, sample_schedule(4, rng), 2, rng)


class CountingOracle(FunctionOracle):
    def __init__(self, base):
        self.calls = 0

        def f(s):
            self.calls += 1
            return base._value(s)
        super().__init__(base.n, f, "counting")


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_invariants_on_fuzzed_runs(kind):
    for n in (1, 5, 9, 12):
        oracle = sample_random_instance(kind, KINDS[kind](n), np.random.default_rng(n))
        for k in sorted({1, 2, max(1, n // 2), n}):
            for seed in range(60):
                r = np.random.default_rng(seed)
                sched = sample_schedule(n, r)
                probe = CountingOracle(oracle)
                res = run_submodular_secretary(probe, sched, k, r)
                assert len(res.solution) <= k
                assert res.oracle_calls == probe.calls
                assert res.value == oracle.evaluate(res.solution)
                when = dict(sched)
                value = oracle.evaluate(())
                for step in res.steps:
                    if step.accepted:
                        assert step.marginal >= 0
                        t = when[step.element]
                        assert (step.index - 1) / k <= t * (1 + 1e-12) and t < step.index / k + 1e-12
                        new_value = value + step.marginal
                        assert new_value >= value
                        value = new_value
                assert sum(s.accepted for s in res.steps) == len(res.solution)
                assert len(res.steps) == k


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_batch_sizes_respect_k_over_many_seeds(kind):
    for n in (3, 8, 12):
        oracle = sample_random_instance(kind, KINDS[kind](n), np.random.default_rng(100 + n))
        payload = kernels.pack(oracle)
        for k in range(1, n + 1):
            rng = np.random.default_rng(k)
            times = rng.random((1000, n))
            coins = rng.random((1000, k))
            order = np.argsort(times, axis=1, kind="stable")
            sorted_times = np.take_along_axis(times, order, axis=1)
            values, calls, sizes = kernels.submodular_secretary_batch(payload, k, order, sorted_times, coins)
            assert sizes.max() <= k
            assert np.all(values >= 0)
            assert np.all(calls <= n + min(k, n) + 1)


def test_call_count_reproducible(rng):
    oracle = sample_random_instance("coverage", KINDS["coverage"](10), rng)
    runs = []
    for _ in range(2):
        r = np.random.default_rng(77)
        runs.append(run_submodular_secretary(oracle, sample_schedule(10, r), 3, r))
    assert runs[0] == runs[1]


@pytest.mark.parametrize("seed", range(5))
def test_backends_match_reference(backend, seed):
    rng = np.random.default_rng(seed)
    for kind in KINDS:
        oracle = sample_random_instance(kind, KINDS[kind](9), rng)
        for target in (oracle, ShiftedOracle(oracle, 1.5)):
            for k in (1, 2, 4, 9):
                stats = simulate_trials(target, k, 200, seed=seed)
                for i in range(0, 200, 7):
                    r = np.random.default_rng(seed + i)
                    res = run_submodular_secretary(target, sample_schedule(9, r), k, r)
                    assert stats.values[i] == res.value
                    assert stats.calls[i] == res.oracle_calls


def test_custom_oracle_uses_reference_path():
    oracle = FunctionOracle(4, lambda s: min(len(s), 2))
    assert kernels.pack(oracle) is None
    stats = simulate_trials(oracle, 2, 50, seed=3)
    r = np.random.default_rng(3 + 10)
    res = run_submodular_secretary(oracle, sample_schedule(4, r), 2, r)
    assert stats.values[10] == res.value


def enumerate_opt(oracle, k):
    best = None
    for r in range(min(k, oracle.n) + 1):
        for s in itertools.combinations(range(oracle.n), r):
            v = oracle.evaluate(s)
            if best is None or v > best[1] + 1e-9 or (abs(v - best[1]) <= 1e-9 and s < best[0]):
                best = (s, v)
    return best


def test_brute_force_examples(modular312, triangle):
    res = brute_force_opt(modular312, 3, 2)
    assert (res.set, res.value) == ((0, 2), 5)
    assert brute_force_opt(triangle, 3, 1).value == 2
    assert brute_force_opt(triangle, 3, 1).set == (0,)
    empty = brute_force_opt(modular312, 3, 0)
    assert (empty.set, empty.value) == ((), 0)


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_brute_force_matches_enumeration(kind, rng):
    for _ in range(5):
        oracle = sample_random_instance(kind, KINDS[kind](7), rng)
        for k in range(0, 8):
            res = brute_force_opt(oracle, 7, k)
            assert (res.set, res.value) == enumerate_opt(oracle, k)


def test_brute_force_limits(modular312):
    with pytest.raises(SizeLimitError):
        brute_force_opt(ModularOracle([1] * 21), 21, 2)
    with pytest.raises(ParameterError):
        brute_force_opt(modular312, 3, -1)


def test_greedy_examples(modular312):
    res = offline_greedy(modular312, 3, 2)
    assert (res.set, res.value) == ((0, 2), 5)
    cov = CoverageOracle([["x", "y"], ["y", "z"], ["x"]])
    res = offline_greedy(cov, 3, 2)
    assert (res.set, res.value) == ((0, 1), 3)
    assert offline_greedy(modular312, 3, 0).set == ()


def test_greedy_stops_without_positive_gain(single_edge):
    res = offline_greedy(single_edge, 2, 2)
    assert res.set == (0,) and res.value == 2


def test_greedy_equals_opt_on_modular():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        oracle = sample_random_instance("modular", {"n": n, "max_weight": 20}, rng)
        k = int(rng.integers(0, n + 1))
        assert brute_force_opt(oracle, n, k).value == offline_greedy(oracle, n, k).value


def test_expected_segment_hits_examples():
    assert expected_segment_hits(1, 1) == 1
    assert expected_segment_hits(2, 2) == 1.5
    assert expected_segment_hits(2, 2) >= 2 * (1 - 1 / math.e)
    with pytest.raises(ParameterError):
        expected_segment_hits(2, 3)
    with pytest.raises(ParameterError):
        expected_segment_hits(0, 0)


def test_expected_segment_hits_bound_grid():
    for k in range(1, 201):
        for s in range(1, k + 1):
            assert expected_segment_hits(k, s) >= s * (1 - 1 / math.e)


def brute_force_hits(k, s):
    """Average distinct windows over every assignment of s elements to k windows."""
    total = 0
    for cells in itertools.product(range(k), repeat=s):
        total += len(set(cells))
    return total / k ** s


@pytest.mark.parametrize("k,s", [(1, 1), (2, 2), (3, 2), (4, 3), (5, 3)])
def test_expected_segment_hits_matches_enumeration(k, s):
    assert expected_segment_hits(k, s) == pytest.approx(brute_force_hits(k, s), rel=1e-12)


@pytest.mark.parametrize("k,s", [(2, 2), (5, 3), (10, 10)])
def test_segment_hits_monte_carlo(k, s):
    mean, _ = segment_hit_mean(k, s, 100_000, seed=k)
    assert abs(mean - expected_segment_hits(k, s)) <= 0.02
