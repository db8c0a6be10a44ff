import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subsec.arrivals import (ArrivalSchedule, partition_segments, rescale_local_times,
                             sample_schedule)
from subsec.errors import ParameterError


def ks_uniform(x):
    x = np.sort(np.asarray(x))
    m = len(x)
    i = np.arange(1, m + 1)
    return max(np.max(i / m - x), np.max(x - (i - 1) / m))


def test_empty_schedule(rng):
    assert len(sample_schedule(0, rng)) == 0


def test_single_arrival_mean():
    rng = np.random.default_rng(3)
    times = [sample_schedule(1, rng).times[0] for _ in range(100_000)]
    assert abs(np.mean(times) - 0.5) <= 0.005


def test_schedule_deterministic():
    a = sample_schedule(5, np.random.default_rng(7))
    b = sample_schedule(5, np.random.default_rng(7))
    assert a == b
    assert sorted(a.elements) == list(range(5))
    assert list(a.times) == sorted(a.times)


def test_schedule_ties_broken_by_id():
    s = ArrivalSchedule.from_times([0.5, 0.2, 0.5, 0.2])
    assert s.elements == (1, 3, 0, 2)


def test_negative_n(rng):
    with pytest.raises(ParameterError):
        sample_schedule(-1, rng)


def test_partition_examples():
    segs = partition_segments(ArrivalSchedule.from_times([0.1, 0.6]), 2)
    assert [s.elements for s in segs] == [(0,), (1,)]
    segs = partition_segments(ArrivalSchedule.from_times([0.3, 0.9, 0.1]), 1)
    assert segs[0].elements == (2, 0, 1)
    segs = partition_segments(ArrivalSchedule.from_times([0.5]), 2)
    assert segs[0].items == () and segs[1].elements == (0,)
    assert segs[1].index == 2
    segs = partition_segments(ArrivalSchedule.from_times([1.0]), 3)
    assert segs[2].elements == (0,)


def test_partition_k_zero():
    with pytest.raises(ParameterError):
        partition_segments(ArrivalSchedule.from_times([0.1]), 0)


def test_rescale_examples():
    seg = partition_segments(ArrivalSchedule.from_times([0.75]), 2)[1]
    assert rescale_local_times(seg).times == (0.5,)
    seg = partition_segments(ArrivalSchedule.from_times([0.1, 2 / 4]), 4)[2]
    assert rescale_local_times(seg).times == (0.0,)
    empty = partition_segments(ArrivalSchedule.from_times([0.1]), 2)[1]
    assert rescale_local_times(empty).items == ()


GRID = (0.0, 0.2, 0.25, 0.5, 0.75, 1.0)


@pytest.mark.parametrize("n", range(0, 7))
def test_partition_is_a_partition_on_grid(n):
    for times in itertools.product(GRID, repeat=n) if n <= 4 else _sampled_grid(n):
        sched = ArrivalSchedule.from_times(times)
        for k in (1, 2, 3, 4):
            segs = partition_segments(sched, k)
            assert len(segs) == k
            flat = [item for s in segs for item in s.items]
            assert flat == list(sched)  # disjoint, covering, order preserving
            for s in segs:
                for v, t in s.items:
                    lo, hi = (s.index - 1) / k, s.index / k
                    assert lo <= t < hi or (s.index == k and t == 1.0)


def _sampled_grid(n):
    rng = np.random.default_rng(n)
    yield from itertools.islice(itertools.product(GRID, repeat=n), 0, None, 7)
    for _ in range(200):
        yield tuple(rng.choice(GRID, size=n))


@given(st.lists(st.floats(0, 1), max_size=12), st.integers(1, 9))
def test_local_times_in_unit_interval(times, k):
    for seg in partition_segments(ArrivalSchedule.from_times(times), k):
        local = rescale_local_times(seg)
        assert list(local.times) == sorted(local.times)
        assert local.elements == seg.elements
        for (_, t), (_, u) in zip(seg.items, local.items):
            assert u == t * k - (seg.index - 1)
            assert 0 <= u < 1 or (t == 1.0 and u == 1.0)


def test_local_times_uniform_within_window():
    rng = np.random.default_rng(11)
    k, window = 4, 2
    local = []
    while len(local) < 100_000:
        seg = partition_segments(sample_schedule(6, rng), k)[window - 1]
        local.extend(rescale_local_times(seg).times)
    assert ks_uniform(local[:100_000]) <= 0.01


def test_each_element_lands_in_each_window_equally():
    rng = np.random.default_rng(5)
    n, k, trials = 3, 4, 100_000
    counts = np.zeros((n, k))
    for _ in range(trials):
        for seg in partition_segments(sample_schedule(n, rng), k):
            for v in seg.elements:
                counts[v, seg.index - 1] += 1
    assert np.all(np.abs(counts / trials - 1 / k) <= 0.01)
