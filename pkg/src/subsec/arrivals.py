"""Continuous-time arrivals and the split of [0, 1] into k equal windows."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class ArrivalSchedule:
    """Elements in arrival order with their (global) arrival times."""

    elements: tuple[int, ...]
    times: tuple[float, ...]

    def __post_init__(self):
        if len(self.elements) != len(self.times):
            raise ParameterError("elements and times differ in length")

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(zip(self.elements, self.times))

    @classmethod
    def from_times(cls, times) -> "ArrivalSchedule":
        """Build a schedule where element ``v`` arrives at ``times[v]``.

        Ties go to the smaller element id.
        """
        times = np.asarray(times, dtype=float)
        if times.ndim != 1:
            raise ParameterError("times must be one-dimensional")
        if times.size and (times.min() < 0 or times.max() > 1):
            raise ParameterError("arrival times must lie in [0, 1]")
        order = np.argsort(times, kind="stable")
        return cls(tuple(order.tolist()), tuple(times[order].tolist()))


@dataclass(frozen=True)
class Segment:
    """Elements arriving in window ``index`` (1-based) out of ``k``.

    ``items`` holds ``(element, time)`` pairs; the times are global until the
    segment has passed through :func:`rescale_local_times`.
    """

    index: int
    k: int
    items: tuple[tuple[int, float], ...]
    local: bool = False

    def __len__(self):
        return len(self.items)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.items)

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for _, t in self.items)


def sample_schedule(n: int, rng: np.random.Generator) -> ArrivalSchedule:
    """Give each of the ``n`` elements an independent uniform arrival time.

    Consumes exactly ``rng.random(n)``; element ``v`` gets the ``v``-th draw.
    """
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return ArrivalSchedule.from_times(rng.random(n))


def segment_of(t: float, k: int) -> int:
    """0-based window index of time ``t``: half-open windows, the last closed at 1."""
    return min(int(t * k), k - 1)


def partition_segments(schedule: ArrivalSchedule, k: int) -> list[Segment]:
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    buckets: list[list[tuple[int, float]]] = [[] for _ in range(k)]
    for v, t in schedule:
        buckets[segment_of(t, k)].append((v, t))
    return [Segment(l + 1, k, tuple(items)) for l, items in enumerate(buckets)]


def rescale_local_times(segment: Segment) -> Segment:
    """Map global times of window ``l`` onto [0, 1) via ``t -> k*t - (l-1)``."""
    if segment.local:
        return segment
    shift = segment.index - 1
    items = tuple((v, t * segment.k - shift) for v, t in segment.items)
    return Segment(segment.index, segment.k, items, local=True)
