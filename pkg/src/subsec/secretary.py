"""Single-choice secretary rule with a capped per-element selection probability.

Arrivals before ``1/e`` are only observed; their best weight becomes the
threshold.  If nothing arrives before ``1/e``, the first arrival (at time
``t1``) is taken only with probability ``1/(e*t1)``, which is what keeps every
element's selection probability at or below ``1/e``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InvalidStreamError, ParameterError

INV_E = 1.0 / math.e

NO_ITEMS = "no-items"
FIRST_ITEM_COIN = "first-item-coin"
THRESHOLD = "threshold"


@dataclass(frozen=True)
class WeightedStream:
    """Weights and local arrival times, in arrival order.

    ``weights`` only needs ``__getitem__`` and ``__len__``, so callers can pass
    a lazily evaluated sequence.
    """

    weights: Sequence[float]
    times: Sequence[float]

    @classmethod
    def from_items(cls, items) -> "WeightedStream":
        items = list(items)
        return cls([w for w, _ in items], [t for _, t in items])

    @property
    def items(self):
        return list(zip(self.weights, self.times))

    def __len__(self):
        return len(self.times)

    def validate(self) -> None:
        if len(self.weights) != len(self.times):
            raise InvalidStreamError("weights and times differ in length")
        prev = 0.0
        for t in self.times:
            if not 0.0 <= t <= 1.0:
                raise InvalidStreamError(f"time {t} outside [0, 1]")
            if t < prev:
                raise InvalidStreamError("times are not sorted ascending")
            prev = t


@dataclass(frozen=True)
class SecretaryOutcome:
    selected: int | None
    threshold: float | None
    branch: str
    coin_probability: float | None = None


def decide(stream: WeightedStream, coin: float) -> SecretaryOutcome:
    """Run the rule on a validated stream with a pre-drawn uniform ``coin``.

    Weights are read in arrival order and only up to the decision point.
    """
    times, weights = stream.times, stream.weights
    n = len(times)
    if n == 0:
        return SecretaryOutcome(None, None, NO_ITEMS)
    if times[0] >= INV_E:
        weights[0]  # the first arrival is observed even if the coin says no
        p = 1.0 / (math.e * times[0])
        return SecretaryOutcome(0 if coin < p else None, None, FIRST_ITEM_COIN, p)
    theta = -math.inf
    i = 0
    while i < n and times[i] < INV_E:
        theta = max(theta, weights[i])
        i += 1
    while i < n:
        if weights[i] >= theta:
            return SecretaryOutcome(i, theta, THRESHOLD)
        i += 1
    return SecretaryOutcome(None, theta, THRESHOLD)


def run_modified_secretary(stream: WeightedStream, rng: np.random.Generator) -> SecretaryOutcome:
    """Validate ``stream`` and run the rule; always consumes one ``rng.random()``."""
    stream.validate()
    return decide(stream, rng.random())


@dataclass(frozen=True)
class SelectionProfile:
    frequencies: np.ndarray
    best_frequency: float
    trials: int

    @property
    def max_frequency(self) -> float:
        return float(self.frequencies.max()) if self.frequencies.size else 0.0


def selection_probability_profile(n: int, weights, trials: int, rng: np.random.Generator) -> SelectionProfile:
    """Estimate how often each element is picked over ``trials`` random schedules.

    Draws ``rng.random((trials, n))`` for arrival times then
    ``rng.random(trials)`` for coins.
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (n,):
        raise ParameterError(f"expected {n} weights, got shape {weights.shape}")
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if len(np.unique(weights)) != n:
        raise ParameterError("weights must be distinct")
    times = rng.random((trials, n))
    coins = rng.random(trials)
    order = np.argsort(times, axis=1, kind="stable")
    sorted_times = np.take_along_axis(times, order, axis=1)
    picked = kernels.secretary_batch(weights, order, sorted_times, coins)
    counts = np.bincount(picked[picked >= 0], minlength=n)
    freqs = counts / trials
    best = int(np.argmax(weights)) if n else -1
    return SelectionProfile(freqs, float(freqs[best]) if n else 0.0, trials)
