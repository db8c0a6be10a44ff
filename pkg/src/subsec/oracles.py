"""Value oracles for non-negative set functions and exhaustive verifiers.

Elements of the ground set are the integers ``0..n-1``.  Whole subset tables
(``subset_values``) are indexed by bitmask, bit ``i`` standing for element
``i``.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InstanceFormatError, InvalidSetError, ParameterError, SizeLimitError

TOL = 1e-9
SUBMODULAR_CHECK_MAX_N = 12
NONNEGATIVE_CHECK_MAX_N = 20

ORACLE_KINDS = ("coverage", "cut", "modular")


class ValueOracle:
    """A set function ``f: 2^V -> R`` accessed through evaluation queries.

    Subclasses implement ``_value`` on an already validated ``frozenset``.
    Instances are immutable after construction.
    """

    kind = "custom"

    def __init__(self, n: int):
        if n < 0:
            raise ParameterError(f"ground set size must be >= 0, got {n}")
        self.n = int(n)

    def _value(self, members: frozenset) -> float:
        raise NotImplementedError

    def check_set(self, s: Iterable[int]) -> frozenset:
        members = list(s)
        for v in members:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InvalidSetError(f"element id {v!r} is not an integer")
            if not 0 <= v < self.n:
                raise InvalidSetError(f"element id {v} outside 0..{self.n - 1}")
        out = frozenset(int(v) for v in members)
        if len(out) != len(members):
            raise InvalidSetError("element set contains duplicate ids")
        return out

    def evaluate(self, s: Iterable[int] = ()) -> float:
        return self._value(self.check_set(s))

    def marginal_gain(self, v: int, s: Iterable[int] = ()) -> float:
        base = self.check_set(s)
        (v,) = self.check_set([v])
        if v in base:
            raise InvalidSetError(f"element {v} is already in the set")
        return self._value(base | {v}) - self._value(base)

    def subset_values(self) -> np.ndarray:
        """Return ``f`` on every subset, indexed by bitmask."""
        n = self.n
        out = np.empty(1 << n, dtype=float)
        for mask in range(1 << n):
            out[mask] = self._value(frozenset(i for i in range(n) if mask >> i & 1))
        return out

    def to_dict(self) -> dict:
        raise InstanceFormatError(f"{type(self).__name__} has no file representation")

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


def _mask_bits(n: int) -> list[np.ndarray]:
    masks = np.arange(1 << n, dtype=np.int64)
    return [((masks >> i) & 1).astype(bool) for i in range(n)]


class ModularOracle(ValueOracle):
    kind = "modular"

    def __init__(self, weights: Sequence[float]):
        weights = [float(w) for w in weights]
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise ParameterError("modular weights must be finite and non-negative")
        super().__init__(len(weights))
        self.weights = tuple(weights)

    def _value(self, members):
        total = 0.0
        for v in sorted(members):
            total += self.weights[v]
        return total

    def subset_values(self):
        out = np.zeros(1 << self.n)
        for w, bit in zip(self.weights, _mask_bits(self.n)):
            out += w * bit
        return out

    def to_dict(self):
        return {"type": "modular", "weights": list(self.weights)}


class CutOracle(ValueOracle):
    """Weighted cut function of an undirected graph."""

    kind = "cut"

    def __init__(self, n: int, edges: Iterable[Sequence]):
        super().__init__(n)
        checked = []
        for edge in edges:
            if len(edge) == 2:
                u, v, w = edge[0], edge[1], 1.0
            elif len(edge) == 3:
                u, v, w = edge
            else:
                raise ParameterError(f"edge must be (u, v) or (u, v, w), got {edge!r}")
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ParameterError(f"self-loop on vertex {u}")
            if not math.isfinite(w) or w < 0:
                raise ParameterError(f"edge weight must be finite and non-negative, got {w}")
            checked.append((u, v, w))
        self.edges = tuple(checked)

    def _value(self, members):
        total = 0.0
        for u, v, w in self.edges:
            if (u in members) != (v in members):
                total += w
        return total

    def subset_values(self):
        bits = _mask_bits(self.n)
        out = np.zeros(1 << self.n)
        for u, v, w in self.edges:
            out += w * (bits[u] != bits[v])
        return out

    def to_dict(self):
        return {"type": "cut", "n": self.n, "edges": [[u, v, w] for u, v, w in self.edges]}


class CoverageOracle(ValueOracle):
    """``f(S)`` is the number of universe items covered by the sets of ``S``."""

    kind = "coverage"

    def __init__(self, sets: Sequence[Iterable]):
        super().__init__(len(sets))
        index: dict = {}
        covers = []
        raw = []
        for items in sets:
            items = list(items)
            raw.append(items)
            ids = []
            for item in items:
                ids.append(index.setdefault(item, len(index)))
            covers.append(frozenset(ids))
        self.sets = tuple(tuple(items) for items in raw)
        self.covers = tuple(covers)
        self.universe_size = len(index)

    def _value(self, members):
        covered = set()
        for v in members:
            covered |= self.covers[v]
        return float(len(covered))

    def subset_values(self):
        bits = _mask_bits(self.n)
        holders: list[list[int]] = [[] for _ in range(self.universe_size)]
        for v, cover in enumerate(self.covers):
            for item in cover:
                holders[item].append(v)
        out = np.zeros(1 << self.n)
        for owners in holders:
            hit = np.zeros(1 << self.n, dtype=bool)
            for v in owners:
                hit |= bits[v]
            out += hit
        return out

    def to_dict(self):
        return {"type": "coverage", "sets": [list(items) for items in self.sets]}


class FunctionOracle(ValueOracle):
    """Wrap an arbitrary ``frozenset -> float`` callable (synthetic test instances)."""

    def __init__(self, n: int, fn: Callable[[frozenset], float], name: str = "custom"):
        super().__init__(n)
        self.fn = fn
        self.name = name

    def _value(self, members):
        return float(self.fn(members))

    def __repr__(self):
        return f"FunctionOracle({self.name!r}, n={self.n})"


class ShiftedOracle(ValueOracle):
    """``f(S) + c``; keeps submodularity and lifts ``f(empty)`` above zero."""

    kind = "shifted"

    def __init__(self, base: ValueOracle, shift: float):
        super().__init__(base.n)
        self.base = base
        self.shift = float(shift)

    def _value(self, members):
        return self.base._value(members) + self.shift

    def subset_values(self):
        return self.base.subset_values() + self.shift

    def __repr__(self):
        return f"ShiftedOracle({self.base!r}, shift={self.shift})"


def evaluate(oracle: ValueOracle, s: Iterable[int] = ()) -> float:
    return oracle.evaluate(s)


def marginal_gain(oracle: ValueOracle, v: int, s: Iterable[int] = ()) -> float:
    return oracle.marginal_gain(v, s)


def _check_size(oracle, n, limit):
    if n is None:
        n = oracle.n
    if n != oracle.n:
        raise ParameterError(f"n={n} does not match oracle ground set size {oracle.n}")
    if n > limit:
        raise SizeLimitError(f"exhaustive check limited to n <= {limit}, got {n}")
    return n


def verify_submodular(oracle: ValueOracle, n: int | None = None, tol: float = TOL) -> bool:
    """Exhaustively test diminishing returns for every ``S <= T``, ``v`` not in ``T``.

    For each ``v`` the marginal ``f(v|T)`` is maximised over all supersets
    ``T`` of ``S`` with a superset-max transform, so every pair is covered
    without an explicit triple loop.
    """
    n = _check_size(oracle, n, SUBMODULAR_CHECK_MAX_N)
    vals = oracle.subset_values()
    masks = np.arange(1 << n, dtype=np.int64)
    for v in range(n):
        bit = 1 << v
        free = (masks & bit) == 0
        gain = np.full(1 << n, -np.inf)
        gain[free] = vals[masks[free] | bit] - vals[masks[free]]
        best_above = gain.copy()
        for i in range(n):
            lo = masks[(masks >> i & 1) == 0]
            best_above[lo] = np.maximum(best_above[lo], best_above[lo | (1 << i)])
        if np.any(gain[free] < best_above[free] - tol):
            return False
    return True


def verify_nonnegative(oracle: ValueOracle, n: int | None = None, tol: float = TOL) -> bool:
    _check_size(oracle, n, NONNEGATIVE_CHECK_MAX_N)
    return bool(np.all(oracle.subset_values() >= -tol))


def sample_random_instance(kind: str, params: dict, rng: np.random.Generator) -> ValueOracle:
    """Draw a random instance of ``kind``.

    ``coverage``: ``n``, ``universe``, ``p`` (per element/item inclusion).
    ``cut``: ``n``, ``edge_prob``, ``max_weight`` (integer weights in 1..max_weight).
    ``modular``: ``n``, ``max_weight`` (integer weights in 0..max_weight).
    """
    params = dict(params)
    try:
        n = int(params.pop("n"))
    except KeyError:
        raise ParameterError("generator params need 'n'") from None
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")

    def prob(name, default=None):
        p = float(params.pop(name, default)) if default is not None else float(params.pop(name))
        if not 0 <= p <= 1:
            raise ParameterError(f"{name} must lie in [0, 1], got {p}")
        return p

    try:
        if kind == "coverage":
            universe = int(params.pop("universe"))
            p = prob("p")
            if universe < 0:
                raise ParameterError("universe size must be >= 0")
            incidence = rng.random((n, universe)) < p
            oracle = CoverageOracle([np.flatnonzero(row).tolist() for row in incidence])
        elif kind == "cut":
            p = prob("edge_prob")
            max_w = int(params.pop("max_weight", 1))
            if max_w < 1:
                raise ParameterError("max_weight must be >= 1")
            edges = []
            for u in range(n):
                for v in range(u + 1, n):
                    if rng.random() < p:
                        edges.append((u, v, float(rng.integers(1, max_w + 1))))
            oracle = CutOracle(n, edges)
        elif kind == "modular":
            max_w = int(params.pop("max_weight", 10))
            if max_w < 0:
                raise ParameterError("max_weight must be >= 0")
            oracle = ModularOracle(rng.integers(0, max_w + 1, size=n).astype(float).tolist())
        else:
            raise ParameterError(f"unknown oracle kind {kind!r}")
    except KeyError as exc:
        raise ParameterError(f"{kind} generator needs parameter {exc.args[0]!r}") from None
    if params:
        raise ParameterError(f"unexpected {kind} generator params: {sorted(params)}")
    return oracle


def instance_from_dict(spec: dict) -> ValueOracle:
    try:
        kind = spec["type"]
        if kind == "coverage":
            return CoverageOracle(spec["sets"])
        if kind == "cut":
            return CutOracle(spec["n"], spec["edges"])
        if kind == "modular":
            return ModularOracle(spec["weights"])
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc}") from None
    raise InstanceFormatError(f"unknown instance type {kind!r}")


def load_instance(path) -> ValueOracle:
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read instance file {path}: {exc}") from None
    return instance_from_dict(spec)


def save_instance(oracle: ValueOracle, path) -> None:
    Path(path).write_text(json.dumps(oracle.to_dict()))
