"""Backend selection for the Monte Carlo hot loops.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python ``_kernels_py`` twin is imported.  Both produce identical output
for identical inputs, and all randomness is drawn by the caller.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def use_backend(name: str) -> None:
    """Switch the active backend (``"cython"`` or ``"python"``)."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    BACKEND = name
    _impl = BACKENDS[name]


class OraclePayload(NamedTuple):
    kind: int
    n: int
    shift: float
    weights: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    cover_ptr: np.ndarray
    cover_items: np.ndarray
    universe: int


def pack(oracle) -> OraclePayload | None:
    """Flatten a coverage/cut/modular oracle (optionally shifted) into arrays.

    Returns ``None`` for oracles the kernels cannot evaluate.
    """
    from .oracles import CoverageOracle, CutOracle, ModularOracle, ShiftedOracle

    shift = 0.0
    while isinstance(oracle, ShiftedOracle):
        shift += oracle.shift
        oracle = oracle.base
    empty_f = np.zeros(0)
    empty_i = np.zeros(0, dtype=np.int64)
    fields = dict(n=oracle.n, shift=shift, weights=empty_f, edge_u=empty_i, edge_v=empty_i,
                  edge_w=empty_f, cover_ptr=np.zeros(oracle.n + 1, dtype=np.int64),
                  cover_items=empty_i, universe=0)
    if isinstance(oracle, ModularOracle):
        fields.update(kind=_kernels_py.MODULAR, weights=np.array(oracle.weights, dtype=float))
    elif isinstance(oracle, CutOracle):
        edges = oracle.edges
        fields.update(
            kind=_kernels_py.CUT,
            edge_u=np.array([e[0] for e in edges], dtype=np.int64),
            edge_v=np.array([e[1] for e in edges], dtype=np.int64),
            edge_w=np.array([e[2] for e in edges], dtype=float),
        )
    elif isinstance(oracle, CoverageOracle):
        lengths = [len(c) for c in oracle.covers]
        items = [i for c in oracle.covers for i in sorted(c)]
        fields.update(
            kind=_kernels_py.COVERAGE,
            cover_ptr=np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64),
            cover_items=np.array(items, dtype=np.int64),
            universe=oracle.universe_size,
        )
    else:
        return None
    return OraclePayload(**fields)


def secretary_batch(weights, order, times, coins):
    return _impl.secretary_batch(
        np.ascontiguousarray(weights, dtype=float),
        np.ascontiguousarray(order, dtype=np.int64),
        np.ascontiguousarray(times, dtype=float),
        np.ascontiguousarray(coins, dtype=float),
    )


def submodular_secretary_batch(payload: OraclePayload, k: int, order, times, coins):
    return _impl.submodular_secretary_batch(
        payload,
        int(k),
        np.ascontiguousarray(order, dtype=np.int64),
        np.ascontiguousarray(times, dtype=float),
        np.ascontiguousarray(coins, dtype=float),
    )
