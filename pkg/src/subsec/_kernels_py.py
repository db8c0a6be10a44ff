"""Pure-Python batch kernels; behaviour matches ``_kernels.pyx`` bit for bit.

Both kernels take arrivals pre-sorted per trial: ``order[r, j]`` is the
element arriving ``j``-th in trial ``r`` and ``times[r, j]`` its global time.
"""
import math

import numpy as np

E = math.e
INV_E = 1.0 / E

MODULAR, CUT, COVERAGE = 0, 1, 2


def secretary_batch(weights, order, times, coins):
    """Element picked in each trial (``-1`` for none)."""
    trials, n = order.shape
    out = np.full(trials, -1, dtype=np.int64)
    w = np.asarray(weights, dtype=float).tolist()
    for r in range(trials):
        if n == 0:
            continue
        ts = times[r].tolist()
        ids = order[r].tolist()
        if ts[0] >= INV_E:
            if coins[r] < 1.0 / (E * ts[0]):
                out[r] = ids[0]
            continue
        theta = -math.inf
        j = 0
        while j < n and ts[j] < INV_E:
            if w[ids[j]] > theta:
                theta = w[ids[j]]
            j += 1
        while j < n:
            if w[ids[j]] >= theta:
                out[r] = ids[j]
                break
            j += 1
    return out


def _make_eval(p):
    shift = p.shift
    if p.kind == MODULAR:
        wts = p.weights.tolist()

        def f(member):
            total = 0.0
            for i in range(p.n):
                if member[i]:
                    total += wts[i]
            return total + shift
    elif p.kind == CUT:
        edges = list(zip(p.edge_u.tolist(), p.edge_v.tolist(), p.edge_w.tolist()))

        def f(member):
            total = 0.0
            for u, v, w in edges:
                if member[u] != member[v]:
                    total += w
            return total + shift
    elif p.kind == COVERAGE:
        ptr = p.cover_ptr.tolist()
        items = p.cover_items.tolist()

        def f(member):
            seen = set()
            for i in range(p.n):
                if member[i]:
                    seen.update(items[ptr[i]:ptr[i + 1]])
            return float(len(seen)) + shift
    else:
        raise ValueError(f"unknown kernel oracle kind {p.kind}")
    return f


def submodular_secretary_batch(payload, k, order, times, coins):
    """Run the k-window online rule per trial; returns ``(values, calls, sizes)``."""
    trials, n = order.shape
    f = _make_eval(payload)
    values = np.empty(trials)
    calls = np.zeros(trials, dtype=np.int64)
    sizes = np.zeros(trials, dtype=np.int64)
    for r in range(trials):
        ts = times[r].tolist()
        ids = order[r].tolist()
        cs = coins[r].tolist()
        member = [False] * n
        base = 0.0
        known = False
        ncalls = 0
        size = 0
        start = 0
        for l in range(k):
            stop = start
            while stop < n and min(int(ts[stop] * k), k - 1) == l:
                stop += 1
            if stop == start:
                continue
            if not known:
                base = f(member)
                ncalls += 1
                known = True
            seen_vals = {}

            def with_item(j):
                v = ids[j]
                member[v] = True
                val = f(member)
                member[v] = False
                seen_vals[j] = val
                return val - base

            sel = -1
            first_local = ts[start] * k - l
            if first_local >= INV_E:
                gain = with_item(start)
                ncalls += 1
                if cs[l] < 1.0 / (E * first_local):
                    sel = start
            else:
                theta = -math.inf
                j = start
                while j < stop and ts[j] * k - l < INV_E:
                    gain = with_item(j)
                    ncalls += 1
                    if gain > theta:
                        theta = gain
                    j += 1
                while j < stop:
                    gain = with_item(j)
                    ncalls += 1
                    if gain >= theta:
                        sel = j
                        break
                    j += 1
            if sel >= 0 and gain >= 0:
                member[ids[sel]] = True
                base = seen_vals[sel]
                size += 1
            start = stop
        if not known:
            base = f(member)
            ncalls += 1
        values[r] = base
        calls[r] = ncalls
        sizes[r] = size
    return values, calls, sizes
