# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; see ``_kernels_py.py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double E = 2.718281828459045
cdef double INV_E = 1.0 / E
cdef double NEG_INF = -float("inf")

cdef enum:
    MODULAR = 0
    CUT = 1
    COVERAGE = 2


def secretary_batch(weights, cnp.int64_t[:, ::1] order, double[:, ::1] times, double[::1] coins):
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t trials = order.shape[0], n = order.shape[1]
    out_arr = np.full(trials, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t r, j
    cdef double theta, wj
    with nogil:
        for r in range(trials):
            if n == 0:
                continue
            if times[r, 0] >= INV_E:
                if coins[r] < 1.0 / (E * times[r, 0]):
                    out[r] = order[r, 0]
                continue
            theta = NEG_INF
            j = 0
            while j < n and times[r, j] < INV_E:
                wj = w[order[r, j]]
                if wj > theta:
                    theta = wj
                j += 1
            while j < n:
                if w[order[r, j]] >= theta:
                    out[r] = order[r, j]
                    break
                j += 1
    return out_arr


cdef struct Oracle:
    int kind
    Py_ssize_t n
    double shift
    double *weights
    Py_ssize_t n_edges
    cnp.int64_t *edge_u
    cnp.int64_t *edge_v
    double *edge_w
    cnp.int64_t *cover_ptr
    cnp.int64_t *cover_items
    cnp.int64_t *stamp
    cnp.int64_t epoch


cdef double evaluate(Oracle *o, char *member) noexcept nogil:
    cdef double total = 0.0
    cdef Py_ssize_t i, e, q
    cdef cnp.int64_t item
    if o.kind == MODULAR:
        for i in range(o.n):
            if member[i]:
                total += o.weights[i]
    elif o.kind == CUT:
        for e in range(o.n_edges):
            if member[o.edge_u[e]] != member[o.edge_v[e]]:
                total += o.edge_w[e]
    else:
        o.epoch += 1
        for i in range(o.n):
            if member[i]:
                for q in range(o.cover_ptr[i], o.cover_ptr[i + 1]):
                    item = o.cover_items[q]
                    if o.stamp[item] != o.epoch:
                        o.stamp[item] = o.epoch
                        total += 1.0
    return total + o.shift


def submodular_secretary_batch(payload, Py_ssize_t k, cnp.int64_t[:, ::1] order,
                               double[:, ::1] times, double[:, ::1] coins):
    cdef Py_ssize_t trials = order.shape[0], n = order.shape[1]
    cdef double[::1] weights = np.ascontiguousarray(payload.weights, dtype=np.float64)
    cdef cnp.int64_t[::1] edge_u = np.ascontiguousarray(payload.edge_u, dtype=np.int64)
    cdef cnp.int64_t[::1] edge_v = np.ascontiguousarray(payload.edge_v, dtype=np.int64)
    cdef double[::1] edge_w = np.ascontiguousarray(payload.edge_w, dtype=np.float64)
    cdef cnp.int64_t[::1] cover_ptr = np.ascontiguousarray(payload.cover_ptr, dtype=np.int64)
    cdef cnp.int64_t[::1] cover_items = np.ascontiguousarray(payload.cover_items, dtype=np.int64)
    cdef cnp.int64_t[::1] stamp = np.zeros(max(payload.universe, 1), dtype=np.int64)
    cdef char[::1] member = np.zeros(max(n, 1), dtype=np.int8)
    # a dummy slot keeps every pointer valid for empty payload arrays
    cdef double[::1] dummy_d = np.zeros(1)
    cdef cnp.int64_t[::1] dummy_i = np.zeros(1, dtype=np.int64)

    cdef Oracle o
    o.kind = payload.kind
    o.n = payload.n
    o.shift = payload.shift
    o.weights = &weights[0] if weights.shape[0] else &dummy_d[0]
    o.n_edges = edge_u.shape[0]
    o.edge_u = &edge_u[0] if edge_u.shape[0] else &dummy_i[0]
    o.edge_v = &edge_v[0] if edge_v.shape[0] else &dummy_i[0]
    o.edge_w = &edge_w[0] if edge_w.shape[0] else &dummy_d[0]
    o.cover_ptr = &cover_ptr[0] if cover_ptr.shape[0] else &dummy_i[0]
    o.cover_items = &cover_items[0] if cover_items.shape[0] else &dummy_i[0]
    o.stamp = &stamp[0]
    o.epoch = 0
    if o.kind not in (MODULAR, CUT, COVERAGE):
        raise ValueError(f"unknown kernel oracle kind {o.kind}")

    values_arr = np.empty(trials)
    calls_arr = np.zeros(trials, dtype=np.int64)
    sizes_arr = np.zeros(trials, dtype=np.int64)
    cdef double[::1] values = values_arr
    cdef cnp.int64_t[::1] calls = calls_arr, sizes = sizes_arr

    cdef Py_ssize_t r, l, i, start, stop, j, sel
    cdef double base, val, gain, sel_val, theta, first_local
    cdef bint known
    with nogil:
        for r in range(trials):
            for i in range(n):
                member[i] = 0
            known = False
            base = 0.0
            start = 0
            for l in range(k):
                stop = start
                while stop < n and min(<Py_ssize_t>(times[r, stop] * k), k - 1) == l:
                    stop += 1
                if stop == start:
                    continue
                if not known:
                    base = evaluate(&o, &member[0])
                    calls[r] += 1
                    known = True
                sel = -1
                gain = 0.0
                sel_val = 0.0
                first_local = times[r, start] * k - l
                if first_local >= INV_E:
                    member[order[r, start]] = 1
                    val = evaluate(&o, &member[0])
                    member[order[r, start]] = 0
                    calls[r] += 1
                    gain = val - base
                    if coins[r, l] < 1.0 / (E * first_local):
                        sel = start
                        sel_val = val
                else:
                    theta = NEG_INF
                    j = start
                    while j < stop and times[r, j] * k - l < INV_E:
                        member[order[r, j]] = 1
                        val = evaluate(&o, &member[0])
                        member[order[r, j]] = 0
                        calls[r] += 1
                        gain = val - base
                        if gain > theta:
                            theta = gain
                        j += 1
                    while j < stop:
                        member[order[r, j]] = 1
                        val = evaluate(&o, &member[0])
                        member[order[r, j]] = 0
                        calls[r] += 1
                        gain = val - base
                        if gain >= theta:
                            sel = j
                            sel_val = val
                            break
                        j += 1
                if sel >= 0 and gain >= 0:
                    member[order[r, sel]] = 1
                    base = sel_val
                    sizes[r] += 1
                start = stop
            if not known:
                base = evaluate(&o, &member[0])
                calls[r] += 1
            values[r] = base
    return values_arr, calls_arr, sizes_arr
