# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled event kernel; same algorithm and results as ``_pykernel.run``."""

from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

ctypedef pair[int64_t, int64_t] event_t

cdef enum:
    KIND_AND = 0
    KIND_OR = 1
    KIND_CELEM = 2
    KIND_BUF = 3
    VIOL_ILLEGAL = 1
    VIOL_NON_MONOTONE = 2


def run(const int8_t[::1] kind, const int32_t[::1] delay,
        const int32_t[::1] in_ptr, const int32_t[::1] in_idx, const int32_t[::1] out,
        const int32_t[::1] fo_ptr, const int32_t[::1] fo_idx, const int32_t[::1] partner,
        uint8_t[::1] values, uint8_t[::1] projected, int64_t[::1] changed_at,
        list stimulus, int direction, int64_t budget, bint monitor, list trace):
    cdef int64_t n_nets = values.shape[0]
    cdef Py_ssize_t n_gates = kind.shape[0]
    # max-heap on negated (time * n_nets + net, seq * 2 + value)
    cdef priority_queue[event_t] heap
    cdef vector[int64_t] b_net
    cdef vector[uint8_t] b_val
    cdef vector[int32_t] to_eval
    cdef vector[int64_t] stamp = vector[int64_t](n_gates, 0)
    cdef int64_t seq = 0, t, key, sec, net, last = 0, transitions = 0
    cdef int64_t processed = 0, pass_no = 0, q
    cdef Py_ssize_t i, n, j, lo, hi
    cdef int32_t g, o, k, ones
    cdef uint8_t v, nv
    cdef bint tracing = trace is not None
    violations = []

    for item in stimulus:
        t, net, v = item
        heap.push(event_t(-(t * n_nets + net), -(seq * 2 + v)))
        seq += 1

    while not heap.empty():
        t = (-heap.top().first) // n_nets
        b_net.clear()
        b_val.clear()
        while not heap.empty():
            key = -heap.top().first
            if key // n_nets != t:
                break
            sec = -heap.top().second
            heap.pop()
            b_net.push_back(key - t * n_nets)
            b_val.push_back(<uint8_t>(sec & 1))
        processed += <int64_t>b_net.size()
        if processed > budget:
            return 1, last, transitions, processed, violations
        pass_no += 1
        to_eval.clear()
        n = <Py_ssize_t>b_net.size()
        i = 0
        while i < n:
            net = b_net[i]
            v = b_val[i]
            i += 1
            while i < n and b_net[i] == net:
                v = b_val[i]
                i += 1
            if values[net] == v:
                continue
            values[net] = v
            changed_at[net] = t
            transitions += 1
            last = t
            if tracing:
                trace.append((t, net, v))
            if monitor:
                if direction >= 0 and v != direction:
                    violations.append((t, net, VIOL_NON_MONOTONE))
                if v == 1:
                    q = partner[net]
                    if q >= 0 and values[q] == 1:
                        violations.append((t, net, VIOL_ILLEGAL))
            for j in range(fo_ptr[net], fo_ptr[net + 1]):
                g = fo_idx[j]
                if stamp[g] != pass_no:
                    stamp[g] = pass_no
                    to_eval.push_back(g)
        for i in range(<Py_ssize_t>to_eval.size()):
            g = to_eval[i]
            k = kind[g]
            lo = in_ptr[g]
            hi = in_ptr[g + 1]
            o = out[g]
            if k == KIND_AND:
                nv = 1
                for j in range(lo, hi):
                    if not values[in_idx[j]]:
                        nv = 0
                        break
            elif k == KIND_OR:
                nv = 0
                for j in range(lo, hi):
                    if values[in_idx[j]]:
                        nv = 1
                        break
            elif k == KIND_CELEM:
                ones = 0
                for j in range(lo, hi):
                    ones += values[in_idx[j]]
                if ones == hi - lo:
                    nv = 1
                elif ones == 0:
                    nv = 0
                else:
                    nv = projected[o]
            else:
                nv = values[in_idx[lo]]
            if nv != projected[o]:
                projected[o] = nv
                heap.push(event_t(-((t + delay[g]) * n_nets + o), -(seq * 2 + nv)))
                seq += 1

    return 0, last, transitions, processed, violations
