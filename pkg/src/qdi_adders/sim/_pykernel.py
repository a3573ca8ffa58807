"""Pure-Python event kernel; reference for the compiled ``_ckernel``.

Both kernels take the flattened netlist arrays produced by
:mod:`qdi_adders.sim.compiled` and mutate ``values``, ``projected`` and
``changed_at`` in place.

Events are ordered by ``(time, net, seq)``. All events of one time step are
applied together, then every gate reading a changed net is evaluated once
and its output scheduled at ``t + delay`` (transport delay). An event whose
value equals the net's value when it fires is dropped. ``projected`` holds
the value of the most recent event scheduled on a net, which is also the
internal state of a C-element.
"""

import heapq

KIND_AND, KIND_OR, KIND_CELEM, KIND_BUF = 0, 1, 2, 3
VIOL_ILLEGAL, VIOL_NON_MONOTONE = 1, 2
STATUS_OK, STATUS_BUDGET = 0, 1


def run(kind, delay, in_ptr, in_idx, out, fo_ptr, fo_idx, partner,
        values, projected, changed_at, stimulus, direction, budget, monitor, trace):
    kind = kind.tolist()
    delay = delay.tolist()
    in_ptr = in_ptr.tolist()
    in_idx = in_idx.tolist()
    out = out.tolist()
    fo_ptr = fo_ptr.tolist()
    fo_idx = fo_idx.tolist()
    part = partner.tolist() if monitor else None
    vals = values.tolist()
    proj = projected.tolist()
    touched = {}

    heap = []
    seq = 0
    for t, net, v in stimulus:
        heap.append((t, net, seq, v))
        seq += 1
    heapq.heapify(heap)

    last = 0
    transitions = 0
    processed = 0
    violations = []
    stamp = [0] * len(kind)
    pass_no = 0
    pop = heapq.heappop
    push = heapq.heappush

    while heap:
        t = heap[0][0]
        batch = []
        while heap and heap[0][0] == t:
            batch.append(pop(heap))
        processed += len(batch)
        if processed > budget:
            _flush(values, projected, changed_at, vals, proj, touched)
            return STATUS_BUDGET, last, transitions, processed, violations
        pass_no += 1
        to_eval = []
        n = len(batch)
        i = 0
        while i < n:
            _, net, _, v = batch[i]
            i += 1
            while i < n and batch[i][1] == net:
                v = batch[i][3]
                i += 1
            if vals[net] == v:
                continue
            vals[net] = v
            touched[net] = t
            transitions += 1
            last = t
            if trace is not None:
                trace.append((t, net, v))
            if monitor:
                if direction >= 0 and v != direction:
                    violations.append((t, net, VIOL_NON_MONOTONE))
                if v == 1:
                    q = part[net]
                    if q >= 0 and vals[q] == 1:
                        violations.append((t, net, VIOL_ILLEGAL))
            for j in range(fo_ptr[net], fo_ptr[net + 1]):
                g = fo_idx[j]
                if stamp[g] != pass_no:
                    stamp[g] = pass_no
                    to_eval.append(g)
        for g in to_eval:
            k = kind[g]
            lo, hi = in_ptr[g], in_ptr[g + 1]
            o = out[g]
            if k == KIND_AND:
                nv = 1
                for j in range(lo, hi):
                    if not vals[in_idx[j]]:
                        nv = 0
                        break
            elif k == KIND_OR:
                nv = 0
                for j in range(lo, hi):
                    if vals[in_idx[j]]:
                        nv = 1
                        break
            elif k == KIND_CELEM:
                ones = 0
                for j in range(lo, hi):
                    ones += vals[in_idx[j]]
                if ones == hi - lo:
                    nv = 1
                elif ones == 0:
                    nv = 0
                else:
                    nv = proj[o]
            else:
                nv = vals[in_idx[lo]]
            if nv != proj[o]:
                proj[o] = nv
                push(heap, (t + delay[g], o, seq, nv))
                seq += 1

    _flush(values, projected, changed_at, vals, proj, touched)
    return STATUS_OK, last, transitions, processed, violations


def _flush(values, projected, changed_at, vals, proj, touched):
    values[:] = vals
    projected[:] = proj
    for net, t in touched.items():
        changed_at[net] = t
