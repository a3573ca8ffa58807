"""Event-driven simulation of a netlist under a 4-phase return-to-zero
environment.

A transaction applies a valid operand word, waits for quiescence, then
returns every input rail to zero and waits again. Forward and reverse
latency are the times, from the start of each phase, at which the outputs
became all-valid and all-spacer, i.e. what a completion detector on the
outputs observes. The environment still waits for full quiescence before
the next phase; the time of the last internal transition is reported as
the phase's settle time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..encoding import encode_word
from ..monitors import ViolationKind, ViolationRecord
from ..netlist import DualRailPort, GateKind, Netlist, Op
from . import kernel as _kernel

DEFAULT_BUDGET = 10**8

RISING, FALLING, UNCHECKED = 1, 0, -1

_KIND_CODE = {Op.AND: 0, Op.OR: 1, Op.CELEM: 2, Op.BUF: 3}
_VIOL_KIND = {1: ViolationKind.ILLEGAL_DUAL_RAIL, 2: ViolationKind.NON_MONOTONE_PHASE}


class SimulationError(Exception):
    pass


class EventBudgetExceeded(SimulationError):
    pass


class OutputIncomplete(SimulationError):
    pass


class ProtocolViolation(SimulationError):
    def __init__(self, violations: Sequence[ViolationRecord]):
        lines = "\n  ".join(str(v) for v in violations[:20])
        super().__init__(f"{len(violations)} protocol violation(s):\n  {lines}")
        self.violations = list(violations)


def evaluate_gate(kind: GateKind, inputs: Sequence[int], previous: int = 0) -> int:
    if len(inputs) != kind.fan_in:
        raise ValueError(f"{kind} expects {kind.fan_in} inputs, got {len(inputs)}")
    if kind.op is Op.AND:
        return int(all(inputs))
    if kind.op is Op.OR:
        return int(any(inputs))
    if kind.op is Op.CELEM:
        if all(inputs):
            return 1
        if not any(inputs):
            return 0
        return previous
    return int(inputs[0])


@dataclass(frozen=True)
class PhaseResult:
    elapsed: int
    transitions: int
    events: int
    violations: tuple[ViolationRecord, ...]


@dataclass(frozen=True)
class TransactionResult:
    sum: int
    cout: int
    forward_latency: int
    reverse_latency: int
    cycle_time: int
    transitions: int
    violations: tuple[ViolationRecord, ...] = ()
    forward_settle: int = 0
    reverse_settle: int = 0

    def __post_init__(self):
        assert self.cycle_time == self.forward_latency + self.reverse_latency


@dataclass
class _Compiled:
    kind: np.ndarray
    delay: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    out: np.ndarray
    fo_ptr: np.ndarray
    fo_idx: np.ndarray


def _compile(netlist: Netlist) -> _Compiled:
    gates = netlist.gates
    kind = np.array([_KIND_CODE[g.kind.op] for g in gates], dtype=np.int8)
    delay = np.array([g.delay for g in gates], dtype=np.int32)
    in_ptr = np.zeros(len(gates) + 1, dtype=np.int32)
    in_ptr[1:] = np.cumsum([len(g.inputs) for g in gates])
    in_idx = np.array([n for g in gates for n in g.inputs], dtype=np.int32)
    out = np.array([g.output for g in gates], dtype=np.int32)
    fanout = netlist.fanout()
    fo_ptr = np.zeros(netlist.net_count + 1, dtype=np.int32)
    fo_ptr[1:] = np.cumsum([len(f) for f in fanout])
    fo_idx = np.array([gi for f in fanout for gi in f], dtype=np.int32)
    return _Compiled(kind, delay, in_ptr, in_idx, out, fo_ptr, fo_idx)


class Simulator:
    """Owns the mutable simulation state for one netlist.

    A simulator is not thread-safe; create one per thread. The netlist itself
    is only read.
    """

    def __init__(
        self,
        netlist: Netlist,
        *,
        budget: int = DEFAULT_BUDGET,
        kernel: str | None = None,
        monitor: bool = True,
    ):
        netlist.validate()
        self.netlist = netlist
        self.budget = budget
        self.kernel = _kernel.get_kernel(kernel)
        self._c = _compile(netlist)
        n = netlist.net_count
        self.values = np.zeros(n, dtype=np.uint8)
        self.projected = np.zeros(n, dtype=np.uint8)
        self.changed_at = np.zeros(n, dtype=np.int64)
        self.partner = np.full(n, -1, dtype=np.int32)
        self.monitor = False
        self.transitions = 0
        self.trace: list | None = None
        self._pair_name: dict[int, str] = {}
        self._in = {p.name: p for p in netlist.inputs}
        self._out = {p.name: p for p in netlist.outputs}
        self._net_name: dict[int, str] = {}
        for p in netlist.inputs + netlist.outputs:
            self._net_name.setdefault(p.rail1, f"{p.name}.1")
            self._net_name.setdefault(p.rail0, f"{p.name}.0")
        if monitor:
            self.enable_monitors()
        self._check_spacer_fixed_point()

    def _check_spacer_fixed_point(self):
        for g in self.netlist.gates:
            if evaluate_gate(g.kind, [0] * g.kind.fan_in, 0):
                raise SimulationError(f"gate {g} is not 0 at spacer")

    def enable_monitors(self, extra_pairs: Iterable[DualRailPort] = ()):
        pairs = list(self.netlist.inputs) + list(self.netlist.outputs)
        pairs += list(self.netlist.annotations.get("rail_pairs", ())) + list(extra_pairs)
        for p in pairs:
            self.partner[p.rail1] = p.rail0
            self.partner[p.rail0] = p.rail1
            self._net_name.setdefault(p.rail1, f"{p.name}.1")
            self._net_name.setdefault(p.rail0, f"{p.name}.0")
        self.monitor = True

    def net_name(self, net: int) -> str:
        return self._net_name.get(net, f"n{net}")

    def reset(self):
        self.values[:] = 0
        self.projected[:] = 0
        self.changed_at[:] = 0

    # -- core loop -----------------------------------------------------------

    def run_until_quiescent(
        self, stimulus: Iterable[tuple[int, int, int]] = (), direction: int = UNCHECKED
    ) -> PhaseResult:
        """Inject ``(time, net, value)`` events and process until no events remain.

        ``direction`` is the only transition polarity allowed in this phase
        (``RISING`` or ``FALLING``); ``UNCHECKED`` disables that screen.
        """
        c = self._c
        status, last, transitions, events, raw = self.kernel.run(
            c.kind, c.delay, c.in_ptr, c.in_idx, c.out, c.fo_ptr, c.fo_idx, self.partner,
            self.values, self.projected, self.changed_at,
            [(int(t), int(n), int(v)) for t, n, v in stimulus],
            direction, self.budget, self.monitor, self.trace,
        )
        if status != 0:
            raise EventBudgetExceeded(f"more than {self.budget} events in one phase")
        self.transitions += transitions
        viol = tuple(ViolationRecord(t, self.net_name(n), _VIOL_KIND[k]) for t, n, k in raw)
        return PhaseResult(last, transitions, events, viol)

    def port_value(self, port: DualRailPort) -> tuple[int, int]:
        return int(self.values[port.rail1]), int(self.values[port.rail0])

    def _drive(self, rails: Iterable[int], value: int, direction: int) -> PhaseResult:
        return self.run_until_quiescent([(0, r, value) for r in rails], direction)

    # -- handshake -----------------------------------------------------------

    def _adder_ports(self):
        width = sum(1 for name in self._in if name.startswith("a"))
        try:
            a = [self._in[f"a{i}"] for i in range(width)]
            b = [self._in[f"b{i}"] for i in range(width)]
            cin = self._in["cin"]
            s = [self._out[f"s{i}"] for i in range(width)]
            cout = self._out["cout"]
        except KeyError as e:
            raise SimulationError(f"netlist lacks adder port {e}") from None
        return width, a, b, cin, s, cout

    def _high_rails(self, assignment: Mapping[str, int]) -> list[int]:
        rails = []
        for name, bit in assignment.items():
            port = self._in[name]
            rails.append(port.rail1 if bit else port.rail0)
        return rails

    def run_transaction(self, a: int, b: int, cin: int, strict: bool = False) -> TransactionResult:
        """One valid/spacer round trip of an adder netlist."""
        width, pa, pb, pc, ps, pcout = self._adder_ports()
        if cin not in (0, 1):
            raise ValueError(f"cin must be 0 or 1, got {cin}")
        bits = {}
        for ports, word in ((pa, a), (pb, b)):
            for p, dv in zip(ports, encode_word(word, width)):
                bits[p.name] = dv.bit
        bits[pc.name] = cin
        rails = self._high_rails(bits)
        outputs = ps + [pcout]

        before = self.transitions
        fwd = self._drive(rails, 1, RISING)
        violations = list(fwd.violations)
        out_vals = [self.port_value(p) for p in outputs]
        incomplete = [p for p, v in zip(outputs, out_vals) if v[0] == v[1]]
        if incomplete:
            names = ", ".join(p.name for p in incomplete)
            raise OutputIncomplete(f"outputs {names} not valid after valid phase ({a}, {b}, {cin})")
        high = [p.rail1 if v[0] else p.rail0 for p, v in zip(outputs, out_vals)]
        fwd_done = int(max(self.changed_at[high]))
        total = sum(v[0] << i for i, v in enumerate(out_vals[:-1]))
        carry = out_vals[-1][0]

        rev = self._drive(rails, 0, FALLING)
        violations += rev.violations
        stuck = [p for p in outputs if self.port_value(p) != (0, 0)]
        if stuck:
            names = ", ".join(p.name for p in stuck)
            raise OutputIncomplete(f"outputs {names} did not return to spacer")
        if self.values.any():
            left = [self.net_name(int(n)) for n in np.flatnonzero(self.values)[:10]]
            raise OutputIncomplete(f"internal nets still high after return-to-zero: {left}")
        rev_done = int(max(self.changed_at[high]))

        if strict and violations:
            raise ProtocolViolation(violations)
        return TransactionResult(
            sum=total,
            cout=carry,
            forward_latency=fwd_done,
            reverse_latency=rev_done,
            cycle_time=fwd_done + rev_done,
            transitions=self.transitions - before,
            violations=tuple(violations),
            forward_settle=fwd.elapsed,
            reverse_settle=rev.elapsed,
        )

    def run_staggered_probe(
        self,
        assignment: Mapping[str, int],
        withheld: str | Iterable[str],
        watch: Iterable[DualRailPort] = (),
    ) -> dict[str, int | None]:
        """Apply every input in ``assignment`` except ``withheld`` (left at spacer).

        Returns, for each primary output and each extra ``watch`` port, the
        time it became valid, or ``None`` if it is still spacer. The state is
        returned to spacer afterwards.
        """
        held = {withheld} if isinstance(withheld, str) else set(withheld)
        for name in held:
            if name not in self._in:
                raise KeyError(f"{name!r} is not a primary input")
        missing = set(self._in) - set(assignment)
        if missing:
            raise ValueError(f"assignment lacks inputs {sorted(missing)}")
        rails = self._high_rails({k: v for k, v in assignment.items() if k not in held})
        ports = list(self.netlist.outputs) + list(watch)
        phase = self._drive(rails, 1, RISING)
        report: dict[str, int | None] = {}
        for p in ports:
            r1, r0 = self.port_value(p)
            if r1 and r0:
                raise ProtocolViolation([ViolationRecord(phase.elapsed, p.name, ViolationKind.ILLEGAL_DUAL_RAIL)])
            report[p.name] = int(self.changed_at[p.rail1 if r1 else p.rail0]) if (r1 or r0) else None
        self._drive(rails, 0, FALLING)
        if phase.violations:
            raise ProtocolViolation(phase.violations)
        return report


def run_transaction(netlist: Netlist, a: int, b: int, cin: int, **kw) -> TransactionResult:
    return Simulator(netlist, **kw).run_transaction(a, b, cin)


def run_staggered_probe(netlist: Netlist, assignment: Mapping[str, int], withheld, **kw):
    return Simulator(netlist, **kw).run_staggered_probe(assignment, withheld)


def adder_assignment(width: int, a: int, b: int, cin: int) -> dict[str, int]:
    """Port-name to bit mapping for an adder's operands."""
    bits = {f"a{i}": (a >> i) & 1 for i in range(width)}
    bits.update({f"b{i}": (b >> i) & 1 for i in range(width)})
    bits["cin"] = cin
    return bits
