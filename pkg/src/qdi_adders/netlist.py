"""Combinational gate netlist over single-bit nets.

Nets are dense integers ``0..net_count-1``. Dual-rail signals are only a
grouping of two nets into a :class:`DualRailPort`; every gate works on
individual rails. The gate set is monotone (AND, OR, C-element, buffer), so
the all-zero state is a fixed point of every netlist built from it.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

MAX_FAN_IN = 5


class NetlistError(Exception):
    pass


class FanInMismatch(NetlistError):
    pass


class UnknownNet(NetlistError):
    pass


class MultipleDrivers(NetlistError):
    def __init__(self, net: int):
        super().__init__(f"net {net} has more than one driver")
        self.net = net


class Cycle(NetlistError):
    def __init__(self, nets: list[int]):
        super().__init__(f"combinational cycle through nets {nets}")
        self.nets = nets


class BadPort(NetlistError):
    pass


class Op(enum.Enum):
    AND = "AND"
    OR = "OR"
    CELEM = "CELEM"
    BUF = "BUF"


@dataclass(frozen=True)
class GateKind:
    op: Op
    fan_in: int

    def __post_init__(self):
        if self.op is Op.BUF:
            if self.fan_in != 1:
                raise FanInMismatch(f"BUF takes exactly one input, not {self.fan_in}")
        elif not 2 <= self.fan_in <= MAX_FAN_IN:
            raise FanInMismatch(f"{self.op.value} fan-in must be 2..{MAX_FAN_IN}, got {self.fan_in}")

    def __str__(self):
        return "BUF" if self.op is Op.BUF else f"{self.op.value}{self.fan_in}"


def AND(n: int) -> GateKind:
    return GateKind(Op.AND, n)


def OR(n: int) -> GateKind:
    return GateKind(Op.OR, n)


def CELEM(n: int) -> GateKind:
    return GateKind(Op.CELEM, n)


BUF = GateKind(Op.BUF, 1)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    inputs: tuple[int, ...]
    output: int
    delay: int = 1


@dataclass(frozen=True)
class DualRailPort:
    name: str
    rail1: int
    rail0: int


@dataclass(eq=False)
class Netlist:
    """A growable gate graph; treat it as read-only once validated.

    ``annotations`` carries builder metadata (block carries, monitored
    internal rail pairs, ...). It is not serialized and does not take part
    in equality.
    """

    net_count: int = 0
    gates: list[Gate] = field(default_factory=list)
    inputs: list[DualRailPort] = field(default_factory=list)
    outputs: list[DualRailPort] = field(default_factory=list)
    annotations: dict[str, Any] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Netlist):
            return NotImplemented
        return (
            self.net_count == other.net_count
            and self.gates == other.gates
            and self.inputs == other.inputs
            and self.outputs == other.outputs
        )

    def add_net(self) -> int:
        self.net_count += 1
        return self.net_count - 1

    def _check_net(self, net: int):
        if not isinstance(net, int) or not 0 <= net < self.net_count:
            raise UnknownNet(f"net {net!r} does not exist (net_count={self.net_count})")

    def add_gate(self, kind: GateKind, inputs: Sequence[int], delay: int = 1) -> int:
        """Append a gate driving a fresh net and return that net."""
        inputs = tuple(inputs)
        if len(inputs) != kind.fan_in:
            raise FanInMismatch(f"{kind} expects {kind.fan_in} inputs, got {len(inputs)}")
        for net in inputs:
            self._check_net(net)
        if delay < 0:
            raise ValueError(f"gate delay must be non-negative, got {delay}")
        out = self.add_net()
        self.gates.append(Gate(kind, inputs, out, int(delay)))
        return out

    def add_input(self, name: str) -> DualRailPort:
        port = DualRailPort(name, self.add_net(), self.add_net())
        self.inputs.append(port)
        return port

    def add_output(self, name: str, rail1: int, rail0: int) -> DualRailPort:
        self._check_net(rail1)
        self._check_net(rail0)
        port = DualRailPort(name, rail1, rail0)
        self.outputs.append(port)
        return port

    def input_port(self, name: str) -> DualRailPort:
        for p in self.inputs:
            if p.name == name:
                return p
        raise KeyError(name)

    def output_port(self, name: str) -> DualRailPort:
        for p in self.outputs:
            if p.name == name:
                return p
        raise KeyError(name)

    def drivers(self) -> list[int]:
        """Gate index driving each net, -1 for undriven nets."""
        drv = [-1] * self.net_count
        for gi, g in enumerate(self.gates):
            if drv[g.output] != -1:
                raise MultipleDrivers(g.output)
            drv[g.output] = gi
        return drv

    def fanout(self) -> list[list[int]]:
        fo: list[list[int]] = [[] for _ in range(self.net_count)]
        for gi, g in enumerate(self.gates):
            for net in dict.fromkeys(g.inputs):
                fo[net].append(gi)
        return fo

    def topological_gates(self) -> list[int]:
        """Gate indices in dependency order; raises :class:`Cycle`."""
        drv = self.drivers()
        indeg = [0] * len(self.gates)
        for gi, g in enumerate(self.gates):
            indeg[gi] = sum(1 for n in g.inputs if drv[n] != -1)
        fo = self.fanout()
        ready = [gi for gi, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            gi = ready.pop()
            order.append(gi)
            for nxt in fo[self.gates[gi].output]:
                # a gate may read the same net on several pins
                indeg[nxt] -= self.gates[nxt].inputs.count(self.gates[gi].output)
                if indeg[nxt] == 0:
                    ready.append(nxt)
        if len(order) != len(self.gates):
            stuck = sorted(self.gates[gi].output for gi in range(len(self.gates)) if indeg[gi] > 0)
            raise Cycle(stuck)
        return order

    def depth(self) -> list[int]:
        """Unit-delay logic depth of every net (primary inputs are 0)."""
        d = [0] * self.net_count
        for gi in self.topological_gates():
            g = self.gates[gi]
            d[g.output] = 1 + max((d[n] for n in g.inputs), default=0)
        return d

    def validate(self) -> "Netlist":
        drv = self.drivers()
        input_nets = set()
        for p in self.inputs:
            if p.rail1 == p.rail0:
                raise BadPort(f"input port {p.name} uses net {p.rail1} for both rails")
            for net in (p.rail1, p.rail0):
                self._check_net(net)
                if drv[net] != -1:
                    raise MultipleDrivers(net)
                if net in input_nets:
                    raise BadPort(f"net {net} appears in more than one input rail")
                input_nets.add(net)
        for p in self.outputs:
            if p.rail1 == p.rail0:
                raise BadPort(f"output port {p.name} uses net {p.rail1} for both rails")
            self._check_net(p.rail1)
            self._check_net(p.rail0)
        for net in range(self.net_count):
            if drv[net] == -1 and net not in input_nets:
                raise NetlistError(f"net {net} is neither a primary input nor driven by a gate")
        self.topological_gates()
        return self


def new_netlist() -> Netlist:
    return Netlist()


def export_netlist(netlist: Netlist) -> str:
    """Serialize to a deterministic JSON document (field order is fixed)."""
    netlist.validate()
    doc = {
        "net_count": netlist.net_count,
        "gates": [
            {
                "kind": g.kind.op.value,
                "fan_in": g.kind.fan_in,
                "inputs": list(g.inputs),
                "output": g.output,
                "delay": g.delay,
            }
            for g in netlist.gates
        ],
        "inputs": [{"name": p.name, "rail1": p.rail1, "rail0": p.rail0} for p in netlist.inputs],
        "outputs": [{"name": p.name, "rail1": p.rail1, "rail0": p.rail0} for p in netlist.outputs],
    }
    return json.dumps(doc, indent=1) + "\n"


def import_netlist(text: str) -> Netlist:
    doc = json.loads(text)
    nl = Netlist(net_count=int(doc["net_count"]))
    for g in doc["gates"]:
        kind = GateKind(Op(g["kind"]), int(g["fan_in"]))
        inputs = tuple(int(n) for n in g["inputs"])
        if len(inputs) != kind.fan_in:
            raise FanInMismatch(f"{kind} lists {len(inputs)} inputs")
        nl.gates.append(Gate(kind, inputs, int(g["output"]), int(g["delay"])))
    nl.inputs = [DualRailPort(p["name"], int(p["rail1"]), int(p["rail0"])) for p in doc["inputs"]]
    nl.outputs = [DualRailPort(p["name"], int(p["rail1"]), int(p["rail0"])) for p in doc["outputs"]]
    return nl.validate()
