"""Shared helpers for the test suite."""

from qdi_adders.netlist import Netlist, Op
from qdi_adders.sim.engine import FALLING, RISING, Simulator


def apply(sim: Simulator, assignment, ports):
    """Drive ``assignment`` (port name -> bit) from spacer, return port values, reset to spacer."""
    rails = [sim.netlist.input_port(n).rail1 if v else sim.netlist.input_port(n).rail0
             for n, v in assignment.items()]
    fwd = sim.run_until_quiescent([(0, r, 1) for r in rails], RISING)
    values = {p.name: sim.port_value(p) for p in ports}
    rev = sim.run_until_quiescent([(0, r, 0) for r in rails], FALLING)
    assert not sim.values.any()
    return values, fwd, rev


def bit_of(pair):
    r1, r0 = pair
    assert r1 != r0, f"pair {pair} is not valid"
    return r1


def static_times(netlist: Netlist, high_inputs):
    """Rise and fall times of every net for one valid/spacer round trip.

    Computed from the settled truth values along a topological order, without
    an event queue: a rising AND or C-element waits for its last input, a
    rising OR for its first active input; falling is the mirror image.
    """
    n = netlist.net_count
    val = [0] * n
    rise = [None] * n
    for net in high_inputs:
        val[net] = 1
        rise[net] = 0
    order = netlist.topological_gates()
    for gi in order:
        g = netlist.gates[gi]
        ins = [val[i] for i in g.inputs]
        if g.kind.op in (Op.AND, Op.CELEM, Op.BUF):
            on = all(ins)
            t = max((rise[i] for i in g.inputs), default=0) if on else None
        else:
            on = any(ins)
            t = min(rise[i] for i in g.inputs if val[i]) if on else None
        if on:
            val[g.output] = 1
            rise[g.output] = t + g.delay
    fall = [None] * n
    for net in high_inputs:
        fall[net] = 0
    for gi in order:
        g = netlist.gates[gi]
        if not val[g.output]:
            continue
        active = [fall[i] for i in g.inputs if val[i]]
        if g.kind.op is Op.AND:
            t = min(active)
        else:
            t = max(active)
        fall[g.output] = t + g.delay
    return val, rise, fall
