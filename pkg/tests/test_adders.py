import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qdi_adders.adders import (
    ALL_ARCHS,
    AdderConfig,
    Arch,
    ConfigInvalid,
    build_adder,
    build_bclg,
    build_full_adder,
    build_sum_logic,
    feasible_spans,
    worst_case_vectors,
)
from qdi_adders.delays import DelayModel
from qdi_adders.metrics import oracle_add, random_vectors
from qdi_adders.monitors import orthogonality_faults
from qdi_adders.netlist import Netlist, Op
from qdi_adders.sim import Simulator
from qdi_adders.sim.engine import RISING

from util import apply, bit_of


def _fa(kind):
    nl = Netlist()
    a, b, c = nl.add_input("a0"), nl.add_input("b0"), nl.add_input("cin")
    if kind == "fa":
        s, co = build_full_adder(nl, a, b, c)
        nl.add_output("s0", s.rail1, s.rail0)
        nl.add_output("cout", co.rail1, co.rail0)
    else:
        s = build_sum_logic(nl, a, b, c)
        nl.add_output("s0", s.rail1, s.rail0)
    return nl.validate()


def test_full_adder_exhaustive():
    sim = Simulator(_fa("fa"))
    for a, b, c in itertools.product((0, 1), repeat=3):
        r = sim.run_transaction(a, b, c, strict=True)
        assert (r.sum, r.cout) == ((a + b + c) & 1, (a + b + c) >> 1)


def test_full_adder_all_ones():
    r = Simulator(_fa("fa")).run_transaction(1, 1, 1)
    assert (r.sum, r.cout) == (1, 1)


def test_full_adder_generate_is_early():
    sim = Simulator(_fa("fa"))
    got = sim.run_staggered_probe({"a0": 1, "b0": 1, "cin": 0}, "cin")
    assert got["cout"] is not None and got["s0"] is None
    out = sim.netlist.output_port("cout")
    sim.run_until_quiescent([(0, sim.netlist.input_port(n).rail1, 1) for n in ("a0", "b0")], RISING)
    assert sim.port_value(out) == (1, 0)


def test_full_adder_sum_waits_for_cin():
    got = Simulator(_fa("fa")).run_staggered_probe({"a0": 1, "b0": 0, "cin": 0}, "cin")
    assert got["s0"] is None and got["cout"] is None


def test_sum_logic_exhaustive():
    nl = _fa("sl")
    sim = Simulator(nl)
    for a, b, c in itertools.product((0, 1), repeat=3):
        vals, _, _ = apply(sim, {"a0": a, "b0": b, "cin": c}, nl.outputs)
        assert bit_of(vals["s0"]) == (a + b + c) & 1


def test_sum_logic_smaller_than_full_adder():
    assert len(_fa("sl").gates) < len(_fa("fa").gates)


def _bclg_netlist(m, redundant):
    nl = Netlist()
    a = [nl.add_input(f"a{i}") for i in range(m)]
    b = [nl.add_input(f"b{i}") for i in range(m)]
    cin = nl.add_input("cin")
    ports = build_bclg(nl, a, b, cin, redundant)
    nl.add_output("c", ports.carry.rail1, ports.carry.rail0)
    if ports.red_carry is not None:
        nl.add_output("redc", ports.red_carry.rail1, ports.red_carry.rail0)
    return nl.validate(), ports


def _assignment(m, a, b, cin):
    bits = {f"a{i}": (a >> i) & 1 for i in range(m)}
    bits.update({f"b{i}": (b >> i) & 1 for i in range(m)})
    bits["cin"] = cin
    return bits


@pytest.mark.parametrize("redundant", [False, True])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_bclg_exhaustive(m, redundant):
    nl, ports = _bclg_netlist(m, redundant)
    assert (ports.red_carry is not None) == redundant
    sim = Simulator(nl)
    probe = [p for trio in ports.pgk for p in trio]
    for a, b, cin in itertools.product(range(1 << m), range(1 << m), (0, 1)):
        rails = [sim.netlist.input_port(n).rail1 if v else sim.netlist.input_port(n).rail0
                 for n, v in _assignment(m, a, b, cin).items()]
        phase = sim.run_until_quiescent([(0, r, 1) for r in rails], RISING)
        assert not phase.violations
        want = (a + b + cin) >> m
        for out in nl.outputs:
            assert bit_of(sim.port_value(out)) == want
        for i, (g, k, p) in enumerate(ports.pgk):
            ai, bi = (a >> i) & 1, (b >> i) & 1
            assert (sim.values[g], sim.values[k], sim.values[p]) == (ai & bi, (1 - ai) & (1 - bi), ai ^ bi)
        assert orthogonality_faults(nl, sim.values) == []
        sim.run_until_quiescent([(0, r, 0) for r in rails])
        assert not sim.values[probe].any() and not sim.values.any()


@pytest.mark.parametrize("m", [5, 6, 8])
def test_bclg_wide_blocks_random(m):
    nl, _ = _bclg_netlist(m, True)
    assert max(g.kind.fan_in for g in nl.gates) <= 5
    sim = Simulator(nl)
    rng = random.Random(m)
    for _ in range(300):
        a, b, cin = rng.randrange(1 << m), rng.randrange(1 << m), rng.randrange(2)
        vals, _, _ = apply(sim, _assignment(m, a, b, cin), nl.outputs)
        assert bit_of(vals["c"]) == bit_of(vals["redc"]) == (a + b + cin) >> m


def test_bclg_generate_needs_no_carry_in():
    nl, _ = _bclg_netlist(4, True)
    got = Simulator(nl).run_staggered_probe(_assignment(4, 0b1000, 0b1000, 0), "cin")
    assert got["c"] is not None and got["redc"] is not None
    vals, _, _ = apply(Simulator(nl), _assignment(4, 0b1000, 0b1000, 0), nl.outputs)
    assert bit_of(vals["c"]) == 1


@pytest.mark.parametrize("cin", [0, 1])
def test_bclg_all_kill(cin):
    nl, _ = _bclg_netlist(4, False)
    sim = Simulator(nl)
    vals, _, _ = apply(sim, _assignment(4, 0, 0, cin), nl.outputs)
    assert vals["c"] == (0, 1)
    assert sim.run_staggered_probe(_assignment(4, 0, 0, cin), "cin")["c"] is not None


def test_bclg_all_propagate():
    nl, _ = _bclg_netlist(4, True)
    sim = Simulator(nl)
    vals, _, _ = apply(sim, _assignment(4, 0b1111, 0, 1), nl.outputs)
    assert vals["c"] == (1, 0) and vals["redc"] == (1, 0)
    got = sim.run_staggered_probe(_assignment(4, 0b1111, 0, 1), "cin")
    assert got == {"c": None, "redc": None}


def test_bclg_rejects_mismatched_ports():
    nl = Netlist()
    a = [nl.add_input("a0")]
    with pytest.raises(ConfigInvalid):
        build_bclg(nl, a, [], nl.add_input("cin"), False)


def test_rca4_ports():
    nl = build_adder(AdderConfig(Arch.RCA, 4))
    assert len(nl.inputs) == 9 and len(nl.outputs) == 5
    assert nl.annotations["counts"] == {"FA": 4, "SL": 0, "BCLG": 0}


def test_bcla32_structure():
    nl = build_adder(AdderConfig(Arch.BCLA_REG, 32, 4))
    assert nl.annotations["counts"] == {"FA": 24, "SL": 8, "BCLG": 8}
    assert len(nl.annotations["blocks"]) == 8


def test_redundant_gate_overhead():
    reg = build_adder(AdderConfig(Arch.BCLA_REG, 32, 4))
    red = build_adder(AdderConfig(Arch.BCLA_RED, 32, 4))
    # per chained BCLG: two carry-in ANDs and two ORs; the last BCLG has none
    assert len(red.gates) - len(reg.gates) == 4 * 7
    blocks = red.annotations["blocks"]
    assert all(b["red_carry"] is not None for b in blocks[:-1]) and blocks[-1]["red_carry"] is None


def test_redundant_chaining():
    nl = build_adder(AdderConfig(Arch.BCLA_RED, 16, 4))
    blocks = nl.annotations["blocks"]
    assert blocks[0]["carry_in"] == nl.input_port("cin")
    for prev, cur in zip(blocks, blocks[1:]):
        assert cur["carry_in"] == prev["red_carry"]
    assert nl.output_port("cout").rail1 == blocks[-1]["carry"].rail1


def test_hybrid_structure():
    nl = build_adder(AdderConfig(Arch.HYBRID_RED, 32, 4, 8))
    assert nl.annotations["counts"] == {"FA": 8 + 18, "SL": 6, "BCLG": 6}
    assert nl.annotations["blocks"][0]["bits"] == (8, 11)


@pytest.mark.parametrize("cfg", [
    AdderConfig(Arch.HYBRID_REG, 32, 4, 3),
    AdderConfig(Arch.HYBRID_RED, 32, 4, None),
    AdderConfig(Arch.HYBRID_RED, 32, 4, 32),
    AdderConfig(Arch.HYBRID_RED, 32, 4, 0),
    AdderConfig(Arch.BCLA_REG, 10, 4),
    AdderConfig(Arch.BCLA_RED, 8, 1),
    AdderConfig(Arch.RCA, 0),
])
def test_invalid_configs(cfg):
    with pytest.raises(ConfigInvalid):
        build_adder(cfg)


def test_feasible_spans():
    assert feasible_spans(32, 4) == list(range(4, 32, 4))
    assert feasible_spans(32, 4, [3, 4, 8, 40]) == [4, 8]
    assert feasible_spans(4, 4) == []


def test_worst_case_vectors_contents():
    assert (0xF, 0, 1) in worst_case_vectors(AdderConfig(Arch.BCLA_REG, 4))
    v32 = worst_case_vectors(AdderConfig(Arch.BCLA_REG, 32))
    assert (2**32 - 1, 1, 0) in v32 and (0, 0, 0) in v32


@pytest.mark.parametrize("width", [4, 8, 32])
def test_worst_case_vectors_beat_random(width):
    cfg = AdderConfig(Arch.BCLA_REG, width)
    sim = Simulator(build_adder(cfg))
    rnd = max(sim.run_transaction(*v).forward_latency for v in random_vectors(width, 10_000, 1))
    lat = {v: sim.run_transaction(*v).forward_latency for v in worst_case_vectors(cfg)}
    assert max(lat.values()) >= rnd
    assert lat[(2**width - 1, 0, 1)] >= rnd


def _configs(width):
    out = []
    for arch in ALL_ARCHS:
        if arch is Arch.RCA:
            out.append(AdderConfig(arch, width))
            continue
        for m in (2, 3, 4):
            if arch.hybrid:
                out += [AdderConfig(arch, width, m, s) for s in feasible_spans(width, m)]
            elif width % m == 0:
                out.append(AdderConfig(arch, width, m))
    return out


@pytest.mark.parametrize("width", [1, 2, 3, 4, 5, 6])
def test_exhaustive_small_widths(width):
    for cfg in _configs(width):
        sim = Simulator(build_adder(cfg))
        for a, b, cin in itertools.product(range(1 << width), range(1 << width), (0, 1)):
            r = sim.run_transaction(a, b, cin)
            assert (r.sum, r.cout) == oracle_add(a, b, cin, width), cfg
            assert not r.violations, cfg


def test_small_width_config_coverage():
    archs = {c.arch for w in (4, 5, 6) for c in _configs(w)}
    assert archs == set(ALL_ARCHS)


_delay_tables = st.lists(
    st.tuples(st.sampled_from(["AND", "OR", "CELEM"]), st.one_of(st.none(), st.integers(2, 5)), st.integers(0, 7)),
    max_size=6,
).map(lambda es: DelayModel(per_kind=tuple(es)))


@settings(max_examples=40, deadline=None)
@given(delays=_delay_tables, arch=st.sampled_from(ALL_ARCHS), seed=st.integers(0, 2**32))
def test_function_is_delay_independent(delays, arch, seed):
    cfg = AdderConfig(arch, 12, 4, 4 if arch.hybrid else None, delays)
    sim = Simulator(build_adder(cfg))
    for v in random_vectors(12, 20, seed) + worst_case_vectors(cfg):
        r = sim.run_transaction(*v)
        assert (r.sum, r.cout) == oracle_add(*v, 12)
        assert not r.violations


def test_delay_table_reaches_gates():
    cfg = AdderConfig(Arch.BCLA_REG, 8, 4, delays=DelayModel.parse("CELEM * 3"))
    nl = build_adder(cfg)
    assert {g.delay for g in nl.gates if g.kind.op is Op.CELEM} == {3}
    assert {g.delay for g in nl.gates if g.kind.op is not Op.CELEM} == {1}
