"""Netlist generators for early-output dual-rail adders.

Building blocks are the early-output full adder (FA), the sum logic (SL,
an FA without carry output) and the block carry lookahead generator (BCLG).
The BCLG computes one lookahead carry per block in disjoint sum-of-products
form::

    C1 = G3 + P3.G2 + P3.P2.G1 + P3.P2.P1.G0 + P3.P2.P1.P0.Cin1
    C0 = K3 + P3.K2 + P3.P2.K1 + P3.P2.P1.K0 + P3.P2.P1.P0.Cin0

extended to any block size. The regular carry realizes the carry-in term
through a 2-input C-element, so it holds until the incoming carry resets.
The redundant carry uses one flat AND of the propagate rails and the carry
rail, which resets from local inputs alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .delays import UNIT_DELAY, DelayModel
from .netlist import AND, CELEM, MAX_FAN_IN, OR, DualRailPort, GateKind, Netlist


class ConfigInvalid(ValueError):
    pass


class Arch(enum.Enum):
    RCA = "rca"
    BCLA_REG = "bcla"
    BCLA_RED = "bcla-red"
    HYBRID_REG = "hybrid"
    HYBRID_RED = "hybrid-red"

    @property
    def redundant(self) -> bool:
        return self in (Arch.BCLA_RED, Arch.HYBRID_RED)

    @property
    def hybrid(self) -> bool:
        return self in (Arch.HYBRID_REG, Arch.HYBRID_RED)

    @property
    def label(self) -> str:
        return self.name


ALL_ARCHS = (Arch.RCA, Arch.BCLA_REG, Arch.BCLA_RED, Arch.HYBRID_REG, Arch.HYBRID_RED)


@dataclass(frozen=True)
class AdderConfig:
    arch: Arch
    width: int
    block_size: int = 4
    lsb_rca_span: int | None = None
    delays: DelayModel = field(default=UNIT_DELAY)

    def validate(self) -> "AdderConfig":
        w, m = self.width, self.block_size
        if w < 1:
            raise ConfigInvalid(f"width must be >= 1, got {w}")
        if self.arch is Arch.RCA:
            return self
        if m < 2:
            raise ConfigInvalid(f"block size must be >= 2, got {m}")
        if self.arch.hybrid:
            s = self.lsb_rca_span
            if s is None:
                raise ConfigInvalid("hybrid architectures need lsb_rca_span")
            if s < 1:
                raise ConfigInvalid(f"lsb_rca_span must be >= 1, got {s}")
            if s >= w:
                raise ConfigInvalid(f"lsb_rca_span {s} leaves no lookahead block in {w} bits")
            if (w - s) % m:
                raise ConfigInvalid(f"({w} - {s}) is not divisible by block size {m}")
        elif w % m:
            raise ConfigInvalid(f"width {w} is not divisible by block size {m}")
        return self

    @property
    def block_count(self) -> int:
        if self.arch is Arch.RCA:
            return 0
        return (self.width - self.rca_bits) // self.block_size

    @property
    def rca_bits(self) -> int:
        if self.arch is Arch.RCA:
            return self.width
        return self.lsb_rca_span if self.arch.hybrid else 0


def feasible_spans(width: int, block_size: int, spans: Sequence[int] | None = None) -> list[int]:
    """Hybrid LSB-RCA spans that leave a whole number of lookahead blocks."""
    cands = range(1, width) if spans is None else spans
    return sorted({s for s in cands if 1 <= s < width and (width - s) % block_size == 0})


@dataclass(frozen=True)
class BclgPorts:
    carry: DualRailPort
    red_carry: DualRailPort | None
    pgk: tuple[tuple[int, int, int], ...]


class _Gates:
    """Gate emission helpers that respect the fan-in limit and delay table."""

    def __init__(self, nl: Netlist, delays: DelayModel):
        self.nl = nl
        self.delays = delays
        nl.annotations.setdefault("rail_pairs", [])
        nl.annotations.setdefault("dsop_ors", [])
        nl.annotations.setdefault("counts", {"FA": 0, "SL": 0, "BCLG": 0})

    def gate(self, kind: GateKind, inputs: Sequence[int]) -> int:
        return self.nl.add_gate(kind, inputs, self.delays.delay(kind))

    def _tree(self, make, nets: Sequence[int]) -> int:
        nets = list(nets)
        if len(nets) == 1:
            return nets[0]
        while len(nets) > MAX_FAN_IN:
            groups = -(-len(nets) // MAX_FAN_IN)
            size, extra = divmod(len(nets), groups)
            nxt, i = [], 0
            for g in range(groups):
                n = size + (g < extra)
                chunk = nets[i:i + n]
                i += n
                nxt.append(chunk[0] if n == 1 else self.gate(make(n), chunk))
            nets = nxt
        return self.gate(make(len(nets)), nets)

    def and_(self, nets: Sequence[int]) -> int:
        return self._tree(AND, nets)

    def or_(self, nets: Sequence[int], dsop: bool = True) -> int:
        start = len(self.nl.gates)
        out = self._tree(OR, nets)
        if dsop:
            self.nl.annotations["dsop_ors"].extend(range(start, len(self.nl.gates)))
        return out

    def celem(self, a: int, b: int) -> int:
        return self.gate(CELEM(2), (a, b))

    def pair(self, name: str, rail1: int, rail0: int) -> DualRailPort:
        port = DualRailPort(name, rail1, rail0)
        self.nl.annotations["rail_pairs"].append(port)
        return port


def _sum_rails(g: _Gates, a: DualRailPort, b: DualRailPort, cin: DualRailPort) -> tuple[int, int]:
    a1, a0, b1, b0, c1, c0 = a.rail1, a.rail0, b.rail1, b.rail0, cin.rail1, cin.rail0
    s1 = g.or_([
        g.and_((a1, b0, c0)), g.and_((a0, b1, c0)),
        g.and_((a0, b0, c1)), g.and_((a1, b1, c1)),
    ])
    s0 = g.or_([
        g.and_((a0, b0, c0)), g.and_((a1, b1, c0)),
        g.and_((a1, b0, c1)), g.and_((a0, b1, c1)),
    ])
    return s1, s0


def _propagate(g: _Gates, a: DualRailPort, b: DualRailPort) -> int:
    return g.or_([g.and_((a.rail1, b.rail0)), g.and_((a.rail0, b.rail1))])


def build_full_adder(
    nl: Netlist,
    a: DualRailPort,
    b: DualRailPort,
    cin: DualRailPort,
    delays: DelayModel = UNIT_DELAY,
    name: str = "fa",
) -> tuple[DualRailPort, DualRailPort]:
    g = _Gates(nl, delays)
    s1, s0 = _sum_rails(g, a, b, cin)
    p = _propagate(g, a, b)
    co1 = g.or_([g.and_((a.rail1, b.rail1)), g.celem(p, cin.rail1)])
    co0 = g.or_([g.and_((a.rail0, b.rail0)), g.celem(p, cin.rail0)])
    nl.annotations["counts"]["FA"] += 1
    return g.pair(f"{name}.sum", s1, s0), g.pair(f"{name}.cout", co1, co0)


def build_sum_logic(
    nl: Netlist,
    a: DualRailPort,
    b: DualRailPort,
    cin: DualRailPort,
    delays: DelayModel = UNIT_DELAY,
    name: str = "sl",
) -> DualRailPort:
    g = _Gates(nl, delays)
    s1, s0 = _sum_rails(g, a, b, cin)
    nl.annotations["counts"]["SL"] += 1
    return g.pair(f"{name}.sum", s1, s0)


def build_bclg(
    nl: Netlist,
    a: Sequence[DualRailPort],
    b: Sequence[DualRailPort],
    carry_in: DualRailPort,
    redundant: bool,
    delays: DelayModel = UNIT_DELAY,
    name: str = "bclg",
) -> BclgPorts:
    """Block carry lookahead generator over ``len(a)`` bits (LSB first)."""
    m = len(a)
    if m != len(b) or m < 1:
        raise ConfigInvalid("BCLG operand ports must be equal, non-empty lists")
    g = _Gates(nl, delays)
    pgk = []
    for ai, bi in zip(a, b):
        gi = g.and_((ai.rail1, bi.rail1))
        ki = g.and_((ai.rail0, bi.rail0))
        pi = _propagate(g, ai, bi)
        pgk.append((gi, ki, pi))
    P = [t[2] for t in pgk]

    def terms(select: int) -> list[int]:
        # products P[m-1]..P[j+1] . X[j] for j = m-1 down to 0
        out = []
        for j in range(m - 1, -1, -1):
            out.append(g.and_(P[j + 1:][::-1] + [pgk[j][select]]))
        return out

    gen_terms, kill_terms = terms(0), terms(1)
    p_all = g.and_(P[::-1])
    c1 = g.or_(gen_terms + [g.celem(p_all, carry_in.rail1)])
    c0 = g.or_(kill_terms + [g.celem(p_all, carry_in.rail0)])
    carry = g.pair(f"{name}.c", c1, c0)
    red = None
    if redundant:
        r1 = g.or_(gen_terms + [g.and_(P[::-1] + [carry_in.rail1])])
        r0 = g.or_(kill_terms + [g.and_(P[::-1] + [carry_in.rail0])])
        red = g.pair(f"{name}.redc", r1, r0)
    nl.annotations["counts"]["BCLG"] += 1
    return BclgPorts(carry, red, tuple(pgk))


def build_adder(config: AdderConfig) -> Netlist:
    cfg = config.validate()
    w, m, arch = cfg.width, cfg.block_size, cfg.arch
    nl = Netlist()
    nl.annotations["config"] = cfg
    a = [nl.add_input(f"a{i}") for i in range(w)]
    b = [nl.add_input(f"b{i}") for i in range(w)]
    cin = nl.add_input("cin")
    sums: list[DualRailPort] = []
    blocks = []

    carry = cin
    for i in range(cfg.rca_bits):
        s, carry = build_full_adder(nl, a[i], b[i], carry, cfg.delays, name=f"rca{i}")
        sums.append(s)

    ripple_in = carry      # regular carry entering the next block's FA chain
    lookahead_in = carry   # carry entering the next BCLG
    base = cfg.rca_bits
    n_blocks = cfg.block_count
    for k in range(n_blocks):
        bits = range(base, base + m)
        c = ripple_in
        for i in bits[:-1]:
            s, c = build_full_adder(nl, a[i], b[i], c, cfg.delays, name=f"blk{k}.fa{i}")
            sums.append(s)
        top = bits[-1]
        sums.append(build_sum_logic(nl, a[top], b[top], c, cfg.delays, name=f"blk{k}.sl{top}"))
        last = k == n_blocks - 1
        ports = build_bclg(
            nl, [a[i] for i in bits], [b[i] for i in bits], lookahead_in,
            redundant=arch.redundant and not last, delays=cfg.delays, name=f"blk{k}.bclg",
        )
        blocks.append({"bits": (bits[0], bits[-1]), "carry_in": lookahead_in,
                       "carry": ports.carry, "red_carry": ports.red_carry, "pgk": ports.pgk})
        ripple_in = ports.carry
        lookahead_in = ports.red_carry if ports.red_carry is not None else ports.carry
        base += m

    for i, s in enumerate(sums):
        nl.add_output(f"s{i}", s.rail1, s.rail0)
    nl.add_output("cout", ripple_in.rail1, ripple_in.rail0)
    nl.annotations["blocks"] = blocks
    return nl.validate()


def worst_case_vectors(config: AdderConfig) -> list[tuple[int, int, int]]:
    """Operand triples that exercise the longest carry chains.

    All-propagate with either carry-in value, generate (or kill) at the LSB
    with propagate above, and the all-kill vector.
    """
    w = config.width
    mask = (1 << w) - 1
    vecs = [
        (mask, 0, 1),
        (mask, 0, 0),
        (mask, 1, 0),
        (mask ^ 1, 0, 1),
        (0, 0, 0),
    ]
    return list(dict.fromkeys(vecs))
