"""Functional oracle, area proxy, benchmark statistics and trend checks.

All latencies are in gate-delay units. Area is a transistor-count proxy and
the switching proxy is the number of net transitions per transaction (both
phases). None of these stand for physical ns, um^2 or uW figures.

Random operands come from numpy's PCG64 bit generator seeded with the
user's integer seed. Each vector consumes ``ceil(width / 64)`` raw 64-bit
draws for ``a`` (low word first, masked to ``width`` bits), the same for
``b``, then one draw whose lowest bit is ``cin``.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .adders import AdderConfig, Arch, build_adder, feasible_spans, worst_case_vectors
from .netlist import GateKind, Netlist, Op
from .sim.engine import Simulator, TransactionResult


class MissingWeight(KeyError):
    pass


class FunctionalMismatch(AssertionError):
    def __init__(self, arch: str, vector: tuple[int, int, int], got: tuple[int, int], want: tuple[int, int]):
        a, b, cin = vector
        super().__init__(f"{arch}: a={a:#x} b={b:#x} cin={cin} gave sum={got[0]:#x} cout={got[1]}, "
                         f"expected sum={want[0]:#x} cout={want[1]}")
        self.arch = arch
        self.vector = vector


class OrderingViolated(AssertionError):
    pass


def oracle_add(a: int, b: int, cin: int, width: int) -> tuple[int, int]:
    if not (0 <= a < 1 << width and 0 <= b < 1 << width) or cin not in (0, 1):
        raise ValueError(f"operands out of range for width {width}")
    total = a + b + cin
    return total & ((1 << width) - 1), total >> width


DEFAULT_AREA_WEIGHTS: Mapping[str, int] = {"AND": 2, "OR": 2, "CELEM": 4}


def area_estimate(netlist: Netlist, weights: Mapping[str, int] = DEFAULT_AREA_WEIGHTS) -> int:
    """Sum of ``weight[kind] * fan_in`` over all gates (transistor proxy)."""
    total = 0
    for g in netlist.gates:
        try:
            w = weights[g.kind.op.value]
        except KeyError:
            raise MissingWeight(f"no area weight for {g.kind}") from None
        total += w * g.kind.fan_in
    return total


def random_vectors(width: int, n: int, seed: int) -> list[tuple[int, int, int]]:
    bg = np.random.PCG64(seed)
    words = -(-width // 64)
    mask = (1 << width) - 1

    def draw() -> int:
        v = 0
        for i in range(words):
            v |= int(bg.random_raw()) << (64 * i)
        return v & mask

    out = []
    for _ in range(n):
        a = draw()
        b = draw()
        cin = int(bg.random_raw()) & 1
        out.append((a, b, cin))
    return out


@dataclass(frozen=True)
class ArchStats:
    arch: str
    width: int
    block_size: int
    lsb_rca_span: int | None
    vectors: int
    fwd_worst: int
    fwd_mean: float
    fwd_min: int
    rev_worst: int
    rev_mean: float
    rev_stddev: float
    cycle_worst: int
    cycle_mean: float
    area: int
    gates: int
    transitions: float
    passed: int
    violations: int
    fwd_settle_worst: int
    rev_settle_worst: int
    rev_settle_stddev: float


def _summarize(config: AdderConfig, netlist: Netlist, results: Sequence[TransactionResult],
               passed: int, weights: Mapping[str, int]) -> ArchStats:
    fwd = [r.forward_latency for r in results]
    rev = [r.reverse_latency for r in results]
    cyc = [r.cycle_time for r in results]
    rset = [r.reverse_settle for r in results]
    return ArchStats(
        arch=config.arch.name,
        width=config.width,
        block_size=config.block_size,
        lsb_rca_span=config.lsb_rca_span if config.arch.hybrid else None,
        vectors=len(results),
        fwd_worst=max(fwd),
        fwd_mean=statistics.fmean(fwd),
        fwd_min=min(fwd),
        rev_worst=max(rev),
        rev_mean=statistics.fmean(rev),
        rev_stddev=statistics.pstdev(rev),
        cycle_worst=max(cyc),
        cycle_mean=statistics.fmean(cyc),
        area=area_estimate(netlist, weights),
        gates=len(netlist.gates),
        transitions=statistics.fmean(r.transitions for r in results),
        passed=passed,
        violations=sum(len(r.violations) for r in results),
        fwd_settle_worst=max(r.forward_settle for r in results),
        rev_settle_worst=max(rset),
        rev_settle_stddev=statistics.pstdev(rset),
    )


def run_vectors(config: AdderConfig, vectors: Iterable[tuple[int, int, int]], *,
                kernel: str | None = None, netlist: Netlist | None = None) -> list[TransactionResult]:
    """Simulate ``vectors`` and check each against :func:`oracle_add`."""
    nl = netlist if netlist is not None else build_adder(config)
    sim = Simulator(nl, kernel=kernel)
    out = []
    for vec in vectors:
        r = sim.run_transaction(*vec)
        want = oracle_add(*vec, config.width)
        if (r.sum, r.cout) != want:
            raise FunctionalMismatch(config.arch.name, vec, (r.sum, r.cout), want)
        out.append(r)
    return out


def benchmark(config: AdderConfig, n_vectors: int = 1000, seed: int = 0, *,
              weights: Mapping[str, int] = DEFAULT_AREA_WEIGHTS, kernel: str | None = None) -> ArchStats:
    """Seeded random vectors plus :func:`worst_case_vectors`, all oracle-checked."""
    if n_vectors < 1:
        raise ValueError("n_vectors must be >= 1")
    nl = build_adder(config)
    vectors = random_vectors(config.width, n_vectors, seed) + worst_case_vectors(config)
    results = run_vectors(config, vectors, kernel=kernel, netlist=nl)
    return _summarize(config, nl, results, len(results), weights)


@dataclass(frozen=True)
class OrderingCheck:
    passed: bool
    ranking: dict[str, list[str]]
    failures: list[str] = field(default_factory=list)

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        parts = [f"{metric}: {' <= '.join(names)}" for metric, names in self.ranking.items()]
        text = f"ordering HYBRID_RED <= BCLA_RED < BCLA_REG: {verdict} ({'; '.join(parts)})"
        if self.failures:
            text += " -- " + "; ".join(self.failures)
        return text


def latency_ordering_check(rows: Iterable[ArchStats], strict: bool = False) -> OrderingCheck:
    """Worst-case forward latency and cycle time: HYBRID_RED <= BCLA_RED < BCLA_REG."""
    by = {r.arch: r for r in rows}
    need = (Arch.HYBRID_RED.name, Arch.BCLA_RED.name, Arch.BCLA_REG.name)
    missing = [n for n in need if n not in by]
    if missing:
        raise ValueError(f"ordering check needs reports for {missing}")
    hyb, red, reg = (by[n] for n in need)
    failures = []
    ranking = {}
    for metric in ("fwd_worst", "cycle_worst"):
        h, d, g = getattr(hyb, metric), getattr(red, metric), getattr(reg, metric)
        ranking[metric] = [f"{r.arch}={getattr(r, metric)}" for r in sorted(by.values(), key=lambda r: getattr(r, metric))]
        if not h <= d:
            failures.append(f"{metric}: HYBRID_RED {h} > BCLA_RED {d}")
        if not d < g:
            failures.append(f"{metric}: BCLA_RED {d} >= BCLA_REG {g}")
    check = OrderingCheck(not failures, ranking, failures)
    if strict and failures:
        raise OrderingViolated(str(check))
    return check


@dataclass(frozen=True)
class SweepResult:
    best_span: int
    rows: tuple[ArchStats, ...]

    @property
    def best(self) -> ArchStats:
        return next(r for r in self.rows if r.lsb_rca_span == self.best_span)


def sweep_hybrid_span(width: int, block_size: int = 4, spans: Sequence[int] | None = None, *,
                      arch: Arch = Arch.HYBRID_RED, n_vectors: int = 1000, seed: int = 0,
                      delays=None, kernel: str | None = None) -> SweepResult:
    """Benchmark every feasible LSB-RCA span; keep the lowest worst-case forward
    latency, ties going to the smaller span."""
    if not arch.hybrid:
        raise ValueError(f"{arch.name} is not a hybrid architecture")
    cands = feasible_spans(width, block_size, spans)
    if not cands:
        raise ValueError(f"no feasible LSB-RCA span for width {width}, block size {block_size}")
    extra = {} if delays is None else {"delays": delays}
    rows = tuple(
        benchmark(AdderConfig(arch, width, block_size, s, **extra), n_vectors, seed, kernel=kernel)
        for s in cands
    )
    best = min(rows, key=lambda r: (r.fwd_worst, r.lsb_rca_span))
    return SweepResult(best.lsb_rca_span, rows)


# -- report serialization --------------------------------------------------

CSV_COLUMNS = ("arch", "fwd_worst", "fwd_mean", "rev_worst", "rev_mean", "rev_stddev",
               "cycle_worst", "cycle_mean", "area", "transitions", "pass")
UNITS_NOTE = "latencies and cycle times in gate-delay units; area = transistor proxy; transitions = switching proxy"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def _cell(row: ArchStats, col: str) -> str:
    if col == "pass":
        return f"{row.passed}/{row.vectors}"
    return _fmt(getattr(row, col))


def _label(row: ArchStats) -> str:
    return row.arch if row.lsb_rca_span is None else f"{row.arch}(span={row.lsb_rca_span})"


@dataclass(frozen=True)
class BenchmarkReport:
    rows: tuple[ArchStats, ...]
    seed: int
    ordering: OrderingCheck | None = None

    def to_csv(self) -> str:
        lines = [f"# {UNITS_NOTE}; seed={self.seed}", ",".join(CSV_COLUMNS)]
        for r in self.rows:
            lines.append(",".join(_label(r) if c == "arch" else _cell(r, c) for c in CSV_COLUMNS))
        if self.ordering is not None:
            lines.append(f"# {self.ordering}")
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        head = ["Adder", "Latency worst", "Latency mean", "Cycle worst", "Cycle mean",
                "Reverse worst", "Reverse stddev", "Area proxy", "Transitions", "Pass"]
        lines = [f"_{UNITS_NOTE}; seed={self.seed}_", "",
                 "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for r in self.rows:
            cells = [_label(r), _fmt(r.fwd_worst), _fmt(r.fwd_mean), _fmt(r.cycle_worst), _fmt(r.cycle_mean),
                     _fmt(r.rev_worst), _fmt(r.rev_stddev), _fmt(r.area), _fmt(r.transitions), _cell(r, "pass")]
            lines.append("| " + " | ".join(cells) + " |")
        if self.ordering is not None:
            lines += ["", str(self.ordering)]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        doc = {
            "units": UNITS_NOTE,
            "seed": self.seed,
            "rows": [{k: (round(v, 6) if isinstance(v, float) else v) for k, v in asdict(r).items()}
                     for r in self.rows],
        }
        if self.ordering is not None:
            doc["ordering"] = {"passed": self.ordering.passed, "ranking": self.ordering.ranking,
                               "failures": self.ordering.failures}
        return json.dumps(doc, indent=1) + "\n"

    def render(self, fmt: str) -> str:
        return {"csv": self.to_csv, "md": self.to_markdown, "text": self.to_text}[fmt]()


def compare(configs: Sequence[AdderConfig], n_vectors: int = 1000, seed: int = 0, *,
            weights: Mapping[str, int] = DEFAULT_AREA_WEIGHTS, kernel: str | None = None) -> BenchmarkReport:
    """Benchmark several architectures on identical vectors, in the given order."""
    rows = tuple(benchmark(c, n_vectors, seed, weights=weights, kernel=kernel) for c in configs)
    names = {r.arch for r in rows}
    ordering = None
    if {Arch.HYBRID_RED.name, Arch.BCLA_RED.name, Arch.BCLA_REG.name} <= names:
        ordering = latency_ordering_check(rows)
    return BenchmarkReport(rows, seed, ordering)
