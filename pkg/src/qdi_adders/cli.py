"""Command-line entry point: ``gen``, ``sim``, ``bench`` and ``sweep``.

Exit codes: 0 success, 1 I/O error, 2 invalid configuration (or no feasible
hybrid span), 3 protocol violation, 4 functional mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .adders import ALL_ARCHS, AdderConfig, Arch, ConfigInvalid, build_adder, feasible_spans
from .delays import UNIT_DELAY, DelayModel
from .metrics import (
    UNITS_NOTE,
    BenchmarkReport,
    FunctionalMismatch,
    area_estimate,
    compare,
    oracle_add,
    sweep_hybrid_span,
)
from .netlist import export_netlist
from .sim.engine import ProtocolViolation, Simulator

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_PROTOCOL, EXIT_MISMATCH = 0, 1, 2, 3, 4

_ARCHS = {a.value: a for a in ALL_ARCHS}
_FORMATS = {"csv": "csv", "md": "md", "text": "text", "structured-text": "text"}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _arch_list(values: Sequence[str] | None) -> list[Arch]:
    if not values:
        return list(ALL_ARCHS)
    out = []
    for v in values:
        for name in filter(None, (s.strip() for s in v.split(","))):
            if name not in _ARCHS:
                raise _Fail(EXIT_CONFIG, f"unknown architecture {name!r}; choose from {', '.join(_ARCHS)}")
            if _ARCHS[name] not in out:
                out.append(_ARCHS[name])
    return out


def _delays(args) -> DelayModel:
    if not args.delay_table:
        return UNIT_DELAY
    try:
        return DelayModel.load(args.delay_table)
    except OSError as e:
        raise _Fail(EXIT_IO, f"cannot read delay table: {e}") from None
    except ValueError as e:
        raise _Fail(EXIT_CONFIG, f"bad delay table: {e}") from None


def _config(args, arch: Arch, delays: DelayModel, span: int | None = None) -> AdderConfig:
    if arch.hybrid:
        span = span if span is not None else args.lsb_rca_span
    cfg = AdderConfig(arch, args.width, args.block_size, span if arch.hybrid else None, delays)
    try:
        return cfg.validate()
    except ConfigInvalid as e:
        raise _Fail(EXIT_CONFIG, f"invalid configuration: {e}") from None


def _best_span(args, delays: DelayModel, arch: Arch = Arch.HYBRID_RED) -> int:
    if args.lsb_rca_span is not None:
        return args.lsb_rca_span
    if not feasible_spans(args.width, args.block_size):
        raise _Fail(EXIT_CONFIG, f"no feasible LSB-RCA span for width {args.width}, block size {args.block_size}")
    if args.width < 1 or args.block_size < 2:
        raise _Fail(EXIT_CONFIG, "invalid configuration: width must be >= 1 and block size >= 2")
    return sweep_hybrid_span(args.width, args.block_size, arch=arch, n_vectors=args.vectors,
                             seed=args.seed, delays=delays).best_span


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as e:
        raise _Fail(EXIT_IO, f"cannot write {out}: {e}") from None


def cmd_gen(args) -> int:
    delays = _delays(args)
    arch = _arch_list(args.arch)
    if len(arch) != 1:
        raise _Fail(EXIT_CONFIG, "gen takes exactly one --arch")
    span = _best_span(args, delays, arch[0]) if arch[0].hybrid else None
    cfg = _config(args, arch[0], delays, span)
    nl = build_adder(cfg)
    doc = export_netlist(nl)
    if args.out is None:
        sys.stdout.write(doc)
        stream = sys.stderr
    else:
        _emit(doc, args.out)
        stream = sys.stdout
    where = args.out or "<stdout>"
    span_note = f" span={cfg.lsb_rca_span}" if arch[0].hybrid else ""
    print(f"{arch[0].name} width={cfg.width} block={cfg.block_size}{span_note}: "
          f"{len(nl.gates)} gates, area proxy {area_estimate(nl)} -> {where}", file=stream)
    return EXIT_OK


def cmd_sim(args) -> int:
    delays = _delays(args)
    arch = _arch_list(args.arch)
    if len(arch) != 1:
        raise _Fail(EXIT_CONFIG, "sim takes exactly one --arch")
    span = _best_span(args, delays, arch[0]) if arch[0].hybrid else None
    cfg = _config(args, arch[0], delays, span)
    limit = 1 << cfg.width
    if not (0 <= args.a < limit and 0 <= args.b < limit) or args.cin not in (0, 1):
        raise _Fail(EXIT_CONFIG, f"operands must fit {cfg.width} bits and cin must be 0 or 1")
    sim = Simulator(build_adder(cfg))
    try:
        r = sim.run_transaction(args.a, args.b, args.cin, strict=True)
    except ProtocolViolation as e:
        print(str(e), file=sys.stderr)
        return EXIT_PROTOCOL
    want = oracle_add(args.a, args.b, args.cin, cfg.width)
    lines = [
        f"# {UNITS_NOTE}",
        f"arch={arch[0].name} width={cfg.width} a={args.a} b={args.b} cin={args.cin}",
        f"sum={r.sum} cout={r.cout}",
        f"forward_latency={r.forward_latency} reverse_latency={r.reverse_latency} cycle_time={r.cycle_time}",
        f"forward_settle={r.forward_settle} reverse_settle={r.reverse_settle}",
        f"transitions={r.transitions}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    if (r.sum, r.cout) != want:
        print(f"mismatch: expected sum={want[0]} cout={want[1]}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_bench(args) -> int:
    delays = _delays(args)
    archs = _arch_list(args.arch)
    span = _best_span(args, delays) if any(a.hybrid for a in archs) else None
    configs = [_config(args, a, delays, span) for a in archs]
    try:
        report = compare(configs, args.vectors, args.seed)
    except FunctionalMismatch as e:
        print(f"functional mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(report.render(_FORMATS[args.format]), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    delays = _delays(args)
    arch = _arch_list(args.arch or [Arch.HYBRID_RED.value])
    if len(arch) != 1 or not arch[0].hybrid:
        raise _Fail(EXIT_CONFIG, "sweep takes one hybrid --arch")
    spans = args.spans
    if not feasible_spans(args.width, args.block_size, spans):
        raise _Fail(EXIT_CONFIG, f"no feasible LSB-RCA span for width {args.width}, block size {args.block_size}")
    try:
        res = sweep_hybrid_span(args.width, args.block_size, spans, arch=arch[0], n_vectors=args.vectors,
                                seed=args.seed, delays=delays)
    except FunctionalMismatch as e:
        print(f"functional mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    report = BenchmarkReport(res.rows, args.seed)
    text = report.render(_FORMATS[args.format])
    text += f"# best lsb_rca_span={res.best_span} fwd_worst={res.best.fwd_worst}\n"
    _emit(text, args.out)
    return EXIT_OK


def _span_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arch", action="append", metavar="ARCH",
                        help=f"one of {', '.join(_ARCHS)}; repeat or comma-separate for bench")
    common.add_argument("--width", type=int, default=32)
    common.add_argument("--block-size", type=int, default=4)
    common.add_argument("--lsb-rca-span", type=int, default=None,
                        help="LSB ripple span for hybrids; chosen by sweep when omitted")
    common.add_argument("--vectors", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--delay-table", default=None, help="file of 'KIND fan_in delay' lines")
    common.add_argument("--format", choices=sorted(_FORMATS), default="csv")
    common.add_argument("--out", default=None, help="output file (stdout when omitted)")

    p = argparse.ArgumentParser(prog="qdi-adders", description="Dual-rail QDI adder generator and simulator.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gen", parents=[common], help="write a netlist document")
    g.set_defaults(func=cmd_gen)
    s = sub.add_parser("sim", parents=[common], help="simulate one transaction")
    s.add_argument("-a", type=int, required=True)
    s.add_argument("-b", type=int, required=True)
    s.add_argument("--cin", type=int, default=0)
    s.set_defaults(func=cmd_sim)
    b = sub.add_parser("bench", parents=[common], help="compare architectures")
    b.set_defaults(func=cmd_bench)
    w = sub.add_parser("sweep", parents=[common], help="find the best hybrid LSB-RCA span")
    w.add_argument("--spans", type=_span_list, default=None, help="e.g. 4,8,12 or 4-28")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.vectors < 1:
        print("error: --vectors must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
