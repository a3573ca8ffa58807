"""Per-kind gate delay tables.

The default is unit delay for every gate. A table file holds one entry per
line, ``KIND fan_in delay``, where ``fan_in`` may be ``*`` to cover every
fan-in of that kind. Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .netlist import GateKind, Op


@dataclass(frozen=True)
class DelayModel:
    default: int = 1
    per_kind: tuple[tuple[str, int | None, int], ...] = field(default=())

    def delay(self, kind: GateKind) -> int:
        best = self.default
        for name, fan_in, d in self.per_kind:
            if name != kind.op.value:
                continue
            if fan_in == kind.fan_in:
                return d
            if fan_in is None:
                best = d
        return best

    @classmethod
    def parse(cls, text: str) -> "DelayModel":
        entries = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'KIND fan_in delay', got {raw!r}")
            name, fan_in, delay = parts
            name = name.upper()
            try:
                Op(name)
            except ValueError:
                raise ValueError(f"line {lineno}: unknown gate kind {name!r}") from None
            d = int(delay)
            if d < 0:
                raise ValueError(f"line {lineno}: negative delay")
            entries.append((name, None if fan_in == "*" else int(fan_in), d))
        return cls(per_kind=tuple(entries))

    @classmethod
    def load(cls, path: str | Path) -> "DelayModel":
        return cls.parse(Path(path).read_text())


UNIT_DELAY = DelayModel()
