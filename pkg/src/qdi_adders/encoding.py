"""Dual-rail (1-of-2) encoding of integers.

Each bit travels on two wires ``(rail1, rail0)``: ``(1, 0)`` is a valid 1,
``(0, 1)`` a valid 0, ``(0, 0)`` the spacer and ``(1, 1)`` is illegal.
Words are always LSB first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class ValueOutOfRange(ValueError):
    pass


class DualRailValue(NamedTuple):
    rail1: int
    rail0: int

    @property
    def is_valid(self) -> bool:
        return self.rail1 != self.rail0

    @property
    def is_spacer(self) -> bool:
        return self.rail1 == 0 and self.rail0 == 0

    @property
    def is_illegal(self) -> bool:
        return self.rail1 == 1 and self.rail0 == 1

    @property
    def bit(self) -> int:
        if not self.is_valid:
            raise ValueError(f"{tuple(self)} does not carry a bit")
        return self.rail1


VALID0 = DualRailValue(0, 1)
VALID1 = DualRailValue(1, 0)
SPACER = DualRailValue(0, 0)
ILLEGAL = DualRailValue(1, 1)


def encode_bit(bit: int) -> DualRailValue:
    if bit not in (0, 1):
        raise ValueOutOfRange(f"bit must be 0 or 1, got {bit!r}")
    return VALID1 if bit else VALID0


def encode_word(value: int, width: int) -> list[DualRailValue]:
    """Encode ``value`` as ``width`` dual-rail pairs, LSB first."""
    if width < 1:
        raise ValueOutOfRange(f"width must be positive, got {width}")
    if not 0 <= value < (1 << width):
        raise ValueOutOfRange(f"{value} does not fit in {width} bits")
    return [VALID1 if (value >> i) & 1 else VALID0 for i in range(width)]


def spacer_word(width: int) -> list[DualRailValue]:
    return [SPACER] * width


class WordStatus(enum.Enum):
    VALID = "valid"
    SPACER = "spacer"
    PARTIAL = "partial"
    ILLEGAL = "illegal"


@dataclass(frozen=True)
class DecodedWord:
    status: WordStatus
    value: int | None = None

    @property
    def is_valid(self) -> bool:
        return self.status is WordStatus.VALID


def decode_word(rails: Iterable[tuple[int, int]]) -> DecodedWord:
    """Classify a list of rail pairs; illegality dominates every other status."""
    pairs = [DualRailValue(*p) for p in rails]
    if any(p.is_illegal for p in pairs):
        return DecodedWord(WordStatus.ILLEGAL)
    if all(p.is_valid for p in pairs):
        return DecodedWord(WordStatus.VALID, sum(p.rail1 << i for i, p in enumerate(pairs)))
    if all(p.is_spacer for p in pairs):
        return DecodedWord(WordStatus.SPACER)
    return DecodedWord(WordStatus.PARTIAL)
