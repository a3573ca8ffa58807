"""QDI protocol monitors.

Violations are recorded, never raised, so a run can be inspected after the
fact. Screening of rail transitions happens inside the event kernel; this
module defines the record type and the checks that run on settled states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .netlist import DualRailPort, Netlist, Op

if TYPE_CHECKING:
    from .sim.engine import Simulator


class ViolationKind(enum.Enum):
    ILLEGAL_DUAL_RAIL = "ILLEGAL_DUAL_RAIL"
    NON_MONOTONE_PHASE = "NON_MONOTONE_PHASE"
    INCOMPLETE_OUTPUT = "INCOMPLETE_OUTPUT"


@dataclass(frozen=True)
class ViolationRecord:
    time: int
    where: str
    kind: ViolationKind

    def __str__(self):
        return f"t={self.time} {self.kind.value} at {self.where}"


def attach_monitors(sim: "Simulator", extra_pairs: Iterable[DualRailPort] = ()) -> "Simulator":
    """Enable transition screening on ``sim`` and return it.

    Primary ports and every internal rail pair the generator annotated are
    screened for (1, 1); every net is screened for phase-monotonicity.
    """
    sim.enable_monitors(extra_pairs)
    return sim


def orthogonality_faults(netlist: Netlist, values) -> list[int]:
    """DSOP OR gates that currently see more than one active product term."""
    faults = []
    for gi in netlist.annotations.get("dsop_ors", ()):
        g = netlist.gates[gi]
        if g.kind.op is Op.OR and sum(int(values[n]) for n in g.inputs) > 1:
            faults.append(gi)
    return faults
