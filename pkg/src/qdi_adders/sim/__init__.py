from .engine import (
    DEFAULT_BUDGET,
    EventBudgetExceeded,
    OutputIncomplete,
    PhaseResult,
    ProtocolViolation,
    SimulationError,
    Simulator,
    TransactionResult,
    adder_assignment,
    evaluate_gate,
    run_staggered_probe,
    run_transaction,
)
from .kernel import DEFAULT_KERNEL, KERNELS

__all__ = [
    "DEFAULT_BUDGET", "DEFAULT_KERNEL", "KERNELS", "EventBudgetExceeded", "OutputIncomplete",
    "PhaseResult", "ProtocolViolation", "SimulationError", "Simulator", "TransactionResult",
    "adder_assignment", "evaluate_gate", "run_staggered_probe", "run_transaction",
]
