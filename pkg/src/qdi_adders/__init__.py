"""Gate-level simulation and generation of dual-rail QDI adders."""

from .adders import (
    ALL_ARCHS,
    AdderConfig,
    Arch,
    ConfigInvalid,
    build_adder,
    build_bclg,
    build_full_adder,
    build_sum_logic,
    worst_case_vectors,
)
from .encoding import DualRailValue, decode_word, encode_word, spacer_word
from .netlist import Netlist, export_netlist, import_netlist, new_netlist
from .sim import Simulator, TransactionResult, run_transaction

__version__ = "0.1.0"
