"""Selects the event kernel at import time.

The compiled extension is used when it was built; otherwise, or when
``QDI_ADDERS_PURE=1`` is set, the pure-Python kernel is used. Both expose
the same ``run`` function and produce identical results.
"""

import os

from . import _pykernel

try:
    if os.environ.get("QDI_ADDERS_PURE") == "1":
        raise ImportError("pure kernel forced")
    from . import _ckernel
except ImportError:
    _ckernel = None

KERNELS = {"python": _pykernel}
if _ckernel is not None:
    KERNELS["compiled"] = _ckernel

DEFAULT_KERNEL = "compiled" if _ckernel is not None else "python"


def get_kernel(name: str | None = None):
    name = name or DEFAULT_KERNEL
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"kernel {name!r} is not available; have {sorted(KERNELS)}") from None
