"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``INVSUM_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("INVSUM_PURE", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
    _impl = _ckernels
else:
    BACKEND = "python"
    _impl = _pykernels

gather_sum = _impl.gather_sum
inverse_product_table = _impl.inverse_product_table
inverse_product_single = _impl.inverse_product_single
kloosterman_row = _impl.kloosterman_row

__all__ = [
    "BACKEND",
    "BACKENDS",
    "gather_sum",
    "inverse_product_table",
    "inverse_product_single",
    "kloosterman_row",
]
