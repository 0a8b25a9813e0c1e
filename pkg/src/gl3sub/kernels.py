"""Backend selection for the enumeration kernels.

The compiled extension is used when it imports; otherwise (or when
``GL3SUB_PURE=1`` is set) the numpy fallback is used. ``BACKEND`` names the
active one.
"""

import os

from . import _kernels_py

if os.environ.get("GL3SUB_PURE") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

kloosterman = _impl.kloosterman
kloosterman_vector = _impl.kloosterman_vector
character_sum = _impl.character_sum
divisor3_table = _impl.divisor3_table


def backends():
    """Map of every importable backend name to its module."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
