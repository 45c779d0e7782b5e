"""Select the compiled kernels when importable, else the numpy fallback.

Set ``TRAVWAVE_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("TRAVWAVE_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
