"""Pick the compiled kernel core when available, else the numpy twin.

Set ``HUYGENS_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("HUYGENS_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _pykernels as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _pykernels as kernels

BACKEND = "cython" if kernels.__name__.endswith("._kernels") else "python"

__all__ = ["kernels", "BACKEND"]
