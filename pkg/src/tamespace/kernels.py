"""Backend selection for the polynomial kernels.

The compiled module is used when it was built; set ``TAMESPACE_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("TAMESPACE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

mul_terms = _impl.mul_terms
add_scaled_into = _impl.add_scaled_into
substitute_terms = _impl.substitute_terms
weighted_max = _impl.weighted_max
