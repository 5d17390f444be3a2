"""Byte scanning kernels with a compiled fast path.

Importing this package selects the Cython extension when it was built and
falls back to the pure-Python implementation otherwise.  BACKEND names the
implementation in use ("compiled" or "python").
"""

from . import pykernels

try:
    from . import kernels as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = pykernels
    BACKEND = "python"

find_all = _impl.find_all
find_multi = _impl.find_multi

__all__ = ["BACKEND", "find_all", "find_multi", "pykernels"]
