"""Hot-loop kernels, compiled when available.

The Cython extension ``frobkit._ckernels`` is used if it imports; otherwise
the pure-Python implementations in ``frobkit._pykernels`` are used.  Setting
``FROBKIT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
mul_terms = _pykernels.mul_terms
normal_form = _pykernels.normal_form
rref = _pykernels.rref

if os.environ.get("FROBKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        mul_terms = _ckernels.mul_terms
        normal_form = _ckernels.normal_form
        rref = _ckernels.rref


def backends():
    """Return ``{name: module}`` for every importable kernel implementation."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
