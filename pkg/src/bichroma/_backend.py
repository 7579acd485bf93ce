"""Select the propagation kernel implementation at import time.

The compiled extension is preferred. Setting ``BICHROMA_PURE_PYTHON=1`` forces
the pure-Python twin, which is also used when the extension was not built.
"""
import os

from . import _pykernels

if os.environ.get("BICHROMA_PURE_PYTHON", "") == "1":
    kernels = _pykernels
    NAME = "python"
else:
    try:
        from . import _kernels as kernels
        NAME = "cython"
    except ImportError:  # extension not built
        kernels = _pykernels
        NAME = "python"

rwa_propagate = kernels.rwa_propagate
lab_propagate = kernels.lab_propagate

__all__ = ["NAME", "kernels", "rwa_propagate", "lab_propagate"]
