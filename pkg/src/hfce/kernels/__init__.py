"""Hot kernels for single-atom refinement.

The compiled extension is used when it imports; otherwise the numpy
implementation is used.  Set ``HFCE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("HFCE_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

atom = _impl.atom
project = _impl.project
project_grad = _impl.project_grad


def backends():
    """Return the importable kernel modules keyed by backend name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found


__all__ = ["BACKEND", "atom", "project", "project_grad", "backends"]
