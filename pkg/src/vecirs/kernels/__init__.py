"""Hot-loop kernels with a compiled core and a pure numpy fallback.

The compiled extension is optional: `python setup.py build_ext --inplace`
(or a regular pip install with Cython present) builds it, and import falls
back to the numpy twin otherwise. Set VECIRS_KERNEL=python to force the
fallback, VECIRS_KERNEL=native to require the extension.
"""

import importlib
import os

from . import _fallback

_choice = os.environ.get("VECIRS_KERNEL", "auto").lower()
if _choice not in ("auto", "native", "python"):
    raise ValueError(f"VECIRS_KERNEL must be auto, native or python, got {_choice!r}")

_impl = _fallback
BACKEND = "python"
if _choice in ("auto", "native"):
    try:
        _impl = importlib.import_module(__name__ + "._native")
        BACKEND = "native"
    except ImportError:
        if _choice == "native":
            raise ImportError(
                "VECIRS_KERNEL=native but the compiled kernel is not built; "
                "run `python setup.py build_ext --inplace`"
            ) from None

best_allocation_scan = _impl.best_allocation_scan


def backend_name():
    return BACKEND
