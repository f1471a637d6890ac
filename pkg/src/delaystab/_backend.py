"""Select the integration kernel: compiled if importable, else pure Python.

Set ``DELAYSTAB_BACKEND=python`` to force the fallback.
"""
import logging
import os

log = logging.getLogger(__name__)

if os.environ.get("DELAYSTAB_BACKEND", "").lower() == "python":
    from ._ddecore_py import integrate_kernel
    BACKEND = "python"
else:
    try:
        from ._ddecore import integrate_kernel
        BACKEND = "cython"
    except ImportError:
        log.debug("compiled kernel unavailable, using pure-Python fallback")
        from ._ddecore_py import integrate_kernel
        BACKEND = "python"

__all__ = ["BACKEND", "integrate_kernel"]
