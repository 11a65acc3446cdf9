"""Hot-loop kernels, compiled when available.

The compiled extension ``_ckernels`` is preferred; when it is missing (no
compiler at install time) or ``HMF_THETA_PURE=1`` is set, the pure-Python
reference implementations are used. ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from . import _pure

try:
    if os.environ.get("HMF_THETA_PURE", "") not in ("", "0"):
        raise ImportError("pure backend forced by HMF_THETA_PURE")
    from . import _ckernels as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _pure
    BACKEND = "pure"

poly_mulmod = _impl.poly_mulmod
cauchy_product = _impl.cauchy_product
cone_box_search = _impl.cone_box_search

__all__ = ["BACKEND", "poly_mulmod", "cauchy_product", "cone_box_search"]
