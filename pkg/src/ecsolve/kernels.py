"""Kernel selection.

The compiled Cython module is used when it was built and imports cleanly;
set ``ECSOLVE_PURE_PYTHON=1`` to force the pure-Python kernels (and the
stdlib ``Fraction`` scalar, see :mod:`ecsolve.algebra.rational`).
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("ECSOLVE_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

conv2d = _impl.conv2d
conv1d = _impl.conv1d
shift_accumulate = _impl.shift_accumulate
poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
fold = _impl.fold

__all__ = [
    "BACKEND",
    "conv2d",
    "conv1d",
    "shift_accumulate",
    "poly_mul",
    "poly_divmod",
    "fold",
]
