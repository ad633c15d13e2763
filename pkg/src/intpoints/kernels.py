"""Backend selector for the integer kernels.

Prefers the compiled extension; falls back to the pure-Python twin.
Set INTPOINTS_PURE=1 in the environment to force the fallback (used by
the benchmark and by the twin-equivalence tests).
"""

import os

if os.environ.get("INTPOINTS_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

vp = _impl.vp
content = _impl.content
min_valuation = _impl.min_valuation
eval_terms = _impl.eval_terms
normalize_tuple = _impl.normalize_tuple


def backend():
    """Name of the active kernel implementation ('cython' or 'python')."""
    return _impl.backend()
