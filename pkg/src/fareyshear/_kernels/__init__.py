"""Kernel backend selection: compiled extension when available, numpy fallback.

Set FAREYSHEAR_KERNELS=pure to force the fallback (used by the benchmark and
the backend-equivalence tests).
"""

import os

from . import pure

if os.environ.get("FAREYSHEAR_KERNELS", "").lower() == "pure":
    _impl = pure
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND
tree_cocycles = _impl.tree_cocycles
apply_proj_batch = _impl.apply_proj_batch
shear_quads = _impl.shear_quads
