"""Select the term kernels: compiled extension if importable, else pure Python.

Set ``FLG_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("FLG_PURE_PYTHON") == "1":
    from . import _kernels_py as impl
else:
    try:
        from . import _kernels as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as impl

IMPLEMENTATION: str = impl.IMPLEMENTATION
apply_subst = impl.apply_subst
is_ground = impl.is_ground
is_ground_under = impl.is_ground_under
match_value = impl.match_value
bind_tuple = impl.bind_tuple
sort_key = impl.sort_key
compare = impl.compare
to_smt_value = impl.to_smt_value
