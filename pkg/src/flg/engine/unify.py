"""Two-level unification: decide which side is bound, then value-unify."""
from __future__ import annotations

from typing import Optional

from ..kernels import apply_subst, is_ground_under, match_value
from .errors import HardError


def value_unify(theta: dict, u, v) -> Optional[dict]:
    """Match term ``u`` against ground value ``v``; never an error."""
    out = dict(theta)
    return out if match_value(u, v, out) else None


def unify(theta: dict, u1, u2) -> Optional[dict]:
    """Return the extended substitution, None on failure; HardError if both sides are free."""
    b1 = is_ground_under(u1, theta)
    b2 = is_ground_under(u2, theta)
    if b1 and b2:
        return dict(theta) if apply_subst(u1, theta) == apply_subst(u2, theta) else None
    if b2:
        return value_unify(theta, u1, apply_subst(u2, theta))
    if b1:
        return value_unify(theta, u2, apply_subst(u1, theta))
    raise HardError("uu-FF", "neither side of the unification is bound")
