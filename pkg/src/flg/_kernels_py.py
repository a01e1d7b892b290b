"""Pure-Python reference versions of the hot term kernels.

``flg._kernels`` (Cython) mirrors this module function for function; the
selection happens in ``flg.kernels``.
"""
from __future__ import annotations

from .terms import SMT_CONST, SMT_CTOR, SMT_CTOR_NAMES, Const, Ctor, ModelValue, Var

IMPLEMENTATION = "python"


def apply_subst(u, theta):
    if isinstance(u, Var):
        return theta.get(u.name, u)
    if isinstance(u, Ctor) and not u.ground:
        return Ctor(u.name, tuple([apply_subst(a, theta) for a in u.args]), u.params)
    return u


def is_ground(u) -> bool:
    if isinstance(u, Var):
        return False
    if isinstance(u, Ctor):
        return u.ground
    return True


def is_ground_under(u, theta) -> bool:
    """True iff every variable of ``u`` is bound in ``theta``."""
    if isinstance(u, Var):
        return u.name in theta
    if isinstance(u, Ctor) and not u.ground:
        for a in u.args:
            if not is_ground_under(a, theta):
                return False
    return True


def match_value(u, v, theta) -> bool:
    """Value unification of term ``u`` against ground ``v``; extends theta in place.

    Returns False on clash; theta may then hold partial bindings and must be
    discarded by the caller.
    """
    if isinstance(u, Var):
        bound = theta.get(u.name)
        if bound is None:
            theta[u.name] = v
            return True
        return bound == v
    if isinstance(u, Ctor):
        if u.ground:
            return u == v
        if not isinstance(v, Ctor) or v.name != u.name or len(v.args) != len(u.args):
            return False
        if v.params != u.params:
            return False
        for a, b in zip(u.args, v.args):
            if not match_value(a, b, theta):
                return False
        return True
    return u == v


def bind_tuple(names, tup, theta):
    """Bind the variable names of a normalized atom against one tuple.

    Returns an extended copy of theta, or None if an already bound (or
    repeated) variable disagrees with the tuple.
    """
    out = None
    for name, v in zip(names, tup):
        cur = theta.get(name) if out is None else out.get(name)
        if cur is None:
            if out is None:
                out = dict(theta)
            out[name] = v
        elif cur != v:
            return None
    return dict(theta) if out is None else out


def sort_key(v):
    if isinstance(v, Const):
        return (0, v.sort, v.value)
    if isinstance(v, Ctor):
        return (1, len(v.args), v.name, tuple([sort_key(a) for a in v.args]),
                tuple([_param_key(p) for p in v.params]))
    if isinstance(v, ModelValue):
        return (2, tuple([(sort_key(k), sort_key(x)) for k, x in v.bindings]))
    if isinstance(v, Var):
        return (3, v.name)
    raise TypeError(f"not a term: {v!r}")


def _param_key(p):
    if isinstance(p, (Const, Ctor, ModelValue, Var)):
        return (0, sort_key(p))
    if isinstance(p, int):
        return (1, p)
    return (2, str(p))


def compare(a, b) -> int:
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


def to_smt_value(v):
    if isinstance(v, Const):
        return Ctor(SMT_CONST, (), (v,))
    if isinstance(v, Ctor):
        if v.name in SMT_CTOR_NAMES:
            return v
        return Ctor(SMT_CTOR, tuple([to_smt_value(a) for a in v.args]), (v.name,))
    raise ValueError(f"value has no SMT representation: {v!r}")
