# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; same contract as flg._kernels_py."""
from flg.terms import SMT_CONST, SMT_CTOR, SMT_CTOR_NAMES, Const, Ctor, ModelValue, Var

IMPLEMENTATION = "cython"


cpdef object apply_subst(object u, dict theta):
    cdef tuple args
    cdef Py_ssize_t i, n
    cdef list out
    if type(u) is Var:
        return theta.get(u.name, u)
    if type(u) is Ctor and not u.ground:
        args = u.args
        n = len(args)
        out = [None] * n
        for i in range(n):
            out[i] = apply_subst(args[i], theta)
        return Ctor(u.name, tuple(out), u.params)
    return u


cpdef bint is_ground(object u):
    if type(u) is Var:
        return False
    if type(u) is Ctor:
        return u.ground
    return True


cpdef bint is_ground_under(object u, dict theta):
    cdef object a
    if type(u) is Var:
        return u.name in theta
    if type(u) is Ctor and not u.ground:
        for a in u.args:
            if not is_ground_under(a, theta):
                return False
    return True


cpdef bint match_value(object u, object v, dict theta):
    cdef tuple ua, va
    cdef Py_ssize_t i, n
    cdef object bound
    if type(u) is Var:
        bound = theta.get(u.name)
        if bound is None:
            theta[u.name] = v
            return True
        return bound == v
    if type(u) is Ctor:
        if u.ground:
            return u == v
        if type(v) is not Ctor or v.name != u.name:
            return False
        ua = u.args
        va = v.args
        n = len(ua)
        if len(va) != n or v.params != u.params:
            return False
        for i in range(n):
            if not match_value(ua[i], va[i], theta):
                return False
        return True
    return u == v


cpdef object bind_tuple(tuple names, tuple tup, dict theta):
    cdef dict out = None
    cdef Py_ssize_t i, n = len(names)
    cdef object name, v, cur
    for i in range(n):
        name = names[i]
        v = tup[i]
        if out is None:
            cur = theta.get(name)
        else:
            cur = out.get(name)
        if cur is None:
            if out is None:
                out = dict(theta)
            out[name] = v
        elif cur != v:
            return None
    if out is None:
        return dict(theta)
    return out


cpdef object sort_key(object v):
    cdef tuple args
    cdef Py_ssize_t i, n
    cdef list ks
    t = type(v)
    if t is Const:
        return (0, v.sort, v.value)
    if t is Ctor:
        args = v.args
        n = len(args)
        ks = [None] * n
        for i in range(n):
            ks[i] = sort_key(args[i])
        return (1, n, v.name, tuple(ks), tuple([_param_key(p) for p in v.params]))
    if t is ModelValue:
        return (2, tuple([(sort_key(k), sort_key(x)) for k, x in v.bindings]))
    if t is Var:
        return (3, v.name)
    raise TypeError(f"not a term: {v!r}")


cdef object _param_key(object p):
    t = type(p)
    if t is Const or t is Ctor or t is ModelValue or t is Var:
        return (0, sort_key(p))
    if t is int:
        return (1, p)
    return (2, str(p))


cpdef int compare(object a, object b):
    ka = sort_key(a)
    kb = sort_key(b)
    return (ka > kb) - (ka < kb)


cpdef object to_smt_value(object v):
    cdef tuple args
    cdef Py_ssize_t i, n
    cdef list out
    t = type(v)
    if t is Const:
        return Ctor(SMT_CONST, (), (v,))
    if t is Ctor:
        if v.name in SMT_CTOR_NAMES:
            return v
        args = v.args
        n = len(args)
        out = [None] * n
        for i in range(n):
            out[i] = to_smt_value(args[i])
        return Ctor(SMT_CTOR, tuple(out), (v.name,))
    raise ValueError(f"value has no SMT representation: {v!r}")
