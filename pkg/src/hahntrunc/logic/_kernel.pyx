# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration evaluator for node programs without fixed-point nodes.

Sets are held as 64-bit masks, so bounds up to MAX_BOUND are supported.
"""
from array import array

MAX_BOUND = 62

cdef enum:
    T_VAR = 0
    T_CONST = 1
    T_ADD = 2
    F_TRUE = 10
    F_FALSE = 11
    F_EQ = 12
    F_LT = 13
    F_MEM = 14
    F_DEF = 15
    F_NOT = 20
    F_AND = 21
    F_OR = 22
    F_IMP = 23
    F_IFF = 24
    F_ALL_E = 30
    F_EX_E = 31
    F_ALL_S = 32
    F_EX_S = 33
    F_LFP = 34

OPCODES = {
    "T_VAR": T_VAR, "T_CONST": T_CONST, "T_ADD": T_ADD,
    "F_TRUE": F_TRUE, "F_FALSE": F_FALSE, "F_EQ": F_EQ, "F_LT": F_LT,
    "F_MEM": F_MEM, "F_DEF": F_DEF, "F_NOT": F_NOT, "F_AND": F_AND,
    "F_OR": F_OR, "F_IMP": F_IMP, "F_IFF": F_IFF, "F_ALL_E": F_ALL_E,
    "F_EX_E": F_EX_E, "F_ALL_S": F_ALL_S, "F_EX_S": F_EX_S, "F_LFP": F_LFP,
}


cdef struct Prog:
    const long long *kind
    const long long *a
    const long long *b
    const long long *c
    long long *env
    long long bound


cdef long long _term(Prog *p, long long i) noexcept nogil:
    cdef long long k = p.kind[i]
    cdef long long x, y
    if k == T_VAR:
        return p.env[p.a[i]]
    if k == T_CONST:
        return p.a[i] if p.a[i] < p.bound else -1
    x = _term(p, p.a[i])
    if x < 0:
        return -1
    y = _term(p, p.b[i])
    if y < 0:
        return -1
    x = x + y
    return x if x < p.bound else -1


cdef int _form(Prog *p, long long i) noexcept nogil:
    cdef long long k = p.kind[i]
    cdef long long x, y, slot, v, top
    if k == F_TRUE:
        return 1
    if k == F_FALSE:
        return 0
    if k == F_EQ:
        x = _term(p, p.a[i])
        if x < 0:
            return 0
        return x == _term(p, p.b[i])
    if k == F_LT:
        x = _term(p, p.a[i])
        y = _term(p, p.b[i])
        return x >= 0 and y >= 0 and x < y
    if k == F_MEM:
        x = _term(p, p.a[i])
        if x < 0:
            return 0
        return (p.env[p.b[i]] >> x) & 1
    if k == F_DEF:
        return _term(p, p.a[i]) >= 0
    if k == F_NOT:
        return not _form(p, p.a[i])
    if k == F_AND:
        return _form(p, p.a[i]) and _form(p, p.b[i])
    if k == F_OR:
        return _form(p, p.a[i]) or _form(p, p.b[i])
    if k == F_IFF:
        return _form(p, p.a[i]) == _form(p, p.b[i])
    if k == F_IMP:
        if not _form(p, p.a[i]):
            return 1
        if p.c[i] >= 0 and not _form(p, p.c[i]):
            return 1
        return _form(p, p.b[i])
    slot = p.a[i]
    if k == F_ALL_E or k == F_EX_E:
        top = p.bound
    else:
        top = (<long long>1) << p.bound
    if k == F_ALL_E or k == F_ALL_S:
        for v in range(top):
            p.env[slot] = v
            if not _form(p, p.b[i]):
                return 0
        return 1
    for v in range(top):
        p.env[slot] = v
        if _form(p, p.b[i]):
            return 1
    return 0


def eval_program(prog, env, long long bound):
    """Evaluate ``prog.root`` under slot values ``env`` with domain ``[0, bound)``."""
    if bound > MAX_BOUND:
        raise ValueError(f"compiled kernel supports bounds up to {MAX_BOUND}")
    if prog.has_lfp:
        raise ValueError("compiled kernel does not evaluate fixed-point nodes")
    cdef const long long[:] kind = prog.kind
    cdef const long long[:] a = prog.a
    cdef const long long[:] b = prog.b
    cdef const long long[:] c = prog.c
    cdef long long[:] slots
    cdef Prog p
    buf = array("q", list(env) or [0])
    slots = buf
    p.kind = &kind[0]
    p.a = &a[0]
    p.b = &b[0]
    p.c = &c[0]
    p.env = &slots[0]
    p.bound = bound
    cdef long long root = prog.root
    cdef int result
    with nogil:
        result = _form(&p, root)
    return bool(result)
