# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernel_py: same four functions, same contract.

Coefficients stay Python ints (they are exact and can grow), the win comes
from compiling the loop structure and list indexing."""

cpdef list zpoly_mul(a, b):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] = out[i + j] + ai * b[j]
    return out


cpdef list zpoly_rem(a, mod):
    cdef Py_ssize_t deg = len(mod) - 1, i, j, base
    cdef list r = list(a)
    for i in range(len(r) - 1, deg - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            base = i - deg
            for j in range(deg):
                r[base + j] = r[base + j] - c * mod[j]
    del r[deg:]
    while len(r) < deg:
        r.append(0)
    return r


cpdef list lpoly_mul(a, b, ell):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] = (out[i + j] + ai * b[j]) % ell
    return out


cpdef list lpoly_rem(a, mod, ell):
    cdef Py_ssize_t deg = len(mod) - 1, i, j, base
    cdef list r = [c % ell for c in a]
    for i in range(len(r) - 1, deg - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            base = i - deg
            for j in range(deg):
                r[base + j] = (r[base + j] - c * mod[j]) % ell
    del r[deg:]
    while len(r) < deg:
        r.append(0)
    return r
