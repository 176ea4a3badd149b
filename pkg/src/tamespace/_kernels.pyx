# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops; same contract as _kernels_py."""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF
from libc.stdlib cimport malloc, free


cdef inline tuple _add_exps(long* ea, long* eb, int n):
    cdef tuple t = PyTuple_New(n)
    cdef int k
    cdef object o
    for k in range(n):
        o = ea[k] + eb[k]
        Py_INCREF(o)
        PyTuple_SET_ITEM(t, k, o)
    return t


cdef long* _pack(list keys, int n) except NULL:
    cdef Py_ssize_t m = len(keys)
    cdef long* buf = <long*> malloc(sizeof(long) * (m * n + 1))
    cdef Py_ssize_t i
    cdef int k
    cdef tuple e
    if buf == NULL:
        raise MemoryError()
    for i in range(m):
        e = <tuple> keys[i]
        for k in range(n):
            buf[i * n + k] = e[k]
    return buf


def mul_terms(dict a, dict b, long p):
    if len(a) > len(b):
        a, b = b, a
    if not a or not b:
        return {}
    cdef list ak = list(a.keys())
    cdef list bk = list(b.keys())
    cdef list av = list(a.values())
    cdef list bv = list(b.values())
    cdef int n = len(<tuple> ak[0])
    cdef Py_ssize_t na = len(ak), nb = len(bk), i, j
    cdef long* ea = _pack(ak, n)
    cdef long* eb
    try:
        eb = _pack(bk, n)
    except MemoryError:
        free(ea)
        raise
    cdef dict out = {}
    cdef tuple e
    cdef long long ca, cb, acc
    cdef long long* ac
    cdef long long* bc
    try:
        if p > 0 and p < 3037000499:
            ac = <long long*> malloc(sizeof(long long) * na)
            bc = <long long*> malloc(sizeof(long long) * nb)
            try:
                for i in range(na):
                    ac[i] = av[i]
                for j in range(nb):
                    bc[j] = bv[j]
                for i in range(na):
                    ca = ac[i]
                    for j in range(nb):
                        e = _add_exps(ea + i * n, eb + j * n, n)
                        acc = (ca * bc[j]) % p
                        old = out.get(e)
                        if old is not None:
                            acc = (acc + <long long> old) % p
                        out[e] = acc
            finally:
                free(ac)
                free(bc)
            return {k: v for k, v in out.items() if v}
        for i in range(na):
            x = av[i]
            for j in range(nb):
                e = _add_exps(ea + i * n, eb + j * n, n)
                old = out.get(e)
                if old is None:
                    out[e] = x * bv[j]
                else:
                    out[e] = old + x * bv[j]
        if p:
            return {k: v % p for k, v in out.items() if v % p}
        return {k: v for k, v in out.items() if v}
    finally:
        free(ea)
        free(eb)


def add_scaled_into(dict acc, dict b, scale, long p):
    for e, c in b.items():
        v = acc.get(e, 0) + scale * c
        if p:
            v %= p
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)
    return acc


def substitute_terms(dict terms, list gens, int n, long p, one):
    cdef list powers = [[{(0,) * n: one}, g] for g in gens]
    cdef dict acc = {}
    cdef dict unit = {(0,) * n: one}
    cdef dict prod
    cdef list cache
    cdef int j
    cdef long k
    for e, c in terms.items():
        prod = unit
        for j in range(n):
            k = (<tuple> e)[j]
            if k:
                cache = powers[j]
                while len(cache) <= k:
                    cache.append(mul_terms(cache[len(cache) - 1], gens[j], p))
                if prod is unit:
                    prod = cache[k]
                else:
                    prod = mul_terms(prod, cache[k], p)
        add_scaled_into(acc, prod, c, p)
    return acc


def weighted_max(keys, weights):
    cdef list w = list(weights)
    cdef int n = len(w)
    cdef long long* wc
    cdef long long s, best = 0
    cdef bint found = False
    cdef int k
    if any(abs(x) > (1 << 40) for x in w):
        best_obj = None
        for e in keys:
            t = sum(x * y for x, y in zip(e, w))
            if best_obj is None or t > best_obj:
                best_obj = t
        return best_obj
    wc = <long long*> malloc(sizeof(long long) * (n + 1))
    try:
        for k in range(n):
            wc[k] = w[k]
        for e in keys:
            s = 0
            for k in range(n):
                s += (<long long> (<tuple> e)[k]) * wc[k]
            if not found or s > best:
                best = s
                found = True
    finally:
        free(wc)
    return best if found else None
