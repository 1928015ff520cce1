# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``frobkit._pykernels``."""

from heapq import heapify, heappop, heappush

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF
from libc.stdlib cimport malloc, free

import numpy as np


cdef inline long long _mulmod(long long a, long long b, long long p):
    # operands < p <= 2**31 - 1, so the product fits in 63 bits
    return (a * b) % p


cdef tuple _add_exps(tuple a, tuple b, Py_ssize_t n):
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t j
    cdef object v
    for j in range(n):
        v = <long long>a[j] + <long long>b[j]
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, j, v)
    return out


def mul_terms(dict a, dict b, long long p):
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef Py_ssize_t n
    cdef long long ca, cb, c
    cdef tuple ma, mb, m
    for ma, oca in a.items():
        ca = oca
        n = len(ma)
        for mb, ocb in b.items():
            cb = ocb
            m = _add_exps(ma, mb, n)
            old = out.get(m)
            c = _mulmod(ca, cb, p)
            if old is not None:
                c = (c + <long long>old) % p
            if c:
                out[m] = c
            elif old is not None:
                del out[m]
    return out


def normal_form(dict terms, list lms, list tails, object negkey, long long p):
    cdef Py_ssize_t nred = len(lms)
    cdef Py_ssize_t nv = 0
    cdef Py_ssize_t i, j, found
    cdef long long c, tc, v
    cdef long long *L = NULL
    cdef long long *mv = NULL
    cdef tuple m, q, t, mm, lm
    cdef dict work = dict(terms)
    cdef dict rem = {}
    cdef list heap
    if work:
        nv = len(next(iter(work)))
    elif nred:
        nv = len(lms[0])
    L = <long long *>malloc((nred * nv + 1) * sizeof(long long))
    mv = <long long *>malloc((nv + 1) * sizeof(long long))
    try:
        for i in range(nred):
            lm = lms[i]
            for j in range(nv):
                L[i * nv + j] = lm[j]
        heap = [(negkey(m), m) for m in work]
        heapify(heap)
        while heap:
            m = heappop(heap)[1]
            oc = work.pop(m, None)
            if oc is None:
                continue
            c = oc
            for j in range(nv):
                mv[j] = m[j]
            found = -1
            for i in range(nred):
                for j in range(nv):
                    if L[i * nv + j] > mv[j]:
                        break
                else:
                    found = i
                    break
            if found < 0:
                rem[m] = c
                continue
            q = PyTuple_New(nv)
            for j in range(nv):
                ov = mv[j] - L[found * nv + j]
                Py_INCREF(ov)
                PyTuple_SET_ITEM(q, j, ov)
            for t, otc in tails[found]:
                tc = otc
                mm = _add_exps(t, q, nv)
                old = work.get(mm)
                if old is None:
                    work[mm] = (p - _mulmod(c, tc, p)) % p
                    heappush(heap, (negkey(mm), mm))
                else:
                    v = (<long long>old + p - _mulmod(c, tc, p)) % p
                    if v:
                        work[mm] = v
                    else:
                        del work[mm]
    finally:
        free(L)
        free(mv)
    return rem


def rref(mat, long long p):
    a_np = np.array(mat, dtype=np.int64) % p
    if a_np.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    a_np = np.ascontiguousarray(a_np)
    cdef long long[:, ::1] a = a_np
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t r = 0, col, k, i, j
    cdef long long inv, f, tmp
    pivots = []
    for col in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, col] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = tmp
        inv = pow(int(a[r, col]), -1, int(p))
        for j in range(col, cols):
            a[r, j] = _mulmod(a[r, j], inv, p)
        for i in range(rows):
            if i == r:
                continue
            f = a[i, col]
            if f == 0:
                continue
            for j in range(col, cols):
                if a[r, j]:
                    a[i, j] = (a[i, j] + p - _mulmod(f, a[r, j], p)) % p
        pivots.append(col)
        r += 1
    return a_np, pivots
