"""Pure-Python kernels: the reference path and the import-time fallback.

Polynomials travel through these functions as plain ``dict`` objects mapping
exponent tuples to coefficients in ``[0, p)``.  Reducers are monic and passed
as parallel lists of leading exponents and tails.
"""

from heapq import heapify, heappop, heappush
from operator import add, le, sub

import numpy as np


def mul_terms(a, b, p):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(map(add, ma, mb))
            c = (get(m, 0) + ca * cb) % p
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def normal_form(terms, lms, tails, negkey, p):
    """Fully reduce ``terms`` by the monic reducers ``(lms[i], tails[i])``.

    Returns the remainder with keys in descending monomial order.
    """
    work = dict(terms)
    heap = [(negkey(m), m) for m in work]
    heapify(heap)
    rem = {}
    nred = len(lms)
    while heap:
        m = heappop(heap)[1]
        c = work.pop(m, 0)
        if not c:
            continue
        for i in range(nred):
            lm = lms[i]
            if all(map(le, lm, m)):
                break
        else:
            rem[m] = c
            continue
        q = tuple(map(sub, m, lm))
        for t, tc in tails[i]:
            mm = tuple(map(add, t, q))
            old = work.get(mm)
            if old is None:
                work[mm] = (-c * tc) % p
                heappush(heap, (negkey(mm), mm))
            else:
                v = (old - c * tc) % p
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return rem


def rref(mat, p):
    """Reduced row echelon form mod ``p``; returns ``(matrix, pivot_columns)``."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = (a[r] * inv) % p
        f = a[:, col].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(f[nzr], a[r]) % p) % p
        pivots.append(col)
        r += 1
    return a, pivots
