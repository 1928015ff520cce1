"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np

from . import kernels


def as_matrix(a, p: int) -> np.ndarray:
    return np.array(a, dtype=np.int64) % p


def matmul(a, b, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1] if a.ndim else 1
    if p < 2**20 and inner < 2**22:
        return (a @ b) % p
    return np.array((a.astype(object) @ b.astype(object)) % p, dtype=np.int64)


def rref(a, p: int):
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return a.reshape(a.shape) % p, []
    return kernels.rref(a, p)


def rank(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Rows form a basis of ``{x : a @ x = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-r[i, fc]) % p
    return basis


def solve(a, b, p: int):
    """One solution of ``a @ x = b`` or ``None``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    ncols = a.shape[1]
    aug = np.hstack([a % p, b % p])
    r, piv = rref(aug, p)
    if ncols in piv:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = r[i, ncols]
    return x


def row_basis(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0)
    r, piv = rref(a, p)
    return r[: len(piv)]


def complement_projection(rel, n: int, p: int):
    """Projection onto ``F_p^n / rowspan(rel)``.

    Returns ``(Q, S)``: ``Q`` (q×n) has kernel exactly ``rowspan(rel)`` and
    ``S`` (n×q) is a section with ``Q @ S = I``.
    """
    rel = np.asarray(rel, dtype=np.int64)
    rel = rel.reshape(-1, n) if n else np.zeros((0, 0), dtype=np.int64)
    if rel.shape[0] and n:
        r, piv = rref(rel, p)
        r = r[: len(piv)]
    else:
        r, piv = np.zeros((0, n), dtype=np.int64), []
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    q = len(free)
    Q = np.zeros((q, n), dtype=np.int64)
    S = np.zeros((n, q), dtype=np.int64)
    for k, fc in enumerate(free):
        Q[k, fc] = 1
        S[fc, k] = 1
    # a pivot coordinate e_pc ≡ -sum_{free} r[i, fc] e_fc modulo the relations
    for i, pc in enumerate(piv):
        for k, fc in enumerate(free):
            Q[k, pc] = (-r[i, fc]) % p
    return Q, S
