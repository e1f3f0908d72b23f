"""Exact linear algebra over any field whose scalars support + - * / and ``== 0``.

Matrices are numpy object arrays (or nested lists); entries are typically
:class:`~exotic_codes.cyclo.CycloScalar` or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import numpy as np

__all__ = ["bareiss", "rref", "kernel", "rank", "matmul", "is_zero_matrix"]


def _is_zero(x) -> bool:
    return x == 0


def bareiss(A):
    """Fraction-free row echelon form by Bareiss elimination.

    Returns ``(E, pivots)`` with ``E`` a new object array.  Each division is
    exact (by the previous pivot), so coefficient growth stays polynomial.
    """
    E = np.array(A, dtype=object, copy=True)
    rows, cols = E.shape
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if not _is_zero(E[i, c])), None)
        if p is None:
            continue
        if p != r:
            E[[r, p]] = E[[p, r]]
        piv = E[r, c]
        for i in range(r + 1, rows):
            lead = E[i, c]
            for k in range(c + 1, cols):
                E[i, k] = (piv * E[i, k] - lead * E[r, k]) / prev
            E[i, c] = 0 * piv
        # entries left of the pivot column in rows below are already zero
        prev = piv
        pivots.append(c)
        r += 1
    return E, pivots


def rref(A):
    """Reduced row echelon form and pivot columns."""
    E, pivots = bareiss(A)
    for r, c in enumerate(pivots):
        inv = 1 / E[r, c]
        E[r] = [x * inv for x in E[r]]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        for i in range(r):
            f = E[i, c]
            if not _is_zero(f):
                E[i] = [a - f * b for a, b in zip(E[i], E[r])]
    return E[: len(pivots)], pivots


def rank(A) -> int:
    return len(bareiss(A)[1])


def kernel(A, zero=None, one=None):
    """Basis of the right null space, one vector per row of the result.

    The basis is returned in reduced echelon form (as a row space), so it is
    canonical for the subspace in the given coordinate order.
    """
    A = np.asarray(A, dtype=object)
    rows, cols = A.shape
    sample = A.flat[0] if A.size else 0
    zero = 0 * sample if zero is None else zero
    one = zero + 1 if one is None else one
    R, pivots = rref(A) if rows else (np.empty((0, cols), dtype=object), [])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -R[r, f]
        basis.append(v)
    if not basis:
        return np.empty((0, cols), dtype=object)
    K, _ = rref(np.array(basis, dtype=object))
    return K


def matmul(A, B):
    """Object-array product without numpy's ``dot`` start value of int 0."""
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    return A.dot(B)


def is_zero_matrix(A) -> bool:
    return all(_is_zero(x) for x in np.asarray(A, dtype=object).flat)
