"""Independent oracles used by the tests.

Everything here is deliberately implemented by a different method than
the library: the characteristic polynomial by exact integer Leibniz
expansion, Jacobians by central finite differences.
"""

import itertools

import numpy as np


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def char_poly_exact(A):
    """Ascending integer coefficients of det(A - x I), exact Leibniz sum.

    A must have integer entries; works in Python integers throughout.
    """
    M = [[int(x) for x in row] for row in np.asarray(A)]
    k = len(M)
    total = [0] * (k + 1)
    for perm in itertools.permutations(range(k)):
        term = [_perm_sign(perm)]
        for i in range(k):
            entry = [M[i][perm[i]], -1] if perm[i] == i else [M[i][perm[i]]]
            term = _poly_mul(term, entry)
        for d, c in enumerate(term):
            total[d] += c
    return total


def fd_jacobian(f, x, h=1e-6):
    """Central finite-difference Jacobian of f at x, columns over x."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h))
    return np.column_stack(cols)
