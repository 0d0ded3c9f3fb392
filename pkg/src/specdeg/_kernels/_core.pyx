# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the hot numerical kernels.

Mirrors the API of ``specdeg._kernels.pure`` (see that module for the
canonical-form conventions of nonlinear maps).
"""

import numpy as np

from libc.math cimport fabs, sqrt

BACKEND_NAME = "compiled"


def poly_eval(coeffs, double x):
    cdef double[::1] cs = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(cs.shape[0] - 1, -1, -1):
        acc = acc * x + cs[i]
    return acc


cdef double _ipow(double base, long e) noexcept:
    cdef double r = 1.0
    cdef long i
    for i in range(e):
        r *= base
    return r


cdef void _nl_eval_c(double[::1] coefs, long[:, ::1] exps, long[::1] offsets,
                     double[::1] v, double[::1] out) noexcept:
    cdef Py_ssize_t k = offsets.shape[0] - 1
    cdef Py_ssize_t i, t, j
    cdef double term
    for i in range(k):
        out[i] = 0.0
        for t in range(offsets[i], offsets[i + 1]):
            term = coefs[t]
            for j in range(k):
                term *= _ipow(v[j], exps[t, j])
            out[i] += term


cdef void _nl_jac_c(double[::1] coefs, long[:, ::1] exps, long[::1] offsets,
                    double[::1] v, double[:, ::1] out) noexcept:
    cdef Py_ssize_t k = offsets.shape[0] - 1
    cdef Py_ssize_t i, t, j, l
    cdef double term
    cdef long e
    for i in range(k):
        for j in range(k):
            out[i, j] = 0.0
        for t in range(offsets[i], offsets[i + 1]):
            for j in range(k):
                e = exps[t, j]
                if e == 0:
                    continue
                term = coefs[t] * e * _ipow(v[j], e - 1)
                for l in range(k):
                    if l != j:
                        term *= _ipow(v[l], exps[t, l])
                out[i, j] += term


def nl_eval(coefs, exps, offsets, v):
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef long[::1] o = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    out = np.zeros(o.shape[0] - 1)
    cdef double[::1] om = out
    if c.shape[0] > 0:
        _nl_eval_c(c, e, o, vv, om)
    else:
        _zero_eval(o, vv, om)
    return out


cdef void _zero_eval(long[::1] o, double[::1] v, double[::1] out) noexcept:
    cdef Py_ssize_t i
    for i in range(out.shape[0]):
        out[i] = 0.0


def nl_jac(coefs, exps, offsets, v):
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef long[::1] o = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t k = o.shape[0] - 1
    out = np.zeros((k, k))
    cdef double[:, ::1] om = out
    if c.shape[0] > 0:
        _nl_jac_c(c, e, o, vv, om)
    return out


cdef void _phi_eval_c(double[:, ::1] L, double s, double lam, double[::1] v,
                      double[::1] coefs, long[:, ::1] exps, long[::1] offsets,
                      double[::1] work, double[::1] out) noexcept:
    cdef Py_ssize_t k = L.shape[0]
    cdef Py_ssize_t i, j
    if coefs.shape[0] > 0:
        _nl_eval_c(coefs, exps, offsets, v, work)
    else:
        for i in range(k):
            work[i] = 0.0
    for i in range(k):
        out[i] = s * work[i] - lam * v[i]
        for j in range(k):
            out[i] += L[i, j] * v[j]


def phi_eval(L, double s, double lam, v, coefs, exps, offsets):
    cdef double[:, ::1] Lm = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef long[::1] o = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t k = Lm.shape[0]
    out = np.empty(k)
    work = np.empty(k)
    _phi_eval_c(Lm, s, lam, vv, c, e, o, work, out)
    return out


cdef void _phi_jac_c(double[:, ::1] L, double s, double lam, double[::1] v,
                     double[::1] coefs, long[:, ::1] exps, long[::1] offsets,
                     double[::1] nval, double[:, ::1] njac,
                     double[:, ::1] out) noexcept:
    cdef Py_ssize_t k = L.shape[0]
    cdef Py_ssize_t i, j
    if coefs.shape[0] > 0:
        _nl_eval_c(coefs, exps, offsets, v, nval)
        _nl_jac_c(coefs, exps, offsets, v, njac)
    else:
        for i in range(k):
            nval[i] = 0.0
            for j in range(k):
                njac[i, j] = 0.0
    for i in range(k):
        out[i, 0] = nval[i]
        out[i, 1] = -v[i]
        for j in range(k):
            out[i, j + 2] = L[i, j] + s * njac[i, j]
        out[i, i + 2] -= lam


def phi_jac(L, double s, double lam, v, coefs, exps, offsets):
    cdef double[:, ::1] Lm = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef long[::1] o = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t k = Lm.shape[0]
    out = np.empty((k, k + 2))
    nval = np.empty(k)
    njac = np.empty((k, k))
    _phi_jac_c(Lm, s, lam, vv, c, e, o, nval, njac, out)
    return out


cdef int _lu_solve(double[:, ::1] A, double[::1] b, Py_ssize_t n,
                   long[::1] piv) noexcept:
    """In-place LU with partial pivoting; solution left in b. 0 on success."""
    cdef Py_ssize_t i, j, p, col
    cdef double amax, tmp, factor
    for col in range(n):
        p = col
        amax = fabs(A[col, col])
        for i in range(col + 1, n):
            if fabs(A[i, col]) > amax:
                amax = fabs(A[i, col])
                p = i
        if amax == 0.0:
            return 1
        if p != col:
            for j in range(n):
                tmp = A[col, j]; A[col, j] = A[p, j]; A[p, j] = tmp
            tmp = b[col]; b[col] = b[p]; b[p] = tmp
        for i in range(col + 1, n):
            factor = A[i, col] / A[col, col]
            if factor != 0.0:
                for j in range(col + 1, n):
                    A[i, j] -= factor * A[col, j]
                b[i] -= factor * b[col]
            A[i, col] = 0.0
    for col in range(n - 1, -1, -1):
        tmp = b[col]
        for j in range(col + 1, n):
            tmp -= A[col, j] * b[j]
        b[col] = tmp / A[col, col]
    return 0


cdef double _aug_residual(double[:, ::1] L, double[::1] coefs, long[:, ::1] exps,
                          long[::1] offsets, double[::1] x, double[::1] cn,
                          double cval, double[::1] work, double[::1] r) noexcept:
    cdef Py_ssize_t k = L.shape[0]
    cdef Py_ssize_t n = k + 2
    cdef Py_ssize_t i
    cdef double acc, nrm
    _phi_eval_c(L, x[0], x[1], x[2:], coefs, exps, offsets, work, r[:k])
    acc = -1.0
    for i in range(k):
        acc += x[2 + i] * x[2 + i]
    r[k] = acc
    acc = -cval
    for i in range(n):
        acc += cn[i] * x[i]
    r[k + 1] = acc
    nrm = 0.0
    for i in range(n):
        nrm += r[i] * r[i]
    return sqrt(nrm)


def newton_correct(L, coefs, exps, offsets, x0, cnormal, double cvalue,
                   double tol, max_iter):
    cdef double[:, ::1] Lm = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(coefs, dtype=np.float64)
    cdef long[:, ::1] e = np.ascontiguousarray(exps, dtype=np.int64)
    cdef long[::1] o = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef double[::1] cn = np.ascontiguousarray(cnormal, dtype=np.float64)
    cdef Py_ssize_t k = Lm.shape[0]
    cdef Py_ssize_t n = k + 2
    cdef Py_ssize_t i, j

    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    xn_arr = np.empty(n)
    cdef double[::1] xn = xn_arr
    cdef double[::1] f = np.empty(n)
    cdef double[::1] fn = np.empty(n)
    cdef double[::1] dx = np.empty(n)
    cdef double[::1] work = np.empty(k)
    cdef double[:, ::1] J = np.empty((n, n))
    cdef double[:, ::1] nljac = np.empty((k, k))
    cdef double[::1] nlval = np.empty(k)
    cdef long[::1] piv = np.empty(n, dtype=np.int64)

    cdef double scale = 1.0
    for i in range(k):
        for j in range(k):
            scale += Lm[i, j] * Lm[i, j]
    scale = 1.0 + sqrt(scale - 1.0)

    cdef double fnorm = _aug_residual(Lm, c, e, o, x, cn, cvalue, work, f)
    cdef double fnn, alpha
    cdef int it, ls, accepted, maxit = int(max_iter)
    for it in range(maxit):
        if fnorm <= tol * scale:
            return x_arr, True, it, fnorm
        _phi_jac_c(Lm, x[0], x[1], x[2:], c, e, o, nlval, nljac, J[:k, :])
        for j in range(n):
            J[k, j] = 0.0
            J[k + 1, j] = cn[j]
        for j in range(k):
            J[k, j + 2] = 2.0 * x[j + 2]
        for i in range(n):
            dx[i] = -f[i]
        if _lu_solve(J, dx, n, piv) != 0:
            return x_arr, False, it, fnorm
        for i in range(n):
            if dx[i] != dx[i]:  # NaN
                return x_arr, False, it, fnorm
        alpha = 1.0
        accepted = 0
        for ls in range(30):
            for i in range(n):
                xn[i] = x[i] + alpha * dx[i]
            fnn = _aug_residual(Lm, c, e, o, xn, cn, cvalue, work, fn)
            if fnn < fnorm or fnn <= tol * scale:
                for i in range(n):
                    x[i] = xn[i]
                    f[i] = fn[i]
                fnorm = fnn
                accepted = 1
                break
            alpha *= 0.5
        if not accepted:
            return x_arr, False, it + 1, fnorm
    return x_arr, fnorm <= tol * scale, maxit, fnorm
