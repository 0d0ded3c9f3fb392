"""Pure numpy implementation of the hot numerical kernels.

The compiled Cython module ``specdeg._kernels._core`` mirrors this API
exactly; either one can back the package (see ``specdeg._kernels``).

Nonlinear maps are passed in a flat canonical form: per output
component ``i`` the terms with indices ``offsets[i] .. offsets[i+1]``
contribute ``coefs[t] * prod_j v[j] ** exps[t, j]``.
"""

import numpy as np

BACKEND_NAME = "pure"


def poly_eval(coeffs, x):
    """Horner evaluation of a polynomial given ascending coefficients."""
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * x + float(c)
    return acc


def nl_eval(coefs, exps, offsets, v):
    k = len(offsets) - 1
    out = np.zeros(k)
    if len(coefs) == 0:
        return out
    terms = coefs * np.prod(np.asarray(v)[None, :] ** exps, axis=1)
    for i in range(k):
        out[i] = terms[offsets[i]:offsets[i + 1]].sum()
    return out


def nl_jac(coefs, exps, offsets, v):
    k = len(offsets) - 1
    out = np.zeros((k, k))
    if len(coefs) == 0:
        return out
    v = np.asarray(v, dtype=float)
    powers = v[None, :] ** exps  # (nterms, k)
    for j in range(k):
        e = exps[:, j]
        # d/dv_j of v_j**e is e * v_j**(e-1); 0**0 == 1 covers v_j == 0, e == 1
        dj = np.where(e > 0, e * v[j] ** np.maximum(e - 1, 0), 0.0)
        rest = np.prod(np.delete(powers, j, axis=1), axis=1) if k > 1 else 1.0
        terms = coefs * dj * rest
        for i in range(k):
            out[i, j] = terms[offsets[i]:offsets[i + 1]].sum()
    return out


def phi_eval(L, s, lam, v, coefs, exps, offsets):
    v = np.asarray(v, dtype=float)
    return L @ v - lam * v + s * nl_eval(coefs, exps, offsets, v)


def phi_jac(L, s, lam, v, coefs, exps, offsets):
    """Jacobian of phi over (s, lambda, v); shape (k, k+2)."""
    k = L.shape[0]
    v = np.asarray(v, dtype=float)
    J = np.empty((k, k + 2))
    J[:, 0] = nl_eval(coefs, exps, offsets, v)
    J[:, 1] = -v
    J[:, 2:] = L - lam * np.eye(k) + s * nl_jac(coefs, exps, offsets, v)
    return J


def _augmented_residual(L, coefs, exps, offsets, x, cnormal, cvalue):
    s, lam, v = x[0], x[1], x[2:]
    r = np.empty(len(x))
    r[:-2] = phi_eval(L, s, lam, v, coefs, exps, offsets)
    r[-2] = v @ v - 1.0
    r[-1] = cnormal @ x - cvalue
    return r


def _augmented_jacobian(L, coefs, exps, offsets, x, cnormal):
    k = L.shape[0]
    s, lam, v = x[0], x[1], x[2:]
    J = np.zeros((k + 2, k + 2))
    J[:k, :] = phi_jac(L, s, lam, v, coefs, exps, offsets)
    J[k, 2:] = 2.0 * v
    J[k + 1, :] = cnormal
    return J


def newton_correct(L, coefs, exps, offsets, x0, cnormal, cvalue, tol, max_iter):
    """Damped Newton for {phi = 0, <v,v> = 1, affine constraint = 0}.

    Returns (x, converged, iterations, residual_norm). Convergence is
    ``||F|| <= tol * (1 + ||L||_F)``.
    """
    x = np.array(x0, dtype=float)
    scale = 1.0 + float(np.linalg.norm(L))
    f = _augmented_residual(L, coefs, exps, offsets, x, cnormal, cvalue)
    fnorm = float(np.linalg.norm(f))
    for it in range(int(max_iter)):
        if fnorm <= tol * scale:
            return x, True, it, fnorm
        J = _augmented_jacobian(L, coefs, exps, offsets, x, cnormal)
        try:
            dx = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            return x, False, it, fnorm
        if not np.all(np.isfinite(dx)):
            return x, False, it, fnorm
        alpha = 1.0
        accepted = False
        for _ in range(30):
            xn = x + alpha * dx
            fn = _augmented_residual(L, coefs, exps, offsets, xn, cnormal, cvalue)
            fnn = float(np.linalg.norm(fn))
            if fnn < fnorm or fnn <= tol * scale:
                x, f, fnorm = xn, fn, fnn
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            return x, False, it + 1, fnorm
    return x, fnorm <= tol * scale, int(max_iter), fnorm
