"""Kernel backend selection.

At import time the compiled Cython core is preferred; if it is not
built, the pure numpy implementation is used. ``select()`` switches
backends explicitly (used by the benchmark and the parity tests).
"""

from . import pure as _pure

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

_impl = _compiled if _compiled is not None else _pure


def available():
    """Names of the backends importable in this environment."""
    names = ["pure"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def current():
    return _impl.BACKEND_NAME


def select(name):
    """Switch the active backend ('pure' or 'compiled')."""
    global _impl
    if name == "pure":
        _impl = _pure
    elif name == "compiled":
        if _compiled is None:
            raise ValueError("compiled kernel backend is not available")
        _impl = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
    return _impl


def get_backend(name):
    """Return a backend module by name without switching the default."""
    if name == "pure":
        return _pure
    if name == "compiled":
        if _compiled is None:
            raise ValueError("compiled kernel backend is not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def poly_eval(coeffs, x):
    return _impl.poly_eval(coeffs, x)


def nl_eval(coefs, exps, offsets, v):
    return _impl.nl_eval(coefs, exps, offsets, v)


def nl_jac(coefs, exps, offsets, v):
    return _impl.nl_jac(coefs, exps, offsets, v)


def phi_eval(L, s, lam, v, coefs, exps, offsets):
    return _impl.phi_eval(L, s, lam, v, coefs, exps, offsets)


def phi_jac(L, s, lam, v, coefs, exps, offsets):
    return _impl.phi_jac(L, s, lam, v, coefs, exps, offsets)


def newton_correct(L, coefs, exps, offsets, x0, cnormal, cvalue, tol, max_iter):
    return _impl.newton_correct(L, coefs, exps, offsets, x0, cnormal, cvalue, tol, max_iter)
