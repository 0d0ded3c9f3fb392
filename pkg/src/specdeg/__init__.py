"""Topological degrees of classical eigenvalue problems on the unit
sphere, and continuation of solution branches of the perturbed problem
L v + s N(v) = lambda v on R x R x S^(k-1)."""

__version__ = "0.1.0"

from . import _kernels, examples, linalg, perturbed, poly, spectral  # noqa: F401
