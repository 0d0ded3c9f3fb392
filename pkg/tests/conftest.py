"""Shared corpus generators for the tests.

Random matrices with known exact spectra are built as S D S^-1 where D
is an integer diagonal and S a product of integer shear matrices;
shears are unimodular with exact integer inverses, so the conjugation
is exact in floating point at desk scale.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))


def random_shear_conjugation(rng, k, n_shears=None):
    """(S, S_inv) as exact integer matrices with S @ S_inv = I."""
    n_shears = 2 * k if n_shears is None else n_shears
    S = np.eye(k, dtype=np.int64)
    S_inv = np.eye(k, dtype=np.int64)
    for _ in range(n_shears):
        i, j = rng.choice(k, size=2, replace=False)
        c = int(rng.choice([-1, 1]))
        E = np.eye(k, dtype=np.int64)
        E[i, j] = c
        E_inv = np.eye(k, dtype=np.int64)
        E_inv[i, j] = -c
        S = S @ E
        S_inv = E_inv @ S_inv
    return S, S_inv


def random_simple_spectrum_matrix(rng, k, low=-5, high=5):
    """Integer matrix with distinct integer eigenvalues in [low, high]."""
    eigs = rng.choice(np.arange(low, high + 1), size=k, replace=False)
    S, S_inv = random_shear_conjugation(rng, k)
    A = S @ np.diag(eigs.astype(np.int64)) @ S_inv
    return A.astype(float), np.sort(eigs.astype(float))


def simple_spectrum_corpus(seed, count, kmin=2, kmax=6):
    """Deterministic corpus of (matrix, sorted eigenvalues) pairs."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(kmin, kmax + 1))
        out.append(random_simple_spectrum_matrix(rng, k))
    return out
