"""Haar orthogonal matrices, truncations and their products.

Each realization draws from its own Philox stream, addressed by the master
seed and the realization index, so the result of realization ``i`` does not
depend on how realizations are split among workers.
"""
from __future__ import annotations

import numpy as np

from ..correlation import EnsembleSpec

__all__ = ["stream", "haar_orthogonal", "truncated_block", "sample_product"]


def stream(master_seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for realization ``index``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def _q_factor(Z: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Z, mode="reduced")
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    # fixing the signs of diag(R) makes Q exactly Haar distributed
    return Q * d[None, :]


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` orthogonal matrix."""
    if n < 1:
        raise ValueError("n must be positive")
    return _q_factor(rng.standard_normal((n, n)))


def truncated_block(N: int, L: int, rng: np.random.Generator) -> np.ndarray:
    """Leading ``N x N`` block of a Haar matrix of size ``L + N``.

    Only the first ``N`` columns are generated: they are the sign-corrected
    Q factor of an ``(L+N) x N`` Gaussian matrix.
    """
    return _q_factor(rng.standard_normal((L + N, N)))[:N, :N]


def sample_product(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """``X_1 X_2 ... X_m`` with independent truncations ``X_i``."""
    P = truncated_block(spec.N, spec.Ls[0], rng)
    for L in spec.Ls[1:]:
        P = P @ truncated_block(spec.N, L, rng)
    return P
