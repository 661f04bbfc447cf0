"""Real eigenvalues of products of truncated Haar orthogonal matrices.

Exact probabilities and expectations in Q[pi^(+-1/2)], numerical densities
for any truncations, large-N laws and a Monte Carlo engine.
"""
from .correlation import (
    EnsembleSpec,
    ParityError,
    expected_reals_exact,
    generating_function,
    pnn_product,
    prob_k_real,
)
from .exact import PiLaurent, to_float
from .meijer import UnsupportedExact
from .quadrature import AccuracyError

__all__ = [
    "EnsembleSpec",
    "PiLaurent",
    "ParityError",
    "UnsupportedExact",
    "AccuracyError",
    "generating_function",
    "prob_k_real",
    "expected_reals_exact",
    "pnn_product",
    "to_float",
]
