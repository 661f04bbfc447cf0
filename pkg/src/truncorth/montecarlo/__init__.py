"""Monte Carlo sampling of products of truncated Haar orthogonal matrices."""
from .eigen import SolverError, SpectrumSample, real_schur_spectrum, schur_eigenvalues
from .runner import (
    CountEstimate,
    Histogram,
    RunConfig,
    RunResult,
    anderson_darling_normal,
    default_workers,
    estimate_densities,
    estimate_real_count_distribution,
    run,
    tv_distance,
    write_outputs,
)
from .sampling import haar_orthogonal, sample_product, stream, truncated_block

__all__ = [
    "SolverError",
    "SpectrumSample",
    "real_schur_spectrum",
    "schur_eigenvalues",
    "CountEstimate",
    "Histogram",
    "RunConfig",
    "RunResult",
    "anderson_darling_normal",
    "default_workers",
    "estimate_densities",
    "estimate_real_count_distribution",
    "run",
    "tv_distance",
    "write_outputs",
    "haar_orthogonal",
    "sample_product",
    "stream",
    "truncated_block",
]
