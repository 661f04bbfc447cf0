"""Monte Carlo runs: sampling in a worker pool, estimators and output files."""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from threadpoolctl import threadpool_limits

from ..asymptotics import VARIANCE_RATIO, conj_real_density, law_cdf
from ..correlation import EnsembleSpec
from .eigen import real_schur_spectrum
from .sampling import sample_product, stream

__all__ = [
    "WORKERS_ENV",
    "default_workers",
    "RunConfig",
    "RunResult",
    "CountEstimate",
    "Histogram",
    "run",
    "estimate_real_count_distribution",
    "estimate_densities",
    "tv_distance",
    "anderson_darling_normal",
    "write_outputs",
]

WORKERS_ENV = "TRUNCORTH_WORKERS"


def default_workers() -> int:
    """Worker count from the environment (default 1)."""
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RunConfig:
    """What to simulate and how.

    ``(spec, realizations, seed)`` fixes every output; ``workers`` only
    changes the wall time.
    """

    spec: EnsembleSpec
    realizations: int
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    bins: Union[str, int] = "fd"
    scatter_realizations: int = 1

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if self.workers < 1:
            raise ValueError("need at least one worker")


@dataclass
class RunResult:
    config: RunConfig
    counts: np.ndarray  # real count of each realization, in index order
    reals: np.ndarray
    moduli: np.ndarray  # |lambda| of every eigenvalue, conjugates included
    scatter: np.ndarray  # rows (index, re, im)
    max_modulus: float
    elapsed: float


def _chunk(args) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]:
    spec, seed, start, stop, scatter_upto = args
    counts = np.empty(stop - start, dtype=np.int64)
    reals: List[np.ndarray] = []
    moduli: List[np.ndarray] = []
    scatter: List[np.ndarray] = []
    top = 0.0
    with threadpool_limits(limits=1):
        for i in range(start, stop):
            A = sample_product(spec, stream(seed, i))
            s = real_schur_spectrum(A, index=i, seed=(seed, i))
            counts[i - start] = s.real_count
            reals.append(s.reals)
            ev = s.eigenvalues()
            mod = np.abs(ev)
            moduli.append(mod)
            if mod.size:
                top = max(top, float(mod.max()))
            if i < scatter_upto:
                scatter.append(np.column_stack([np.full(ev.size, i), ev.real, ev.imag]))
    cat = lambda xs, w: np.concatenate(xs) if xs else np.empty((0,) * w if w > 1 else 0)  # noqa: E731
    return (
        counts,
        cat(reals, 1),
        cat(moduli, 1),
        np.concatenate(scatter) if scatter else np.empty((0, 3)),
        top,
    )


def run(config: RunConfig) -> RunResult:
    """Simulate ``config.realizations`` products; results are in index order."""
    n = config.realizations
    per = max(1, math.ceil(n / (4 * config.workers)))
    jobs = [
        (config.spec, config.seed, a, min(a + per, n), config.scatter_realizations)
        for a in range(0, n, per)
    ]
    t0 = time.perf_counter()
    if config.workers == 1:
        parts = [_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_chunk, jobs))
    elapsed = time.perf_counter() - t0
    return RunResult(
        config,
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
        np.concatenate([p[3] for p in parts]),
        max(p[4] for p in parts),
        elapsed,
    )


# -- estimators ---------------------------------------------------------------------------


@dataclass
class CountEstimate:
    """Empirical law of the number of real eigenvalues."""

    N: int
    realizations: int
    frequencies: Dict[int, float]
    stderr: Dict[int, float]
    mean: float
    variance: float
    mean_stderr: float
    standardized: np.ndarray

    @property
    def ratio(self) -> float:
        """Variance over mean; tends to 2 - sqrt(2) in the conjectured CLT."""
        return self.variance / self.mean if self.mean else math.nan

    def within(self, k: int, p: float, sigmas: float = 3.0) -> bool:
        """Is ``p`` inside the binomial interval of ``frequencies[k]``?"""
        se = math.sqrt(p * (1 - p) / self.realizations)
        return abs(self.frequencies.get(k, 0.0) - p) <= sigmas * se


def _counts_of(source) -> Tuple[np.ndarray, int]:
    if isinstance(source, RunResult):
        return source.counts, source.config.spec.N
    return run(source).counts, source.spec.N


def estimate_real_count_distribution(source: Union[RunConfig, RunResult]) -> CountEstimate:
    """Frequencies of each real count with binomial standard errors."""
    counts, N = _counts_of(source)
    n = counts.size
    freq, se = {}, {}
    tally = np.bincount(counts, minlength=N + 1)
    for k in range(N % 2, N + 1, 2):
        p = tally[k] / n
        freq[k] = float(p)
        se[k] = math.sqrt(p * (1 - p) / n)
    mean = float(counts.mean())
    var = float(counts.var(ddof=1)) if n > 1 else 0.0
    scale = math.sqrt(VARIANCE_RATIO * mean) if mean > 0 else 1.0
    return CountEstimate(
        N, n, freq, se, mean, var, math.sqrt(var / n) if n else math.nan, (counts - mean) / scale
    )


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    law_mass: Optional[np.ndarray] = None
    law_density: Optional[np.ndarray] = None

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def density(self) -> np.ndarray:
        width = np.diff(self.edges)
        if self.total == 0:
            return np.zeros_like(width)
        return self.counts / (self.total * width)

    @property
    def tv(self) -> float:
        if self.law_mass is None or self.total == 0:
            return math.nan
        return tv_distance(self.counts, self.law_mass)


def tv_distance(counts: np.ndarray, law_mass: np.ndarray) -> float:
    """Half the L1 distance between binned frequencies and law masses.

    Law mass that falls outside every bin counts fully toward the distance.
    """
    p = counts / counts.sum()
    outside = max(0.0, 1.0 - float(law_mass.sum()))
    return 0.5 * (float(np.abs(p - law_mass).sum()) + outside)


def _edges(data: np.ndarray, bins, lo: float, hi: float) -> np.ndarray:
    if data.size < 2 or np.ptp(data) == 0:
        return np.array([lo, hi])
    return np.histogram_bin_edges(data, bins=bins)


def _law_params(spec: EnsembleSpec):
    if len(set(spec.Ls)) != 1:
        return None
    return spec.N / (spec.N + spec.Ls[0]), spec.m


def estimate_densities(source: Union[RunConfig, RunResult]) -> Dict[str, object]:
    """Histograms of real eigenvalues and of all moduli, with law companions.

    For equal truncations the real histogram is paired with the
    conjectured normalised real density and the modulus histogram with
    the global complex law; both are also bin-integrated for the
    total-variation distance.
    """
    result = source if isinstance(source, RunResult) else run(source)
    spec = result.config.spec
    bins = result.config.bins
    params = _law_params(spec)

    e = _edges(result.reals, bins, -1.0, 1.0)
    real_hist = Histogram(e, np.histogram(result.reals, bins=e)[0])
    e = _edges(result.moduli, bins, 0.0, 1.0)
    mod_hist = Histogram(e, np.histogram(result.moduli, bins=e)[0])
    if params is not None:
        alpha, m = params
        x = real_hist.edges
        real_hist.law_mass = np.diff(law_cdf("conj1", x, alpha, m))
        real_hist.law_density = conj_real_density(0.5 * (x[1:] + x[:-1]), alpha, m)
        r = mod_hist.edges
        mod_hist.law_mass = np.diff(law_cdf("modulus", r, alpha, m))
        c = 0.5 * (r[1:] + r[:-1])
        q = c ** (2.0 / m)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (1 - alpha) / alpha * (2.0 / m) * c ** (2.0 / m - 1) / (1 - q) ** 2
        mod_hist.law_density = np.where(q < alpha, dens, 0.0)
    return {"reals": real_hist, "modulus": mod_hist, "scatter": result.scatter}


def anderson_darling_normal(z: np.ndarray) -> Tuple[float, float]:
    """Anderson-Darling statistic against N(0, 1) with known parameters.

    Returns
    -------
    A2, pvalue : float
        The p-value uses the Marsaglia (2004) approximation of the
        limiting distribution.
    """
    from scipy.special import ndtr

    z = np.sort(np.asarray(z, dtype=float))
    n = z.size
    F = np.clip(ndtr(z), 1e-300, 1 - 1e-16)
    i = np.arange(1, n + 1)
    A2 = -n - np.mean((2 * i - 1) * (np.log(F) + np.log1p(-F[::-1])))
    return float(A2), 1.0 - _adinf(float(A2))


def _adinf(x: float) -> float:
    if x <= 0:
        return 0.0
    if x < 2.0:
        return (
            math.exp(-1.2337141 / x)
            / math.sqrt(x)
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * x) * x) * x) * x) * x)
        )
    return math.exp(
        -math.exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * x) * x) * x) * x) * x)
    )


# -- files -----------------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return "nan" if v is None or not np.isfinite(v) else f"{v:.12g}"


def _write_hist(path: Path, h: Histogram, first: str):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow([f"{first}_left", f"{first}_right", "count", "density", "law_density", "law_mass"])
        dens = h.density
        for b in range(h.counts.size):
            ld = h.law_density[b] if h.law_density is not None else math.nan
            lm = h.law_mass[b] if h.law_mass is not None else math.nan
            out.writerow([_fmt(h.edges[b]), _fmt(h.edges[b + 1]), int(h.counts[b]), _fmt(dens[b]), _fmt(ld), _fmt(lm)])


def write_outputs(result: RunResult, outdir: Union[str, Path]) -> Dict[str, Path]:
    """Write counts, histograms, scatter and summary files.

    Every file except ``timing.json`` is a function of (spec, seed,
    realizations) only.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    est = estimate_real_count_distribution(result)
    dens = estimate_densities(result)
    paths = {}

    paths["counts"] = outdir / "counts.csv"
    with open(paths["counts"], "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["k", "frequency", "stderr"])
        for k in sorted(est.frequencies):
            out.writerow([k, _fmt(est.frequencies[k]), _fmt(est.stderr[k])])

    paths["reals_hist"] = outdir / "reals_hist.csv"
    _write_hist(paths["reals_hist"], dens["reals"], "x")
    paths["modulus_hist"] = outdir / "modulus_hist.csv"
    _write_hist(paths["modulus_hist"], dens["modulus"], "r")

    paths["scatter"] = outdir / "scatter.csv"
    with open(paths["scatter"], "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["realization", "re", "im"])
        for i, re, im in dens["scatter"]:
            out.writerow([int(i), _fmt(re), _fmt(im)])

    summary = {
        "N": cfg.spec.N,
        "Ls": list(cfg.spec.Ls),
        "realizations": cfg.realizations,
        "seed": cfg.seed,
        "streams": "Philox(SeedSequence(seed, spawn_key=(index,)))",
        "mean": est.mean,
        "mean_stderr": est.mean_stderr,
        "variance": est.variance,
        "variance_over_mean": est.ratio,
        "tv_reals": dens["reals"].tv,
        "tv_modulus": dens["modulus"].tv,
        "max_modulus": result.max_modulus,
    }
    summary = {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in summary.items()}
    paths["summary"] = outdir / "summary.json"
    paths["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    paths["timing"] = outdir / "timing.json"
    paths["timing"].write_text(
        json.dumps({"seconds": result.elapsed, "workers": cfg.workers}, indent=2) + "\n"
    )
    return paths
