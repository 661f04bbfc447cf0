"""Mean number of real eigenvalues at N = L, against the large-N law.

Writes ``expected_reals.csv`` with the simulated mean, its standard error,
the stated law and the law with the corrected constant.  The full-scale grid
runs to N = 1000; the default stops at 200.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from _common import parse_config, save_config
from truncorth.asymptotics import expected_reals_asymptotic
from truncorth.correlation import EnsembleSpec
from truncorth.montecarlo import RunConfig, default_workers, estimate_real_count_distribution


@dataclass(frozen=True)
class Config:
    sizes: tuple = (2, 5, 10, 20, 50, 100, 200)
    reps: tuple = (50000, 20000, 10000, 5000, 2000, 1000, 500)
    ms: tuple = (1, 2, 3)
    scale: float = 0.1
    seed: int = 2
    workers: int = default_workers()
    out: str = "results/fig2"


def main(cfg: Config) -> None:
    if len(cfg.sizes) != len(cfg.reps):
        raise SystemExit("--sizes and --reps need the same length")
    outdir = Path(cfg.out)
    save_config(cfg, outdir)
    alpha = 0.5
    with open(outdir / "expected_reals.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "N", "reps", "mean", "stderr", "law_stated", "law_corrected"])
        for m in cfg.ms:
            for N, reps in zip(cfg.sizes, cfg.reps):
                n = max(100, int(round(reps * cfg.scale)))
                est = estimate_real_count_distribution(
                    RunConfig(EnsembleSpec(N, (N,) * m), n, seed=cfg.seed, workers=cfg.workers)
                )
                stated = expected_reals_asymptotic(N, alpha, m)
                corrected = expected_reals_asymptotic(N, alpha, m, corrected=True)
                w.writerow([m, N, n, f"{est.mean:.6f}", f"{est.mean_stderr:.6f}", f"{stated:.6f}", f"{corrected:.6f}"])
                fh.flush()
                print(f"m={m} N={N:5d} reps={n:6d} mean={est.mean:9.4f} stated={stated:9.4f} corrected={corrected:9.4f}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__.splitlines()[0]))
