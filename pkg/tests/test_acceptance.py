"""Acceptance criteria 1-13.  Each test prints one PASS/FAIL line.

Two stated targets are not attainable and run as strict xfails, each next to
a companion check of the corrected value:

* 1: three typeset cells of the L_i = 4 probability table carry digit slips
  (one exceeds 1, two break normalization); 1b checks the exact values.
* 12a: the stated large-N real-count law is sqrt(2) too large; 12a-corrected
  checks the simulation against the law with the constant fixed.
"""
import math
import time
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import pytest

from truncorth.asymptotics import expected_reals_asymptotic
from truncorth.cli import main
from truncorth.correlation import (
    EnsembleSpec,
    a_entry,
    expected_reals_closed_m1,
    expected_reals_closed_m2,
    expected_reals_exact,
    generating_function,
    pnn_brace,
    pnn_product,
    pnn_product_log,
    prob_k_real,
)
from truncorth.density import density_real, density_real_m1_closed, expected_reals_numeric, quadrature_alpha
from truncorth.exact import PiLaurent, to_float
from truncorth.montecarlo import RunConfig, estimate_densities, estimate_real_count_distribution
from truncorth.reference import TABLE1, TABLE2, TYPESET_SLIPS, table_specs

CATALAN = 0.915965594177219015
CONJECTURE_TIME = {}

# the table as typeset: exact values with the three slipped cells substituted
PRINTED = {key: dict(row) for key, row in TABLE1.items()}
for (N, m, k), text in TYPESET_SLIPS.items():
    PRINTED[(N, m)][k] = text


def _table_mismatches(table):
    bad = []
    for N, m, spec in table_specs():
        Z = generating_function(spec)
        for k, want in table[(N, m)].items():
            if Z.coefficient(k).to_text() != want:
                bad.append((N, m, k))
    return bad


@pytest.mark.xfail(strict=True, reason="three typeset cells carry digit slips; see 1b")
def test_c1_table1_as_typeset(report):
    t0 = time.perf_counter()
    bad = _table_mismatches(PRINTED)
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 60, f"typeset table, {len(bad)} mismatching cells {bad}, {dt:.1f}s")
    assert not bad


def test_c1b_table1_exact(report):
    t0 = time.perf_counter()
    bad = _table_mismatches(TABLE1)
    dt = time.perf_counter() - t0
    cells = sum(len(r) for r in TABLE1.values())
    assert report("1b", not bad and dt < 60, f"{cells} exact cells, {len(bad)} mismatches, {dt:.1f}s")


def test_c2_table2(report):
    bad = []
    for N, m, spec in table_specs():
        e = expected_reals_exact(spec)
        mean = PiLaurent()
        for k, c in generating_function(spec).coefficients.items():
            mean = mean + c * k
        if e.to_text() != TABLE2[(N, m)] or e != mean:
            bad.append((N, m))
    assert report(2, not bad, f"9 cells, mismatches {bad}")


def test_c3_odd_L(report):
    p = prob_k_real(EnsembleSpec(4, (5,)), 0)
    want = PiLaurent({0: 1, -2: Fraction(-385024, 135135), -4: Fraction(16777216, 18729711)})
    assert report(3, p == want, f"p_40(L=5) = {p.to_text()}")


def test_c4_all_real(report):
    bad = [
        (N, L)
        for N in range(1, 9)
        for L in range(1, 7)
        if generating_function(EnsembleSpec(N, (L,))).coefficient(N) != pnn_product(N, L)
    ]
    assert report(4, not bad, f"48 (N, L) pairs, mismatches {bad}")


def test_c5_normalization(report):
    specs = [
        EnsembleSpec(N, Ls)
        for m in (1, 2, 3)
        for Ls in combinations_with_replacement((2, 4, 6, 8), m)
        for N in range(1, 11)
    ]
    specs += [EnsembleSpec(N, (L,)) for L in (1, 3, 5, 7) for N in range(1, 11)]
    bad = []
    for s in specs:
        Z = generating_function(s)
        if Z.at_one() != 1 or not all(0 <= to_float(c) <= 1 for c in Z.coefficients.values()):
            bad.append(s)
    assert report(5, not bad, f"{len(specs)} specs, failures {bad}")


def test_c6_closed_forms(report):
    bad = []
    for N in range(1, 9):
        for L in (2, 4, 6, 8):
            if expected_reals_closed_m1(N, L) != expected_reals_exact(EnsembleSpec(N, (L,))):
                bad.append((N, L))
        for L1 in (2, 4, 6, 8):
            for L2 in (2, 4, 6, 8):
                if expected_reals_closed_m2(N, L1, L2) != expected_reals_exact(EnsembleSpec(N, (L1, L2))):
                    bad.append((N, L1, L2))
    assert report(6, not bad, f"m=1 and m=2 closed forms, N <= 8, mismatches {bad}")


def test_c7_gaussian_limit(report):
    errs = [abs(math.exp(pnn_product_log(2, L)) - 2 ** -0.5) for L in (1e2, 1e3, 1e4)]
    ok = errs[0] > errs[1] > errs[2] and errs[2] < 0.01
    assert report(7, ok, "errors " + ", ".join(f"{e:.2e}" for e in errs))


def test_c8_barnes_asymptotics(report):
    brace = pnn_brace(1.0)
    vals = {N: pnn_product_log(N, N) / N ** 2 for N in (20, 40)}
    d20, d40 = (abs(vals[N] - brace) for N in (20, 40))
    ok = d40 < d20 and d40 < 0.03 * abs(brace)
    assert report(8, ok, f"brace {brace:.6f}, N=20 {vals[20]:.6f}, N=40 {vals[40]:.6f}")


def test_c9_quadrature_oracle(report):
    specs = [EnsembleSpec(6, (L,)) for L in range(1, 6)]
    specs += [EnsembleSpec(6, Ls) for Ls in [(2, 2), (2, 4), (4, 4)]]
    worst, slowest = 0.0, 0.0
    for s in specs:
        for J in (1, 2, 3):
            for K in (1, 2, 3):
                want = to_float(a_entry(J, K, s))
                t0 = time.perf_counter()
                got = quadrature_alpha(2 * J - 1, 2 * K, s)
                slowest = max(slowest, time.perf_counter() - t0)
                worst = max(worst, abs(got - want) / abs(want))
    ok = worst < 1e-8 and slowest < 10
    assert report(9, ok, f"{9 * len(specs)} entries, worst rel err {worst:.1e}, slowest {slowest:.2f}s")


def test_c10_density_closure(report):
    x = np.linspace(-1, 1, 53)[1:-1]
    err1 = err2 = sup = 0.0
    for N in range(1, 7):
        for L in range(1, 7):
            s = EnsembleSpec(N, (L,))
            e = to_float(expected_reals_exact(s))
            err1 = max(err1, abs(expected_reals_numeric(s) - e) / e)
            sup = max(sup, float(np.max(np.abs(density_real(x, s) - density_real_m1_closed(x, N, L)))))
        for Ls in [(2, 2), (2, 4), (4, 4), (2, 6), (4, 6), (6, 6)]:
            s = EnsembleSpec(N, Ls)
            e = to_float(expected_reals_exact(s))
            err2 = max(err2, abs(expected_reals_numeric(s) - e) / e)
    ok = err1 < 1e-6 and err2 < 1e-4 and sup < 1e-8
    assert report(10, ok, f"m=1 rel {err1:.1e}, m=2 rel {err2:.1e}, sup-norm {sup:.1e}")


def test_c11_monte_carlo_vs_exact(report):
    t0 = time.perf_counter()
    est = estimate_real_count_distribution(RunConfig(EnsembleSpec(4, (4,)), 100_000, seed=2024, workers=1))
    dt = time.perf_counter() - t0
    Z = generating_function(EnsembleSpec(4, (4,)))
    inside = {k: est.within(k, to_float(c)) for k, c in Z.coefficients.items()}
    t1 = time.perf_counter()
    cat = estimate_real_count_distribution(RunConfig(EnsembleSpec(2, (1, 2)), 100_000, seed=2025, workers=1))
    dt_cat = time.perf_counter() - t1
    p_cat = (2 * CATALAN + 5) / (3 * math.pi)
    ok = all(inside.values()) and dt < 300 and cat.within(2, p_cat) and dt_cat < 300
    detail = ", ".join(f"p{k} {est.frequencies[k]:.4f}" for k in sorted(inside))
    detail += f" ({dt:.0f}s); Catalan p22 {cat.frequencies[2]:.4f} vs {p_cat:.5f} ({dt_cat:.0f}s)"
    assert report(11, ok, detail)


def _conj2_estimate():
    t0 = time.perf_counter()
    est = estimate_real_count_distribution(RunConfig(EnsembleSpec(100, (100, 100)), 200, seed=12, workers=1))
    CONJECTURE_TIME["a"] = time.perf_counter() - t0
    return est


@pytest.mark.xfail(strict=True, reason="stated real-count law is sqrt(2) too large; see 12a-corrected")
def test_c12a_conjecture2(report):
    est = _conj2_estimate()
    target = expected_reals_asymptotic(100, 0.5, m=2)
    rel = abs(est.mean - target) / target
    report("12a", rel < 0.10, f"E-hat {est.mean:.3f} vs stated {target:.2f}, rel {rel:.1%}")
    assert rel < 0.10


def test_c12a_conjecture2_corrected(report):
    est = _conj2_estimate()
    target = expected_reals_asymptotic(100, 0.5, m=2, corrected=True)
    rel = abs(est.mean - target) / target
    assert report("12a-corrected", rel < 0.10, f"E-hat {est.mean:.3f} vs corrected {target:.3f}, rel {rel:.1%}")


def test_c12b_conjecture1_reals(report):
    t0 = time.perf_counter()
    h = estimate_densities(RunConfig(EnsembleSpec(200, (200, 200)), 1000, seed=13, workers=1))["reals"]
    CONJECTURE_TIME["b"] = time.perf_counter() - t0
    assert report("12b", h.tv < 0.08, f"TV {h.tv:.4f} over {h.counts.size} bins")


def test_c12c_modulus_law(report):
    t0 = time.perf_counter()
    h = estimate_densities(RunConfig(EnsembleSpec(200, (200, 200)), 100, seed=14, workers=1))["modulus"]
    CONJECTURE_TIME["c"] = time.perf_counter() - t0
    assert report("12c", h.tv < 0.05, f"TV {h.tv:.4f} over {h.counts.size} bins")


def test_c12d_variance_ratio(report):
    t0 = time.perf_counter()
    est = estimate_real_count_distribution(RunConfig(EnsembleSpec(500, (500,)), 500, seed=15, workers=1))
    CONJECTURE_TIME["d"] = time.perf_counter() - t0
    total = sum(CONJECTURE_TIME.values())
    ok = 0.45 <= est.ratio <= 0.72 and total <= 1800
    assert report("12d", ok, f"var/mean {est.ratio:.4f} (2-sqrt2 = 0.5858); criterion 12 total {total:.0f}s")


def test_c13_determinism(report, tmp_path, capsys):
    outs = {}
    for workers in (1, 2, 8):
        d = tmp_path / f"w{workers}"
        argv = ["mc", "--N", "8", "--L", "4", "--L", "6", "--reps", "400", "--seed", "5",
                "--workers", str(workers), "--scatter", "4", "--out", str(d)]
        assert main(argv) == 0
        outs[workers] = {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.name != "timing.json"}
    capsys.readouterr()
    same = outs[1] == outs[2] == outs[8]
    assert report(13, same, f"{len(outs[1])} files byte-identical for 1, 2 and 8 workers")
