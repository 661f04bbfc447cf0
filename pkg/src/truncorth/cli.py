"""Command-line driver: ``truncorth <subcommand> [options]``.

Exit codes: 0 success, 1 failed self-check, 2 usage or parity error,
3 exact arithmetic unavailable (use ``--numeric``), 4 accuracy not reached.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import asymptotics
from .correlation import (
    EnsembleSpec,
    ParityError,
    expected_reals_closed_m1,
    expected_reals_closed_m2,
    expected_reals_exact,
    generating_function,
    pnn_asymptotic,
    pnn_brace,
    pnn_product,
    pnn_product_log,
    prob_k_real,
)
from .exact import PiLaurent, format_float, to_float
from .meijer import UnsupportedExact
from .quadrature import AccuracyError

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_ACCURACY = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class Output:
    """Rows with a header, rendered as text, csv or json."""

    header: List[str]
    rows: List[list]
    meta: dict

    def render(self, fmt: str) -> str:
        if fmt == "json":
            body = dict(self.meta)
            body["rows"] = [dict(zip(self.header, r)) for r in self.rows]
            return json.dumps(body, indent=None, sort_keys=False) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        return "\n".join(" ".join(str(c) for c in r if c != "") for r in self.rows) + "\n"


def _ff(x) -> str:
    return format_float(float(x))


def _exact_and_float(v: PiLaurent) -> str:
    return f"{v.to_text()} ≈ {_ff(to_float(v))}"


# -- argument handling --------------------------------------------------------------


def _spec(args) -> EnsembleSpec:
    if args.N is None:
        raise UsageError("--N is required")
    Ls = list(args.L or [])
    if not Ls:
        raise UsageError("at least one --L is required")
    if args.m is not None:
        if len(Ls) == 1:
            Ls = Ls * args.m
        elif len(Ls) != args.m:
            raise UsageError(f"--m {args.m} conflicts with {len(Ls)} --L flags")
    try:
        return EnsembleSpec(args.N, tuple(Ls))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _common(p: argparse.ArgumentParser, need_spec: bool = True):
    if need_spec:
        p.add_argument("--N", type=int, help="matrix size")
        p.add_argument("--L", type=int, action="append", help="truncation; repeat once per factor")
        p.add_argument("--m", type=int, help="with a single --L, use m equal factors")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    p.add_argument("--out", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="truncorth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", help="probability of exactly k real eigenvalues")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--numeric", action="store_true", help="quadrature instead of exact arithmetic")

    p = sub.add_parser("genfunc", help="all coefficients of the generating function")
    _common(p)
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("expect", help="expected number of real eigenvalues")
    _common(p)
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("pnn", help="probability that all eigenvalues are real (m = 1)")
    _common(p)

    p = sub.add_parser("density", help="density of real or complex eigenvalues on a grid")
    _common(p)
    p.add_argument("--kind", choices=("real", "complex"), default="real")
    p.add_argument("--points", type=int, default=51)

    p = sub.add_parser("asym", help="large-N laws on a grid")
    _common(p)
    p.add_argument("--law", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--points", type=int, default=101)

    p = sub.add_parser("mc", help="Monte Carlo run written to a directory")
    _common(p)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--bins", default="fd")
    p.add_argument("--scatter", type=int, default=1, help="realizations kept for scatter.csv")

    p = sub.add_parser("table", help="regenerate the L_i = 4 probability and expectation tables")
    _common(p, need_spec=False)

    p = sub.add_parser("selfcheck", help="fast invariant suite")
    _common(p, need_spec=False)
    return parser


# -- subcommands -----------------------------------------------------------------------


def _numeric_coeffs(spec, tol):
    from .density import generating_function_numeric

    return generating_function_numeric(spec, tol)


def cmd_prob(args) -> Output:
    spec = _spec(args)
    if not 0 <= args.k <= spec.N:
        raise UsageError(f"k={args.k} outside 0..{spec.N}")
    if (spec.N - args.k) % 2:
        raise ParityError(
            f"k={args.k} has the wrong parity for N={spec.N}: the number of real "
            "eigenvalues always has the parity of N"
        )
    meta = {"N": spec.N, "Ls": list(spec.Ls), "k": args.k}
    if args.numeric:
        v = _numeric_coeffs(spec, args.tol).get(args.k, 0.0)
        meta.update(exact=None, float=_ff(v))
        if args.format == "text":
            return Output([], [[_ff(v)]], meta)
        return Output(["k", "exact", "float"], [[args.k, "", _ff(v)]], meta)
    p = prob_k_real(spec, args.k)
    meta.update(exact=p.to_text(), float=_ff(to_float(p)))
    if args.format == "text":
        return Output([], [[_exact_and_float(p)]], meta)
    return Output(["k", "exact", "float"], [[args.k, p.to_text(), _ff(to_float(p))]], meta)


def cmd_genfunc(args) -> Output:
    spec = _spec(args)
    ks = list(range(spec.N % 2, spec.N + 1, 2))
    if args.numeric:
        c = _numeric_coeffs(spec, args.tol)
        rows = [[k, "", _ff(c.get(k, 0.0))] for k in ks]
        meta = {"N": spec.N, "Ls": list(spec.Ls), "coeffs": None, "floats": {str(k): _ff(c.get(k, 0.0)) for k in ks}}
    else:
        Z = generating_function(spec)
        rows = [[k, Z.coefficient(k).to_text(), _ff(to_float(Z.coefficient(k)))] for k in ks]
        meta = {
            "N": spec.N,
            "Ls": list(spec.Ls),
            "coeffs": {str(k): Z.coefficient(k).to_text() for k in ks},
            "floats": {str(k): _ff(to_float(Z.coefficient(k))) for k in ks},
        }
    out = Output(["k", "exact", "float"], rows, meta)
    if args.format == "text":
        out.rows = [[f"zeta^{k}:", e + " ≈" if e else "", f] for k, e, f in rows]
    return out


def cmd_expect(args) -> Output:
    spec = _spec(args)
    meta = {"N": spec.N, "Ls": list(spec.Ls)}
    rows = []
    if args.numeric:
        from .density import expected_reals_numeric

        v = expected_reals_numeric(spec, tol=args.tol)
        rows.append(["numeric", "", _ff(v)])
    else:
        e = expected_reals_exact(spec)
        rows.append(["exact", e.to_text(), _ff(to_float(e))])
        closed = None
        if spec.m == 1 and spec.Ls[0] % 2 == 0:
            closed = expected_reals_closed_m1(spec.N, spec.Ls[0])
        elif spec.m == 2 and spec.all_even:
            closed = expected_reals_closed_m2(spec.N, *spec.Ls)
        if closed is not None:
            rows.append(["closed-form", closed.to_text(), _ff(to_float(closed))])
            rows.append(["agree", str(closed == e).lower(), ""])
    if len(set(spec.Ls)) == 1:
        alpha = spec.N / (spec.N + spec.Ls[0])
        rows.append(["asymptotic", "", _ff(asymptotics.expected_reals_asymptotic(spec.N, alpha, spec.m))])
    out = Output(["quantity", "exact", "float"], rows, meta)
    if args.format == "text":
        out.rows = [[f"{q}:", (e + " ≈" if e and f else e), f] for q, e, f in rows]
    return out


def cmd_pnn(args) -> Output:
    spec = _spec(args)
    if spec.m != 1:
        raise UsageError("pnn is defined for one factor only")
    N, L = spec.N, spec.Ls[0]
    p = pnn_product(N, L)
    logp = pnn_product_log(N, L)
    c = L / N
    rows = [
        ["product", p.to_text(), _ff(to_float(p))],
        ["log", "", _ff(logp)],
        ["log/N^2", "", _ff(logp / N ** 2)],
        ["brace(c=L/N)", "", _ff(pnn_brace(c))],
        ["asymptotic log", "", _ff(pnn_asymptotic(N, c))],
    ]
    out = Output(["quantity", "exact", "float"], rows, {"N": N, "L": L})
    if args.format == "text":
        out.rows = [[f"{q}:", (e + " ≈" if e else ""), f] for q, e, f in rows]
    return out


def cmd_density(args) -> Output:
    from .density import density_complex_m1_closed, density_real, density_real_m1_closed

    spec = _spec(args)
    n = args.points
    if n < 2:
        raise UsageError("--points must be at least 2")
    meta = {"N": spec.N, "Ls": list(spec.Ls), "kind": args.kind}
    if args.kind == "real":
        x = np.linspace(-1, 1, n + 2)[1:-1]
        kern = density_real(x, spec, args.tol)
        rows = []
        closed = density_real_m1_closed(x, spec.N, spec.Ls[0]) if spec.m == 1 else None
        for i, xi in enumerate(x):
            rows.append([_ff(xi), _ff(kern[i]), _ff(closed[i]) if closed is not None else ""])
        return Output(["x", "rho_real", "rho_real_closed"], rows, meta)
    if spec.m != 1:
        raise UnsupportedExact("complex density is available for one factor only")
    g = np.linspace(-1, 1, n + 2)[1:-1]
    rows = []
    for im in g[g > 0]:
        for re in g:
            if re * re + im * im < 1:
                rows.append([_ff(re), _ff(im), _ff(density_complex_m1_closed(re + 1j * im, spec.N, spec.Ls[0]))])
    return Output(["re", "im", "rho_complex"], rows, meta)


_CURVE = {
    "real-bulk-alpha": ("x", lambda a, m: -math.sqrt(a), lambda a, m: math.sqrt(a)),
    "real-bulk-alpha-corrected": ("x", lambda a, m: -math.sqrt(a), lambda a, m: math.sqrt(a)),
    "conj1": ("x", lambda a, m: -(a ** (m / 2)), lambda a, m: a ** (m / 2)),
    "complex-bulk-alpha": ("r", lambda a, m: 0.0, lambda a, m: math.sqrt(a)),
    "complex-bulk-m": ("r", lambda a, m: 0.0, lambda a, m: a ** (m / 2)),
}


def cmd_asym(args) -> Output:
    law = {"real-bulk-α": "real-bulk-alpha", "complex-bulk-α": "complex-bulk-alpha"}.get(args.law, args.law)
    if law not in asymptotics.LAWS:
        raise UsageError(f"unknown law {args.law!r}; choose from {sorted(asymptotics.LAWS)}")
    m = len(args.L) if args.L and args.m is None else (args.m or 1)
    alpha = args.alpha
    if alpha is None and args.N is not None and args.L:
        alpha = args.N / (args.N + args.L[0])
    meta = {"law": law, "alpha": alpha, "m": m}
    n = args.points
    if law in _CURVE:
        if alpha is None or not 0 < alpha < 1:
            raise UsageError("need --alpha in (0, 1), or --N and --L")
        var, lo, hi = _CURVE[law]
        x = np.linspace(lo(alpha, m), hi(alpha, m), n + 2)[1:-1]
        y = asymptotics.asymptotic_laws(law, **{var: x}, alpha=alpha, m=m)
        return Output(["law", var, "value"], [[law, _ff(a), _ff(b)] for a, b in zip(x, y)], meta)
    if law in ("edge-density", "edge-tail"):
        if not args.L:
            raise UsageError("--L is required")
        x = np.linspace(0, 50, n + 1)[1:]
        y = asymptotics.asymptotic_laws(law, x=x, L=args.L[0])
        meta["L"] = args.L[0]
        return Output(["law", "x", "value"], [[law, _ff(a), _ff(b)] for a, b in zip(x, y)], meta)
    if args.N is None:
        raise UsageError("--N is required")
    if law == "log-law":
        if not args.L:
            raise UsageError("--L is required")
        v = asymptotics.asymptotic_laws(law, N=args.N, L=args.L[0])
    else:
        if alpha is None:
            raise UsageError("need --alpha, or --L")
        v = asymptotics.asymptotic_laws(law, N=args.N, alpha=alpha, m=m)
    meta["N"] = args.N
    return Output(["law", "value"], [[law, _ff(v)]], meta)


def cmd_mc(args) -> Output:
    from .montecarlo import RunConfig, default_workers, run, write_outputs

    spec = _spec(args)
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    bins = int(args.bins) if args.bins.isdigit() else args.bins
    cfg = RunConfig(
        spec,
        args.reps,
        seed=args.seed,
        workers=args.workers or default_workers(),
        bins=bins,
        scatter_realizations=args.scatter,
    )
    outdir = Path(args.out or "mc_out")
    result = run(cfg)
    paths = write_outputs(result, outdir)
    summary = json.loads(paths["summary"].read_text())
    rows = [[k, summary[k]] for k in ("mean", "mean_stderr", "variance", "variance_over_mean", "tv_reals", "tv_modulus")]
    rows.append(["output", str(outdir)])
    args.out = None  # files already written; the table goes to stdout
    return Output(["quantity", "value"], rows, summary)


def cmd_table(args) -> Output:
    from .reference import render_tables

    return Output([], [[render_tables().rstrip("\n")]], {"text": render_tables()})


def _checks():
    from fractions import Fraction

    from .density import expected_reals_numeric, quadrature_alpha
    from .correlation import a_entry
    from .reference import TABLE1, TABLE2, table_specs

    def tables():
        for N, m, spec in table_specs():
            Z = generating_function(spec)
            if any(Z.coefficient(k).to_text() != v for k, v in TABLE1[(N, m)].items()):
                return False
            if expected_reals_exact(spec).to_text() != TABLE2[(N, m)]:
                return False
        return True

    def normalization():
        for N in range(2, 9):
            for L in (1, 2, 3, 4, 5, 6):
                Z = generating_function(EnsembleSpec(N, (L,)))
                if Z.at_one() != PiLaurent.coerce(1):
                    return False
                if Z.coefficient(N) != pnn_product(N, L):
                    return False
        return True

    def closed_forms():
        for N in range(2, 9):
            for L in (2, 4, 6, 8):
                if expected_reals_closed_m1(N, L) != expected_reals_exact(EnsembleSpec(N, (L,))):
                    return False
            if expected_reals_closed_m2(N, 2, 4) != expected_reals_exact(EnsembleSpec(N, (2, 4))):
                return False
        return True

    def odd_L():
        p = prob_k_real(EnsembleSpec(4, (5,)), 0)
        want = PiLaurent({0: 1, -2: Fraction(-385024, 135135), -4: Fraction(16777216, 18729711)})
        return p == want

    def quadrature():
        spec = EnsembleSpec(4, (4,))
        return abs(quadrature_alpha(1, 2, spec) - to_float(a_entry(1, 1, spec))) < 1e-8

    def closure():
        spec = EnsembleSpec(4, (2, 4))
        return abs(expected_reals_numeric(spec) - to_float(expected_reals_exact(spec))) < 1e-6

    def gaussian_limit():
        return abs(math.exp(pnn_product_log(2, 1e4)) - 2 ** -0.5) < 0.01

    def monte_carlo():
        from .montecarlo import RunConfig, estimate_real_count_distribution

        est = estimate_real_count_distribution(RunConfig(EnsembleSpec(2, (4,)), 4000, seed=1, workers=1))
        return est.within(2, 24 / 35, 4.0)

    return [
        ("tables reproduce", tables),
        ("Z_N(1) = 1 and top coefficient = product form", normalization),
        ("closed-form expectations", closed_forms),
        ("odd-L pi-polynomial", odd_L),
        ("quadrature moment vs exact", quadrature),
        ("density closure", closure),
        ("Gaussian limit of p_22", gaussian_limit),
        ("Monte Carlo p_22 at N=2, L=4", monte_carlo),
    ]


def cmd_selfcheck(args) -> Output:
    rows = []
    for name, fn in _checks():
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failed check, reported as such
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        rows.append(["PASS" if ok else "FAIL", name])
    out = Output(["status", "check"], rows, {"passed": all(r[0] == "PASS" for r in rows)})
    return out


COMMANDS = {
    "prob": cmd_prob,
    "genfunc": cmd_genfunc,
    "expect": cmd_expect,
    "pnn": cmd_pnn,
    "density": cmd_density,
    "asym": cmd_asym,
    "mc": cmd_mc,
    "table": cmd_table,
    "selfcheck": cmd_selfcheck,
}


def _render(cmd: str, out: Output, fmt: str) -> str:
    if cmd == "table":
        return out.meta["text"] if fmt != "json" else json.dumps({"text": out.meta["text"]}) + "\n"
    if fmt == "json" and cmd in ("prob", "genfunc", "mc"):
        return json.dumps(out.meta) + "\n"
    return out.render(fmt)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, ParityError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedExact as exc:
        print(f"error: {exc}; no exact path here, rerun with --numeric", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except AccuracyError as exc:
        print(f"error: accuracy not reached: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    text = _render(args.command, out, args.format)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "selfcheck" and not out.meta["passed"]:
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
