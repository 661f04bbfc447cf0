"""Generating function, probabilities and expectations in exact arithmetic.

The probability of exactly ``k`` real eigenvalues of ``P_m = X_1 ... X_m``
is the coefficient of ``zeta^k`` in ``Z_N(zeta)``, a determinant of half
size built from skew-orthogonal polynomial data.  Entries are polynomials
in ``t = zeta^2`` with coefficients in Q[pi^(+-1/2)].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact import InexactDivision, PiLaurent, gamma_half, to_float
from .meijer import UnsupportedExact, meijer_entry, prefactor_rational

__all__ = [
    "EnsembleSpec",
    "ZetaPolynomial",
    "TPoly",
    "ParityError",
    "DEFAULT_MAX_N",
    "skew_odd_coefficient",
    "h_norm",
    "mu_reduced",
    "a_entry",
    "b_entry",
    "generating_function",
    "prob_k_real",
    "expected_reals_exact",
    "expected_reals_closed_m1",
    "expected_reals_closed_m2",
    "pnn_product",
    "pnn_product_log",
    "pnn_brace",
    "pnn_asymptotic",
    "bareiss_det",
    "cofactor_det",
]

DEFAULT_MAX_N = 24


class ParityError(ValueError):
    """Requested a count of real eigenvalues with the wrong parity."""


@dataclass(frozen=True)
class EnsembleSpec:
    """Matrix size ``N`` and truncations ``Ls``; ``m = len(Ls)`` factors."""

    N: int
    Ls: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "Ls", tuple(int(L) for L in self.Ls))
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if not self.Ls:
            raise ValueError("need at least one truncation")
        if any(L < 1 for L in self.Ls):
            raise ValueError(f"truncations must be positive, got {self.Ls}")

    @property
    def m(self) -> int:
        return len(self.Ls)

    @property
    def all_even(self) -> bool:
        return all(L % 2 == 0 for L in self.Ls)

    @property
    def exact_supported(self) -> bool:
        return self.all_even or self.m == 1

    def with_N(self, N: int) -> "EnsembleSpec":
        return EnsembleSpec(N, self.Ls)


# -- polynomials --------------------------------------------------------------


class TPoly:
    """Polynomial in one variable with PiLaurent coefficients (dense, low first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [PiLaurent.coerce(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    @classmethod
    def const(cls, value) -> "TPoly":
        return cls([value])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.c), len(other.c))
        zero = PiLaurent()
        return TPoly(
            (self.c[i] if i < len(self.c) else zero) + (other.c[i] if i < len(other.c) else zero)
            for i in range(n)
        )

    def __neg__(self) -> "TPoly":
        return TPoly(-x for x in self.c)

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        if not self.c or not other.c:
            return TPoly()
        out = [PiLaurent()] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TPoly(out)

    def exact_div(self, other: "TPoly") -> "TPoly":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = list(self.c)
        dn = other.degree
        lead = other.c[-1]
        if len(num) - 1 < dn:
            if any(not x.is_zero() for x in num):
                raise InexactDivision("polynomial division leaves a remainder")
            return TPoly()
        quot = [PiLaurent()] * (len(num) - dn)
        for top in range(len(num) - 1, dn - 1, -1):
            if num[top].is_zero():
                continue
            q = num[top] / lead
            quot[top - dn] = q
            for i, b in enumerate(other.c):
                num[top - dn + i] = num[top - dn + i] - q * b
        if any(not x.is_zero() for x in num[:dn]):
            raise InexactDivision("polynomial division leaves a remainder")
        return TPoly(quot)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.c == other.c

    def __repr__(self):
        return f"TPoly({[str(x) for x in self.c]})"


class ZetaPolynomial:
    """Polynomial in ``zeta`` with exact coefficients, keyed by degree."""

    def __init__(self, coefficients: Dict[int, PiLaurent] | None = None):
        self._c: Dict[int, PiLaurent] = {}
        for d, v in (coefficients or {}).items():
            v = PiLaurent.coerce(v)
            if not v.is_zero():
                self._c[int(d)] = v

    @classmethod
    def from_tpoly(cls, p: TPoly, shift: int = 0) -> "ZetaPolynomial":
        return cls({2 * i + shift: c for i, c in enumerate(p.c)})

    @property
    def coefficients(self) -> Dict[int, PiLaurent]:
        return dict(sorted(self._c.items()))

    def coefficient(self, d: int) -> PiLaurent:
        return self._c.get(d, PiLaurent())

    @property
    def degree(self) -> int:
        return max(self._c, default=-1)

    def at_one(self) -> PiLaurent:
        total = PiLaurent()
        for v in self._c.values():
            total = total + v
        return total

    def __call__(self, zeta: float) -> float:
        return sum(to_float(v) * zeta ** d for d, v in self._c.items())

    def __eq__(self, other):
        return isinstance(other, ZetaPolynomial) and self._c == other._c

    def __repr__(self):
        body = ", ".join(f"{d}: {v}" for d, v in sorted(self._c.items()))
        return f"ZetaPolynomial({{{body}}})"

    def to_text(self) -> str:
        return " + ".join(f"({v})*zeta^{d}" for d, v in sorted(self._c.items()))


# -- skew-orthogonal data -------------------------------------------------------


def skew_odd_coefficient(n: int, spec: EnsembleSpec) -> Fraction:
    """Coefficient of ``z^{2n-1}`` subtracted in ``p_{2n+1}``: prod 2n/(L_i+2n)."""
    out = Fraction(1)
    for L in spec.Ls:
        out *= Fraction(2 * n, L + 2 * n)
    return out


def h_norm(l: int, spec: EnsembleSpec) -> Fraction:
    """Skew normalisation ``h_l = prod_i L_i!(2l)!/(L_i+2l)!``."""
    out = Fraction(1)
    for L in spec.Ls:
        out *= Fraction(math.factorial(L) * math.factorial(2 * l), math.factorial(L + 2 * l))
    return out


def mu_reduced(j: int, spec: EnsembleSpec) -> PiLaurent:
    """``prod_i Gamma(j-1/2)/Gamma(L_i/2+j-1/2)``.

    The true moment ``mu_{2j-1}`` is this times ``prod_i (L_i!/2^L_i)^(1/2)``;
    that square root is absorbed into the generating-function prefactor.
    """
    out = PiLaurent.coerce(1)
    for L in spec.Ls:
        out = out * gamma_half(2 * j - 1) / gamma_half(L + 2 * j - 1)
    return out


@lru_cache(maxsize=None)
def _a_entry_cached(j: int, k: int, Ls: Tuple[int, ...]) -> PiLaurent:
    return meijer_entry(j, k, Ls) * prefactor_rational(Ls)


def a_entry(j: int, k: int, spec: EnsembleSpec) -> PiLaurent:
    """Monomial moment ``a_{2j-1,2k}`` (prefactor times the G-function)."""
    return _a_entry_cached(j, k, spec.Ls)


def _a_shifted(j: int, k: int, spec: EnsembleSpec) -> PiLaurent:
    # a_{2j-1,2k} with the convention a_{.,0} = 0
    if k == 0:
        return PiLaurent()
    return a_entry(j, k, spec)


def _alpha_skew(j: int, k: int, spec: EnsembleSpec) -> PiLaurent:
    return _a_shifted(j, k, spec) - _a_shifted(j, k - 1, spec) * skew_odd_coefficient(k - 1, spec)


def b_entry(j: int, k: int, spec: EnsembleSpec) -> ZetaPolynomial:
    """Determinant entry ``(zeta^2-1) alpha_{2j-1,2k} + h_{j-1} delta_{jk}``."""
    return ZetaPolynomial.from_tpoly(_b_tpoly(j, k, spec))


def _b_tpoly(j: int, k: int, spec: EnsembleSpec) -> TPoly:
    if k < 1:
        raise ValueError("k must be at least 1")
    alpha = _alpha_skew(j, k, spec)
    const = -alpha
    if j == k:
        const = const + h_norm(j - 1, spec)
    return TPoly([const, alpha])


def _prefactor(spec: EnsembleSpec) -> PiLaurent:
    # prod_i K_{N,L_i}, with the half-integer power of 2^L/L! removed for odd N
    # (it cancels against the sqrt factor carried by the mu column)
    N = spec.N
    out = PiLaurent.coerce(1)
    for L in spec.Ls:
        out = out * Fraction(2 ** L, math.factorial(L)) ** (N // 2)
        for jj in range(1, N + 1):
            out = out * gamma_half(L + jj) / gamma_half(jj)
    return out


def _check_exact(spec: EnsembleSpec, max_N: int):
    if not spec.exact_supported:
        raise UnsupportedExact(
            f"exact generating function needs all L_i even or m = 1 (Ls={list(spec.Ls)})"
        )
    if spec.N > max_N:
        raise ValueError(f"N={spec.N} exceeds the exact-path maximum {max_N}")


def generating_matrix(spec: EnsembleSpec) -> List[List[TPoly]]:
    """Half-size matrix whose determinant, times the prefactor, is Z_N."""
    N = spec.N
    if N % 2 == 0:
        n = N // 2
        return [[_b_tpoly(j, k, spec) for k in range(1, n + 1)] for j in range(1, n + 1)]
    n = (N + 1) // 2
    return [
        [_b_tpoly(j, k, spec) for k in range(1, n)] + [TPoly.const(mu_reduced(j, spec))]
        for j in range(1, n + 1)
    ]


@lru_cache(maxsize=256)
def _generating_function_cached(spec: EnsembleSpec) -> ZetaPolynomial:
    det = bareiss_det(generating_matrix(spec))
    pre = _prefactor(spec)
    det = TPoly(c * pre for c in det.c)
    return ZetaPolynomial.from_tpoly(det, shift=spec.N % 2)


def generating_function(spec: EnsembleSpec, max_N: int = DEFAULT_MAX_N) -> ZetaPolynomial:
    """``Z_N(zeta) = sum_k p_{N,k} zeta^k``, exactly."""
    _check_exact(spec, max_N)
    if spec.N == 1:
        return ZetaPolynomial({1: PiLaurent.coerce(1)})
    return _generating_function_cached(spec)


def prob_k_real(spec: EnsembleSpec, k: int, max_N: int = DEFAULT_MAX_N) -> PiLaurent:
    """Probability of exactly ``k`` real eigenvalues."""
    if not 0 <= k <= spec.N:
        raise ValueError(f"k={k} outside 0..{spec.N}")
    if (spec.N - k) % 2:
        raise ParityError(
            f"k={k} has the wrong parity for N={spec.N}: the number of real "
            "eigenvalues always has the parity of N"
        )
    return generating_function(spec, max_N).coefficient(k)


def _binom_prod(spec: EnsembleSpec, j: int) -> int:
    out = 1
    for L in spec.Ls:
        out *= math.comb(L + j, L)
    return out


def expected_reals_exact(spec: EnsembleSpec) -> PiLaurent:
    """Expected number of real eigenvalues from the moment sum.

    For odd ``N`` the kernel carries the extra term ``q_{N-1}(x)/mu_N``,
    which integrates to exactly 1.
    """
    if not spec.exact_supported:
        raise UnsupportedExact(f"no exact path for Ls={list(spec.Ls)}")
    if spec.N == 1:
        return PiLaurent.coerce(1)
    total = PiLaurent()
    for j in range(spec.N - 1):
        J = -(-(j + 2) // 2)  # ceil(j/2 + 1)
        K = (j + 2) // 2  # floor(j/2 + 1)
        term = a_entry(J, K, spec) * _binom_prod(spec, j)
        total = total + (term if j % 2 == 0 else -term)
    return 2 * total + (spec.N % 2)


def expected_reals_closed_m1(N: int, L: int) -> PiLaurent:
    """Double gamma-ratio sum for ``m = 1`` and even ``L`` (plus 1 for odd ``N``)."""
    if L % 2:
        raise ValueError("closed form needs even L")
    g = gamma_half
    pre = g(L + 1) / (g(1) * g(2 * L))
    total = PiLaurent()
    for j in range(N - 1):
        cj = -(-j // 2)
        sign = 1 if j % 2 == 0 else -1
        for ell in range(1, L // 2 + 1):
            num = g(2 * (j + L + 1)) * g(2 * cj + 1) * g(2 * (j + ell) + 1) * g(2 * (L - ell))
            den = g(2 * (j + 1)) * g(2 * (j + L) + 1) * g(2 * (ell + cj) + 1) * g(L - 2 * ell + 2)
            total = total + (num / den) * sign
    return pre * total + (N % 2)


def _K_j(j: int, p: int, q: int) -> PiLaurent:
    g = gamma_half
    cj = -(-j // 2)
    pre = g(2 * cj + 1) / (g(2 * p) * g(2 * (p + q + j) + 1))
    total = PiLaurent()
    for ell in range(1, q + 1):
        total = total + g(2 * (j + ell) + 1) * g(2 * (p + q - ell)) / (
            g(2 * (cj + ell) + 1) * g(2 * (q - ell + 1))
        )
    return pre * total


def expected_reals_closed_m2(N: int, L1: int, L2: int) -> PiLaurent:
    """Triple gamma-ratio sum for ``m = 2`` and even ``L1, L2``.

    The overall constant is ``Gamma((L1+1)/2) Gamma((L2+1)/2) / (2 pi Gamma(L1) Gamma(L2))``:
    twice ``prod_i L_i!/2^L_i`` times the binomials, as for ``m = 1``.
    """
    if L1 % 2 or L2 % 2:
        raise ValueError("closed form needs even L1, L2")
    g = gamma_half
    pre = g(L1 + 1) * g(L2 + 1) / (PiLaurent.monomial(2, 2) * g(2 * L1) * g(2 * L2))
    total = PiLaurent()
    for j in range(N - 1):
        cj = -(-j // 2)
        sign = 1 if j % 2 == 0 else -1
        gc = g(2 * cj + 1)
        for p in range(1, L1 // 2 + 1):
            f1 = g(2 * (L1 - p)) * g(2 * (j + L1 + 1)) * g(2 * (j + p) + 1) / (
                g(2 * (j + 1)) * g(2 * (j + L1) + 1) * g(L1 - 2 * p + 2)
            )
            for q in range(1, L2 // 2 + 1):
                f2 = g(2 * (L2 - q)) * g(2 * (j + L2 + 1)) * g(2 * (j + q) + 1) / (
                    g(2 * (j + 1)) * g(2 * (j + L2) + 1) * g(L2 - 2 * q + 2)
                )
                tail = gc * gc / (g(2 * (p + cj) + 1) * g(2 * (q + cj) + 1))
                total = total + f1 * f2 * (_K_j(j, p, q) + _K_j(j, q, p) + tail) * sign
    return pre * total + (N % 2)


# -- all-real probability -----------------------------------------------------


def pnn_product(N: int, L: int) -> PiLaurent:
    """Probability that all ``N`` eigenvalues are real, ``m = 1``, product form."""
    out = PiLaurent.coerce(1)
    for j in range(N):
        out = out * gamma_half(2 * (L + j)) * gamma_half(L + j)
        out = out / (gamma_half(2 * L + N + j - 1) * gamma_half(L))
    return out


def pnn_product_log(N: int, L: float) -> float:
    """Natural log of the product form, via log-gamma (any real ``L > 0``)."""
    lg = math.lgamma
    return sum(
        lg(L + j) + lg((L + j) / 2) - lg(L + (N + j - 1) / 2) - lg(L / 2) for j in range(N)
    )


def pnn_brace(c: float) -> float:
    """Coefficient of ``N^2`` in ``log p_{N,N}`` when ``L = cN``."""
    if c <= 0:
        raise ValueError("c must be positive")
    # the c^2 log c and c log c terms cancel identically; what is left is
    # written with log1p so that large c does not lose digits
    return (
        -c / 4
        - math.log(2) / 4
        - (c + 1) ** 2 / 4 * math.log1p(1 / c)
        + (c + 0.5) ** 2 * math.log1p(1 / (2 * c))
    )


def pnn_asymptotic(N: int, c: float) -> float:
    """Leading-order ``log p_{N,N}``, i.e. ``N^2`` times :func:`pnn_brace`."""
    return N * N * pnn_brace(c)


# -- determinants -----------------------------------------------------------------


def bareiss_det(matrix: Sequence[Sequence[TPoly]]) -> TPoly:
    """Fraction-free determinant over the polynomial ring (all divisions exact)."""
    M = [list(row) for row in matrix]
    n = len(M)
    if n == 0:
        return TPoly.const(1)
    sign = 1
    prev = TPoly.const(1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return TPoly()
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (pivot * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
        prev = pivot
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def cofactor_det(matrix: Sequence[Sequence[TPoly]]) -> TPoly:
    """Laplace expansion along the first row; an oracle for small sizes."""
    n = len(matrix)
    if n == 0:
        return TPoly.const(1)
    if n == 1:
        return matrix[0][0]
    total = TPoly()
    for col in range(n):
        minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
        term = matrix[0][col] * cofactor_det(minor)
        total = total + term if col % 2 == 0 else total - term
    return total
