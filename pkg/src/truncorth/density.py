"""Real-eigenvalue weights, the correlation kernel ``S`` and the m = 1 densities.

Numerics work in the variable ``u`` with ``lambda = exp(-u^2)``.  Near
``lambda = 1`` the weights behave like powers of ``1 - lambda`` with
half-integer exponents, which become analytic in ``u``; near ``lambda = 0``
the product weights have logarithmic growth, which becomes polynomial
growth in ``u``.  Every integral is then a composite Gauss-Legendre rule
with the sign kink placed on a panel edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .correlation import EnsembleSpec, h_norm, skew_odd_coefficient
from .quadrature import AccuracyError, composite_nodes

__all__ = [
    "AccuracyError",
    "weight_constant",
    "weight_m1",
    "WeightTable",
    "RealWeight",
    "real_weight",
    "weight_product",
    "half_moment",
    "full_moment",
    "kernel_coefficients",
    "quadrature_alpha",
    "kernel_S",
    "density_real",
    "expected_reals_numeric",
    "density_real_m1_closed",
    "density_complex_m1_closed",
    "generating_function_numeric",
]

U_MAX_M1 = 6.5  # exp(-U^2) ~ 5e-19; the weight is bounded near 0 for m = 1
U_MAX_PRODUCT = 8.0  # exp(-64) ~ 1.6e-28; product weights grow like log^(m-1)


def weight_constant(L: int) -> float:
    """Normalising constant of the single-matrix weight."""
    logc = 0.5 * (
        math.log(L) + math.lgamma(0.5) + math.lgamma((L + 1) / 2) - math.lgamma(L / 2)
    ) - 0.5 * math.log(2 * math.pi)
    return math.exp(logc)


def weight_m1(lam, L: int):
    """Weight of one truncated orthogonal matrix on (-1, 1).

    Parameters
    ----------
    lam : float or array_like
        Points with ``|lam| < 1``.
    L : int
        Truncation parameter.

    Returns
    -------
    float or ndarray
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(np.abs(lam) >= 1):
        raise ValueError("weight_m1 needs |lambda| < 1")
    out = weight_constant(L) * (1.0 - lam * lam) ** (L / 2 - 1)
    return float(out) if out.ndim == 0 else out


def _w1_of_s(s: np.ndarray, L: int) -> np.ndarray:
    # w(exp(-s); L), accurate for small s
    return weight_constant(L) * (-np.expm1(-2.0 * s)) ** (L / 2 - 1)


def half_moment(j: int, Ls: Sequence[int]) -> float:
    """``int_0^1 w^{(m)}(x) x^j dx``; moments of a product multiply."""
    out = 0.5
    for L in Ls:
        out *= weight_constant(L) * special.beta((j + 1) / 2, L / 2)
    return out


def full_moment(n: int, Ls: Sequence[int]) -> float:
    """``int_{-1}^1 w^{(m)}(x) x^n dx`` (zero for odd ``n``)."""
    return 0.0 if n % 2 else 2.0 * half_moment(n, Ls)


# -- tabulated product weight --------------------------------------------------------


def _cheb_points(n: int) -> Tuple[np.ndarray, np.ndarray]:
    # first-kind points avoid the panel ends, where an L = 1 factor is infinite
    k = np.arange(n)
    theta = (2 * k + 1) * np.pi / (2 * n)
    x = np.cos(theta)[::-1]
    bw = ((-1.0) ** k * np.sin(theta))[::-1]
    return x, bw


@dataclass
class WeightTable:
    """Piecewise Chebyshev table of ``V(u) = w^{(m)}(exp(-u^2))`` on [0, umax].

    Attributes
    ----------
    Ls : tuple of int
        Truncations; the table is built for ``m = len(Ls) >= 2``.
    umax : float
        Right end of the table in ``u``.
    width : float
        Panel width in ``u``.
    order : int
        Chebyshev points per panel.
    values : ndarray, shape (panels, order)
        Weight values at the panel nodes.
    tolerance : float
        Largest observed absolute error at check points.
    """

    Ls: Tuple[int, ...]
    umax: float
    width: float
    order: int
    values: np.ndarray = field(repr=False)
    tolerance: float

    @property
    def grid(self) -> np.ndarray:
        x, _ = _cheb_points(self.order)
        left = np.arange(self.values.shape[0]) * self.width
        u = left[:, None] + 0.5 * self.width * (x[None, :] + 1.0)
        return np.exp(-u.ravel() ** 2)

    def v_of_u(self, u) -> np.ndarray:
        return _bary_eval(self.values, self.width, np.asarray(u, dtype=float))

    def __call__(self, lam) -> np.ndarray:
        lam = np.abs(np.asarray(lam, dtype=float))
        with np.errstate(divide="ignore"):
            u = np.sqrt(-np.log(lam))
        return self.v_of_u(u)

    @classmethod
    def build(
        cls,
        Ls: Sequence[int],
        umax: float = U_MAX_PRODUCT,
        tol: float = 1e-10,
        width: float = 0.25,
        order: int = 16,
        theta_panels: int = 16,
        max_refinements: int = 3,
    ) -> "WeightTable":
        """Tabulate by repeated Mellin convolution, refining until ``tol``.

        Raises
        ------
        AccuracyError
            If the check-point error still exceeds ``tol`` after
            ``max_refinements`` halvings of the panel width.
        """
        Ls = tuple(int(L) for L in Ls)
        if len(Ls) < 2:
            raise ValueError("tables are for products of at least two factors")
        achieved = math.inf
        for _ in range(max_refinements + 1):
            table, achieved = _build_once(Ls, umax, width, order, theta_panels)
            if achieved <= tol:
                return table
            width *= 0.5
            theta_panels *= 2
        raise AccuracyError(f"weight table for Ls={list(Ls)} missed tol={tol:g}", achieved)


def _bary_eval(values: np.ndarray, width: float, u: np.ndarray) -> np.ndarray:
    panels, order = values.shape
    x, bw = _cheb_points(order)
    shape = u.shape
    u = u.ravel()
    out = np.full(u.shape, np.inf)
    # beyond the table the weight is not resolved; u = inf (lambda = 0) stays inf
    umax = panels * width
    if np.any(np.isfinite(u) & (u > umax * (1 + 1e-12))):
        raise AccuracyError(f"weight requested beyond the table end u={umax:g}", math.inf)
    ok = np.isfinite(u)
    uu = np.minimum(u[ok], umax)
    p = np.minimum((uu / width).astype(int), panels - 1)
    t = 2.0 * (uu - p * width) / width - 1.0
    d = t[:, None] - x[None, :]
    exact = d == 0.0
    d[exact] = 1.0
    c = bw[None, :] / d
    f = values[p]
    val = np.sum(c * f, axis=1) / np.sum(c, axis=1)
    hit = exact.any(axis=1)
    if hit.any():
        val[hit] = f[hit][exact[hit]]
    out[ok] = val
    return out.reshape(shape)


def _convolve_level(
    u: np.ndarray, prev: Callable[[np.ndarray], np.ndarray], L: int, theta_panels: int
) -> np.ndarray:
    # V_k(u) = 2 int_0^S V_{k-1}(sqrt(S - s)) w(e^{-s}; L) ds with S = u^2,
    # mapped by s = S sin^2(theta) so both endpoint powers become analytic
    th, tw = composite_nodes(0.0, 0.5 * np.pi, theta_panels, 20)
    S = (u * u)[:, None]
    sin, cos = np.sin(th)[None, :], np.cos(th)[None, :]
    s = S * sin * sin
    up = np.sqrt(S) * cos
    integrand = prev(up) * _w1_of_s(s, L) * S * 2.0 * sin * cos
    return 2.0 * integrand @ tw


def _build_once(Ls, umax, width, order, theta_panels):
    panels = int(math.ceil(umax / width - 1e-12))
    x, _ = _cheb_points(order)
    left = np.arange(panels) * width
    nodes = left[:, None] + 0.5 * width * (x[None, :] + 1.0)
    between = np.concatenate([[-1.0], 0.5 * (x[1:] + x[:-1])])
    check = left[:, None] + 0.5 * width * (between[None, :] + 1.0)
    check[0, 0] = 0.5 * width * (x[0] + 1.0) * 0.5

    def first(uu):
        return _w1_of_s(uu * uu, Ls[0])

    prev = first
    achieved = 0.0
    vals = None
    for L in Ls[1:]:
        vals = _convolve_level(nodes.ravel(), prev, L, theta_panels).reshape(nodes.shape)
        direct = _convolve_level(check.ravel(), prev, L, theta_panels)
        coarse = _convolve_level(check.ravel(), prev, L, theta_panels // 2)
        interp = _bary_eval(vals, width, check.ravel())
        achieved = max(
            achieved, float(np.max(np.abs(interp - direct))), float(np.max(np.abs(direct - coarse)))
        )
        frozen = vals.copy()
        prev = lambda uu, f=frozen: _bary_eval(f, width, uu)  # noqa: E731
    table = WeightTable(tuple(Ls), panels * width, width, order, vals, achieved)
    return table, achieved


@lru_cache(maxsize=32)
def _cached_table(Ls: Tuple[int, ...], umax: float, tol: float) -> WeightTable:
    return WeightTable.build(Ls, umax=umax, tol=tol)


# -- weight facade ----------------------------------------------------------------------


class RealWeight:
    """The real weight ``w_r^{(m)}`` with the moment integrals built on it.

    For one factor the closed form and incomplete beta functions are used;
    for several factors a :class:`WeightTable` backs every evaluation.
    """

    def __init__(self, Ls: Sequence[int], tol: float = 1e-10, umax: Optional[float] = None):
        self.Ls = tuple(sorted(int(L) for L in Ls))
        if not self.Ls or any(L < 1 for L in self.Ls):
            raise ValueError(f"truncations must be positive, got {Ls}")
        self.m = len(self.Ls)
        if self.m == 1:
            self.table = None
            self.umax = U_MAX_M1
        else:
            self.umax = umax or U_MAX_PRODUCT
            self.table = _cached_table(self.Ls, float(self.umax), float(tol))

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if np.any(np.abs(lam) >= 1):
            raise ValueError("the weight lives on |lambda| < 1")
        if self.m == 1:
            return weight_m1(lam, self.Ls[0])
        out = self.table(lam)
        return float(out) if out.ndim == 0 else out

    def v_of_u(self, u: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return _w1_of_s(u * u, self.Ls[0])
        return self.table.v_of_u(u)

    def u_measure(self, u: np.ndarray) -> np.ndarray:
        """``w(exp(-u^2)) * 2u exp(-u^2)``, the weight as a density in ``u``."""
        if self.m == 1:
            L = self.Ls[0]
            s = u * u
            # (1 - e^{-2s})^{L/2-1} * 2u stays finite at u -> 0 even for L = 1
            return weight_constant(L) * 2.0 * u * np.exp(-s) * (-np.expm1(-2.0 * s)) ** (L / 2 - 1)
        return self.table.v_of_u(u) * 2.0 * u * np.exp(-u * u)

    def half_moment(self, j: int) -> float:
        return half_moment(j, self.Ls)

    def lower_moment(self, y: float, j: int) -> float:
        """``int_0^y w(v) v^j dv`` for ``0 <= y < 1``."""
        if y <= 0.0:
            return 0.0
        if self.m == 1:
            L = self.Ls[0]
            a = (j + 1) / 2
            return 0.5 * weight_constant(L) * special.beta(a, L / 2) * special.betainc(a, L / 2, y * y)
        if y > 0.5:
            return self.half_moment(j) - self.upper_moment(y, j)
        return _u_integral(self, math.sqrt(-math.log(y)), self.umax, j)

    def upper_moment(self, y: float, j: int) -> float:
        """``int_y^1 w(v) v^j dv`` for ``0 <= y < 1``."""
        if self.m == 1:
            L = self.Ls[0]
            a = (j + 1) / 2
            return 0.5 * weight_constant(L) * special.beta(a, L / 2) * special.betaincc(a, L / 2, y * y)
        if y <= 0.5:
            return self.half_moment(j) - self.lower_moment(y, j)
        return _u_integral(self, 0.0, math.sqrt(-math.log(y)), j)


def _panels_for(a: float, b: float, width: float = 0.4) -> int:
    return max(1, int(math.ceil((b - a) / width)))


def _u_integral(W: RealWeight, a: float, b: float, j: int) -> float:
    # int_a^b w(e^{-u^2}) e^{-j u^2} 2u e^{-u^2} du
    if b <= a:
        return 0.0
    nodes, weights = composite_nodes(a, b, _panels_for(a, b), 20)
    return float(np.dot(weights, W.u_measure(nodes) * np.exp(-j * nodes * nodes)))


def real_weight(spec_or_Ls, tol: float = 1e-10) -> RealWeight:
    Ls = spec_or_Ls.Ls if isinstance(spec_or_Ls, EnsembleSpec) else tuple(spec_or_Ls)
    return _real_weight(tuple(sorted(Ls)), tol)


@lru_cache(maxsize=32)
def _real_weight(Ls: Tuple[int, ...], tol: float) -> RealWeight:
    return RealWeight(Ls, tol=tol)


def weight_product(lam, spec, tol: float = 1e-10):
    """``w_r^{(m)}(lambda)`` to absolute tolerance ``tol``.

    The table is extended when ``lambda`` is smaller than its default range.

    Raises
    ------
    AccuracyError
        When the table cannot reach ``tol``.
    ValueError
        For ``|lambda| >= 1``.
    """
    Ls = spec.Ls if isinstance(spec, EnsembleSpec) else tuple(spec)
    lam_arr = np.abs(np.asarray(lam, dtype=float))
    if np.any(lam_arr >= 1):
        raise ValueError("the weight lives on |lambda| < 1")
    if len(Ls) == 1:
        return weight_m1(lam, Ls[0])
    small = lam_arr[lam_arr > 0]
    umax = U_MAX_PRODUCT
    if small.size:
        need = math.sqrt(-math.log(float(small.min())))
        if need > umax:
            umax = float(math.ceil(need))
    table = _cached_table(tuple(sorted(Ls)), umax, float(tol))
    out = table(lam_arr)
    return float(out) if out.ndim == 0 else out


# -- kernel -----------------------------------------------------------------------------


def kernel_coefficients(spec: EnsembleSpec) -> np.ndarray:
    """``c_j = prod_i (L_i+j)!/(L_i! j!)`` for ``j = 0..N-2`` by running products."""
    n = max(spec.N - 1, 0)
    c = np.empty(n)
    val = 1.0
    for j in range(n):
        c[j] = val
        for L in spec.Ls:
            val *= (L + j + 1) / (j + 1)
    return c


LOG_SPACE_FROM = 64


def _log_kernel_coefficients(spec: EnsembleSpec) -> np.ndarray:
    j = np.arange(max(spec.N - 1, 0), dtype=float)
    out = np.zeros_like(j)
    for L in spec.Ls:
        out += special.gammaln(L + j + 1) - special.gammaln(L + 1) - special.gammaln(j + 1)
    return out


def _series(coef: np.ndarray, logc: Optional[np.ndarray], t: np.ndarray) -> np.ndarray:
    # sum_j c_j t^j; in log space once the coefficients get large
    if logc is None:
        return np.polyval(coef[::-1], t)
    j = np.arange(logc.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        la = np.log(np.abs(t))[:, None]
        terms = logc[None, :] + np.where(j[None, :] == 0, 0.0, j[None, :] * la)
    signs = np.where((t[:, None] < 0) & (j[None, :] % 2 == 1), -1.0, 1.0)
    return _signed_lse(terms, signs)


def _signed_lse(terms: np.ndarray, signs: np.ndarray) -> np.ndarray:
    val, sgn = special.logsumexp(terms, axis=1, b=signs, return_sign=True)
    return sgn * np.exp(val)


def _half_line_pieces(y: float, h: int, umax: float):
    # intervals in u for v = h*exp(-u^2) and the constant value of sgn(y - v) on each
    if y == 0.0 or (y > 0) != (h > 0):
        # y is on the other side of zero, so the sign is constant
        return [(0.0, umax, -float(h))]
    uc = min(math.sqrt(-math.log(abs(y))), umax)
    # |v| > |y| for u < uc; there v lies beyond y on its side
    inner = -1.0 if h > 0 else 1.0
    return [(0.0, uc, inner), (uc, umax, -inner)]


def _kernel_point(
    x: float, y: float, spec: EnsembleSpec, W: RealWeight, coef: np.ndarray, logc=None
) -> float:
    if abs(x) >= 1 or abs(y) >= 1:
        raise ValueError("kernel_S needs x, y in (-1, 1)")
    wx = float(W(x)) if (W.m == 1 or x != 0.0) else math.inf
    if math.isinf(wx):
        # product weights diverge logarithmically at the origin
        return math.inf
    total = 0.0
    if coef.size:
        width = min(0.4, 2.0 / math.sqrt(spec.N))
        for h in (1, -1):
            for a, b, sgn in _half_line_pieces(y, h, W.umax):
                if b <= a:
                    continue
                nodes, weights = composite_nodes(a, b, _panels_for(a, b, width), 20)
                v = h * np.exp(-nodes * nodes)
                vals = (x - v) * W.u_measure(nodes) * _series(coef, logc, x * v)
                total += sgn * float(np.dot(weights, vals))
    if total == 0.0:
        out = 0.0
    else:
        out = wx * total
    if spec.N % 2:
        out += wx * x ** (spec.N - 1) / full_moment(spec.N - 1, W.Ls)
    return out


def kernel_S(x, y, spec: EnsembleSpec, tol: float = 1e-10):
    """The kernel ``S(x, y)``; ``S(x, x)`` is the density of real eigenvalues.

    For odd ``N`` the term ``w(x) x^{N-1} / mu_N`` is included, so that
    ``int S(x, x) dx`` is the expected number of real eigenvalues for
    both parities.

    Parameters
    ----------
    x, y : float or array_like
        Points in (-1, 1); arrays broadcast.
    spec : EnsembleSpec
    tol : float
        Accuracy of the weight table (``m >= 2``).
    """
    W = real_weight(spec, tol)
    coef = kernel_coefficients(spec)
    logc = _log_kernel_coefficients(spec) if coef.size > LOG_SPACE_FROM else None
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.array([_kernel_point(float(a), float(b), spec, W, coef, logc) for a, b in zip(xb.ravel(), yb.ravel())])
    out = out.reshape(xb.shape)
    return float(out) if out.ndim == 0 else out


def density_real(x, spec: EnsembleSpec, tol: float = 1e-10):
    """Density of real eigenvalues, ``S(x, x)``."""
    return kernel_S(x, x, spec, tol)


def expected_reals_numeric(spec: EnsembleSpec, panels: int = 24, tol: float = 1e-10) -> float:
    """``int_{-1}^1 S(x, x) dx`` by quadrature in ``u``."""
    W = real_weight(spec, tol)
    coef = kernel_coefficients(spec)
    logc = _log_kernel_coefficients(spec) if coef.size > LOG_SPACE_FROM else None
    nodes, weights = composite_nodes(0.0, W.umax, panels, 16)
    xs = np.exp(-nodes * nodes)
    vals = np.array([_kernel_point(x, x, spec, W, coef, logc) for x in xs])
    return 2.0 * float(np.dot(weights, vals * 2.0 * nodes * xs))


# -- numeric moment matrix ---------------------------------------------------------------


def _outer(W: RealWeight, f: Callable[[float], float], k: int, panels: int) -> float:
    # int_0^1 w(y) y^k f(y) dy in the u variable
    nodes, weights = composite_nodes(0.0, W.umax, panels, 16)
    ys = np.exp(-nodes * nodes)
    inner = np.array([f(y) for y in ys])
    return float(np.dot(weights, W.u_measure(nodes) * ys ** k * inner))


def quadrature_alpha(j: int, k: int, spec, tol: float = 1e-10) -> float:
    """``int int w(x) w(y) x^{j-1} y^{k-1} sgn(y - x) dx dy`` numerically.

    The inner integral is split at ``x = y``.  Entries with ``j + k`` even
    vanish by parity.  ``a_{2J-1, 2K}`` of the exact path is
    ``quadrature_alpha(2J-1, 2K, spec)``.

    Raises
    ------
    AccuracyError
        When two outer resolutions disagree by more than ``tol`` (relative
        to the value when it exceeds one).
    """
    if j < 1 or k < 1:
        raise ValueError("indices start at 1")
    if (j + k) % 2 == 0:
        return 0.0
    Ls = spec.Ls if isinstance(spec, EnsembleSpec) else tuple(spec)
    W = real_weight(Ls, min(tol, 1e-10))
    n = j - 1
    if n % 2 == 0:
        f, sign = (lambda y: W.lower_moment(y, n)), 4.0
    else:
        f, sign = (lambda y: W.upper_moment(y, n)), -4.0
    coarse = sign * _outer(W, f, k - 1, 24)
    fine = sign * _outer(W, f, k - 1, 48)
    err = abs(fine - coarse)
    if err > tol * max(1.0, abs(fine)):
        raise AccuracyError(f"quadrature_alpha({j},{k}) for Ls={list(Ls)}", err)
    return fine


def generating_function_numeric(spec: EnsembleSpec, tol: float = 1e-10) -> Dict[int, float]:
    """Float coefficients of ``Z_N`` from quadrature moments (any truncations)."""
    N = spec.N
    if N == 1:
        return {1: 1.0}
    a = {}

    def alpha(jj, kk):
        if kk == 0:
            return 0.0
        if (jj, kk) not in a:
            a[(jj, kk)] = quadrature_alpha(2 * jj - 1, 2 * kk, spec, tol)
        return a[(jj, kk)]

    def b(jj, kk, t):
        skew = alpha(jj, kk) - float(skew_odd_coefficient(kk - 1, spec)) * alpha(jj, kk - 1)
        return (t - 1.0) * skew + (float(h_norm(jj - 1, spec)) if jj == kk else 0.0)

    n = (N + 1) // 2
    cols = n if N % 2 == 0 else n - 1
    deg = cols
    ts = np.exp(2j * np.pi * np.arange(deg + 1) / (deg + 1))
    dets = []
    for t in ts:
        M = np.zeros((n, n), dtype=complex)
        for jj in range(1, n + 1):
            for kk in range(1, cols + 1):
                M[jj - 1, kk - 1] = b(jj, kk, t)
            if N % 2:
                M[jj - 1, n - 1] = full_moment(2 * jj - 2, spec.Ls)
        dets.append(np.linalg.det(M))
    # c_p = (1/(d+1)) sum_k det(t_k) t_k^{-p}
    coeffs = np.array([np.sum(np.array(dets) * ts ** (-p)) / (deg + 1) for p in range(deg + 1)])
    logK = 0.0
    for L in spec.Ls:
        logK += 0.5 * N * (L * math.log(2) - math.lgamma(L + 1))
        for jj in range(1, N + 1):
            logK += math.lgamma((L + jj) / 2) - math.lgamma(jj / 2)
    K = math.exp(logK)
    shift = N % 2
    return {2 * p + shift: float(K * coeffs[p].real) for p in range(deg + 1)}


# -- closed forms for one factor ----------------------------------------------------------


def density_real_m1_closed(x, N: int, L: int):
    """Incomplete-beta form of the real density for ``m = 1``.

    Parameters
    ----------
    x : float or array_like
        Points with ``|x| < 1``.
    N, L : int
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise ValueError("density needs |x| < 1")
    s = 1.0 - x * x
    if N == 1:
        out = s ** (L / 2 - 1) / special.beta(0.5, L / 2)
    else:
        first = special.betainc(L + 1, N - 1, s) / (special.beta(L / 2, 0.5) * s)
        # in log space: the beta function underflows for large N, L
        with np.errstate(divide="ignore"):
            log_second = (
                (L - 2) / 2 * np.log(s)
                + (N - 1) * np.log(np.abs(x))
                - special.betaln(N / 2, L / 2)
                + np.log(special.betainc((N - 1) / 2, (L + 2) / 2, x * x))
            )
        second = np.exp(log_second)
        out = first + second
    return float(out) if out.ndim == 0 else out


def density_complex_m1_closed(z, N: int, L: int):
    """Density of complex eigenvalues for ``m = 1`` at ``z`` in the upper half disk."""
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    if np.any(r2 >= 1):
        raise ValueError("density needs |z| < 1")
    if np.any(z.imag <= 0):
        raise ValueError("density needs Im z > 0")
    if N == 1:
        out = np.zeros(z.shape)
        return float(out) if out.ndim == 0 else out
    y = z.imag
    one_m = np.abs(1.0 - z * z)
    if L == 1:
        out = 2 * y / (np.pi * one_m * (1 - r2) ** 2) * (1 - N * r2 ** (N - 1) + (N - 1) * r2 ** N)
    else:
        a2 = np.minimum((2 * y / one_m) ** 2, 1.0)
        tail = 0.5 * special.beta(0.5, (L - 1) / 2) * special.betaincc(0.5, (L - 1) / 2, a2)
        out = (
            2 * y * L * (L - 1) / np.pi
            * one_m ** (L - 2)
            / (1 - r2) ** (L + 1)
            * tail
            * special.betaincc(N - 1, L + 1, r2)
        )
    return float(out) if out.ndim == 0 else out
