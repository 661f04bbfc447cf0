"""Large-N laws for the real and complex spectra, with their distribution functions.

``alpha = N / (N + L)`` throughout.  Laws are returned as plain floats or
arrays; points outside the support give 0.

The real-eigenvalue scale ``sqrt((1-alpha)/(pi alpha))`` in the bulk density
and in the expected counts is the commonly quoted constant.  The limit of
the exact finite-N density is smaller by sqrt(2): at the origin the exact
density is ``1/B(L/2, 1/2) ~ sqrt(L/(2 pi))``, and the exact expected count
minus the corrected law tends to 1/2, as for real Ginibre matrices.  Both
versions are available; the ``-corrected`` selectors use ``2 pi``.
"""
from __future__ import annotations

import math
from typing import Callable, Dict

import numpy as np
from scipy import special

__all__ = [
    "LAWS",
    "asymptotic_laws",
    "law_cdf",
    "VARIANCE_RATIO",
    "real_bulk",
    "complex_bulk",
    "complex_bulk_m",
    "conj_real_density",
    "expected_reals_asymptotic",
    "edge_density",
    "edge_tail",
    "log_law",
]

VARIANCE_RATIO = 2.0 - math.sqrt(2.0)


def _support(x, edge):
    x = np.asarray(x, dtype=float)
    return x, np.abs(x) < edge


def _real_scale(corrected: bool) -> float:
    return 2 * math.pi if corrected else math.pi


def real_bulk(x, alpha: float, corrected: bool = False):
    """Limit of ``rho_real(x) / sqrt(N)`` for one factor."""
    x, inside = _support(x, math.sqrt(alpha))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = math.sqrt((1 - alpha) / (_real_scale(corrected) * alpha)) / (1 - x * x)
    return np.where(inside, val, 0.0)


def complex_bulk(r, alpha: float):
    """Limit of ``rho_complex(z) / N`` for one factor, as a function of ``|z|``."""
    r, inside = _support(r, math.sqrt(alpha))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (1 - alpha) / (math.pi * alpha) / (1 - r * r) ** 2
    return np.where(inside, val, 0.0)


def complex_bulk_m(r, alpha: float, m: int):
    """Limit of ``rho_complex(z) / N`` for ``m`` equal factors."""
    r, inside = _support(r, alpha ** (m / 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.abs(r) ** (2.0 / m)
        val = (1 - alpha) / (m * math.pi * alpha) * np.abs(r) ** (2.0 / m - 2) / (1 - q) ** 2
    return np.where(inside, val, 0.0)


def conj_real_density(x, alpha: float, m: int):
    """Normalised density of real eigenvalues for ``m`` equal factors."""
    x, inside = _support(x, alpha ** (m / 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        ax = np.abs(x)
        val = ax ** (1.0 / m - 1) / (1 - ax ** (2.0 / m)) / (2 * m * math.atanh(math.sqrt(alpha)))
    return np.where(inside, val, 0.0)


def expected_reals_asymptotic(N: float, alpha: float, m: int = 1, corrected: bool = False) -> float:
    """``2 sqrt(m N (1-alpha) / (pi alpha)) artanh(sqrt(alpha))``.

    With ``corrected=True`` the ``pi`` becomes ``2 pi``.
    """
    c = _real_scale(corrected)
    return 2 * math.sqrt(m * N * (1 - alpha) / (c * alpha)) * math.atanh(math.sqrt(alpha))


def edge_density(x, L: int):
    """Limit of ``rho_real(1 - x/N) / N`` for fixed ``L``, ``x > 0``.

    Obtained as the limit of the exact one-factor density; ``P`` is the
    regularised lower incomplete gamma function::

        x^{L/2-1} e^{-x} (1 - P(L/2+1, x)) / (2 Gamma(L/2))
            + P(L+1, 2x) / (2 x B(L/2, 1/2))
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("edge density needs x > 0")
    B = special.beta(L / 2, 0.5)
    first = x ** (L / 2 - 1) * np.exp(-x) * special.gammaincc(L / 2 + 1, x) / (2 * math.gamma(L / 2))
    return first + special.gammainc(L + 1, 2 * x) / (2 * x * B)


def edge_tail(x, L: int):
    """Leading large-``x`` behaviour of :func:`edge_density`: ``1/(2 B(L/2,1/2) x)``."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (2 * special.beta(L / 2, 0.5) * x)


def log_law(N: float, L: int) -> float:
    """Expected real count for fixed ``L``: ``log N / B(L/2, 1/2)``."""
    return math.log(N) / special.beta(L / 2, 0.5)


def _scalar(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


LAWS: Dict[str, Callable] = {
    "real-bulk-alpha": lambda x, alpha, **_: real_bulk(x, alpha),
    "complex-bulk-alpha": lambda r, alpha, **_: complex_bulk(r, alpha),
    "complex-bulk-m": lambda r, alpha, m, **_: complex_bulk_m(r, alpha, m),
    "conj1": lambda x, alpha, m, **_: conj_real_density(x, alpha, m),
    "conj2": lambda N, alpha, m, **_: expected_reals_asymptotic(N, alpha, m),
    "E-asym-m1": lambda N, alpha, **_: expected_reals_asymptotic(N, alpha, 1),
    "edge-density": lambda x, L, **_: edge_density(x, L),
    "edge-tail": lambda x, L, **_: edge_tail(x, L),
    "log-law": lambda N, L, **_: log_law(N, L),
    "real-bulk-alpha-corrected": lambda x, alpha, **_: real_bulk(x, alpha, True),
    "conj2-corrected": lambda N, alpha, m, **_: expected_reals_asymptotic(N, alpha, m, True),
    "E-asym-m1-corrected": lambda N, alpha, **_: expected_reals_asymptotic(N, alpha, 1, True),
}

_ALIASES = {"real-bulk-α": "real-bulk-alpha", "complex-bulk-α": "complex-bulk-alpha"}


def asymptotic_laws(selector: str, **params):
    """Evaluate a named large-N law.

    Parameters
    ----------
    selector : str
        One of ``real-bulk-alpha``, ``complex-bulk-alpha``, ``complex-bulk-m``,
        ``conj1``, ``conj2``, ``edge-density``, ``edge-tail``, ``log-law``,
        ``E-asym-m1``, and ``real-bulk-alpha-corrected``, ``conj2-corrected``,
        ``E-asym-m1-corrected``.
    **params
        ``x`` (or ``r`` for the complex laws), ``alpha``, ``m``, ``N``, ``L``
        as the law needs.

    Examples
    --------
    >>> round(asymptotic_laws("real-bulk-alpha", x=0.0, alpha=0.5), 6)
    0.56419
    """
    key = _ALIASES.get(selector, selector)
    if key not in LAWS:
        raise KeyError(f"unknown law {selector!r}; choose from {sorted(LAWS)}")
    if key.startswith("complex") and "r" not in params and "x" in params:
        params["r"] = params.pop("x")
    return _scalar(LAWS[key](**params))


def law_cdf(selector: str, x, alpha: float, m: int = 1):
    """Distribution functions of the normalised laws used for histogram checks.

    ``conj1`` is the real-eigenvalue law on its support; ``modulus`` is the
    law of ``|z|`` under the complex density for ``m`` factors, normalised
    to one.
    """
    x = np.asarray(x, dtype=float)
    if selector == "conj1":
        edge = alpha ** (m / 2)
        ax = np.minimum(np.abs(x), edge)
        val = 0.5 + np.sign(x) * np.arctanh(ax ** (1.0 / m)) / (2 * math.atanh(math.sqrt(alpha)))
        return _scalar(val)
    if selector == "modulus":
        q = np.minimum(np.clip(x, 0, None) ** (2.0 / m), alpha)
        return _scalar(np.minimum((1 - alpha) / alpha * q / (1 - q), 1.0))
    raise KeyError(f"no distribution function for {selector!r}")
