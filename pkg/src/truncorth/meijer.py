"""Exact values of the Meijer G-functions at unit argument in the moment matrix.

The family evaluated here is

    G^{m+1,m}_{2m+1,2m+1}( 3/2-j,...,3/2-j ; u_1+k,...,u_m+k, 1
                           0, k,...,k ; 3/2-j-v_1,...,3/2-j-v_m | 1 )

with offsets ``u_i = v_i = L_i/2`` at the start.  Its Mellin-Barnes integrand
is ``-(1/s) prod_i Gamma(k-s)Gamma(j-1/2+s) / (Gamma(u_i+k-s)Gamma(j-1/2+v_i+s))``,
so for integer offsets it is a rational function of ``s`` and everything below
is exact rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .exact import PiLaurent, gamma_half

__all__ = [
    "UnsupportedExact",
    "ReductionBudgetExceeded",
    "GReductionState",
    "meijer_entry",
    "meijer_closed_m1",
    "meijer_closed_m2",
    "meijer_entry_odd_m1",
    "kernel_K",
    "reduce_state",
]

STEP_BUDGET = 5_000_000


class UnsupportedExact(ValueError):
    """No exact evaluation path exists for these truncations."""


class ReductionBudgetExceeded(RuntimeError):
    """The recurrence did not terminate within the step budget."""


@dataclass(frozen=True)
class GReductionState:
    """Indices (j, k) and per-factor offsets (u_i, v_i) of one G-function."""

    j: int
    k: int
    offsets: Tuple[Tuple[int, int], ...]

    @classmethod
    def initial(cls, j: int, k: int, Ls: Sequence[int]) -> "GReductionState":
        if any(L % 2 for L in Ls):
            raise UnsupportedExact("reduction needs every L_i even")
        return cls(j, k, tuple((L // 2, L // 2) for L in Ls))

    def key(self):
        # upper and lower parameters enter the recurrence independently,
        # so the value depends only on the two multisets of offsets
        us = tuple(sorted(u for u, _ in self.offsets))
        vs = tuple(sorted(v for _, v in self.offsets))
        return (self.j, self.k, us, vs)

    @property
    def measure(self) -> int:
        return sum(u + v for u, v in self.offsets)


def _g(two: int) -> PiLaurent:
    return gamma_half(two)


def _ratio(num: Sequence[int], den: Sequence[int]) -> PiLaurent:
    """Product of Gamma(n/2) over ``num`` divided by the same over ``den``."""
    out = PiLaurent.coerce(1)
    for t in num:
        out = out * _g(t)
    for t in den:
        out = out / _g(t)
    return out


# -- recurrence-based reduction --------------------------------------------


class _Reducer:
    def __init__(self, memo: bool = True):
        self.memo: Dict[tuple, Fraction] | None = {} if memo else None
        self.steps = 0

    def value(self, j: int, k: int, us: Tuple[int, ...], vs: Tuple[int, ...]) -> Fraction:
        self.steps += 1
        if self.steps > STEP_BUDGET:
            raise ReductionBudgetExceeded(f"more than {STEP_BUDGET} reduction steps")
        key = (j, k, us, vs)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        # zero offsets cancel a repeated parameter and drop out of the family
        us_a = tuple(u for u in us if u)
        vs_a = tuple(v for v in vs if v)
        if not vs_a:
            if not us_a:
                raise ValueError("degenerate G-function with all offsets zero")
            val = Fraction(0)
        elif not us_a:
            val = Fraction(1)
            h = Fraction(2 * j - 1, 2)
            for ell in vs_a:
                for t in range(ell):
                    val /= h + t
        else:
            # pair the smallest active upper offset with the smallest active lower one
            u0, v0 = us_a[0], vs_a[0]
            denom = Fraction(2 * (u0 + v0 + j + k) - 5, 2)
            us_down = tuple(sorted(us_a[1:] + (u0 - 1,)))
            vs_down = tuple(sorted(vs_a[1:] + (v0 - 1,)))
            val = (self.value(j, k, us_down, vs_a) + self.value(j, k, us_a, vs_down)) / denom
        if self.memo is not None:
            self.memo[key] = val
        return val


_SHARED = _Reducer(memo=True)


def reduce_state(state: GReductionState, memo: bool = True) -> Fraction:
    """Evaluate a reduction state exactly (rational for integer offsets)."""
    _, _, us, vs = state.key()
    if memo:
        _SHARED.steps = 0
        return _SHARED.value(state.j, state.k, us, vs)
    return _Reducer(memo=False).value(state.j, state.k, us, vs)


def meijer_entry(j: int, k: int, Ls: Sequence[int], memo: bool = True) -> PiLaurent:
    """Exact value of the G-function entering ``a_{2j-1,2k}``.

    All-even truncations use the recurrence reduction; a single odd
    truncation uses :func:`meijer_entry_odd_m1`.
    """
    _check_indices(j, k)
    Ls = tuple(Ls)
    if not Ls or any(L < 1 for L in Ls):
        raise ValueError(f"truncations must be positive integers, got {Ls}")
    if all(L % 2 == 0 for L in Ls):
        return PiLaurent.coerce(reduce_state(GReductionState.initial(j, k, Ls), memo=memo))
    if len(Ls) == 1:
        return meijer_entry_odd_m1(j, k, Ls[0])
    raise UnsupportedExact(
        f"no exact evaluation for odd truncations with m={len(Ls)} (Ls={list(Ls)})"
    )


def _check_indices(j, k):
    if j < 1 or k < 1:
        raise ValueError(f"indices must be positive, got j={j}, k={k}")


# -- closed forms ------------------------------------------------------------


def meijer_closed_m1(j: int, k: int, L: int) -> PiLaurent:
    """Finite gamma-ratio sum for a single even truncation."""
    _check_indices(j, k)
    if L < 2 or L % 2:
        raise ValueError(f"closed form needs even L >= 2, got {L}")
    # Gamma(j-1/2) / (Gamma(L/2) Gamma(L+j+k-3/2))
    pre = _ratio([2 * j - 1], [L, 2 * L + 2 * j + 2 * k - 3])
    total = PiLaurent()
    for ell in range(1, L // 2 + 1):
        total = total + _ratio(
            [2 * (j + k + ell) - 3, 2 * (L - ell)],
            [2 * (j + ell) - 1, L - 2 * ell + 2],
        )
    return pre * total


def kernel_K(j: int, k: int, p: int, q: int) -> PiLaurent:
    """The inner double-factor sum used by the two-factor closed form."""
    pre = _ratio([2 * j - 1], [2 * p, 2 * (p + q + j + k) - 3])
    total = PiLaurent()
    for ell in range(1, q + 1):
        total = total + _ratio(
            [2 * (j + k + ell) - 3, 2 * (p + q - ell)],
            [2 * (j + ell) - 1, 2 * (q - ell + 1)],
        )
    return pre * total


def meijer_closed_m2(j: int, k: int, L1: int, L2: int) -> PiLaurent:
    """Double gamma-ratio sum for two even truncations."""
    _check_indices(j, k)
    if L1 < 2 or L2 < 2 or L1 % 2 or L2 % 2:
        raise ValueError(f"closed form needs even L1, L2 >= 2, got {L1}, {L2}")
    total = PiLaurent()
    g_half = _g(2 * j - 1)
    for p in range(1, L1 // 2 + 1):
        fp = _ratio([2 * (L1 - p), 2 * (j + k + p) - 3], [L1, L1 - 2 * p + 2, 2 * (L1 + j + k) - 3])
        for q in range(1, L2 // 2 + 1):
            fq = _ratio(
                [2 * (L2 - q), 2 * (j + k + q) - 3], [L2, L2 - 2 * q + 2, 2 * (L2 + j + k) - 3]
            )
            tail = g_half * g_half / (_g(2 * (p + j) - 1) * _g(2 * (q + j) - 1))
            total = total + fp * fq * (kernel_K(j, k, p, q) + kernel_K(j, k, q, p) + tail)
    return total


def meijer_entry_odd_m1(j: int, k: int, L: int) -> PiLaurent:
    """G-function value for one odd truncation; a polynomial in 1/pi.

    For ``L >= 3`` this is the double gamma-ratio sum.  That sum is empty at
    ``L = 1`` even though the entry is not zero there, so ``L = 1`` is
    evaluated from the arcsine-weight integral instead.
    """
    _check_indices(j, k)
    if L < 1 or L % 2 == 0:
        raise ValueError(f"expected odd L >= 1, got {L}")
    if L == 1:
        return _odd_m1_arcsine(j, k)
    total = PiLaurent()
    for p in range(1, (L - 1) // 2 + 1):
        for q in range(1, k + 1):
            pre = _ratio(
                [2 * k, 2 * (p + q), 2 * (L - p - 1), 2 * (j + k - q) - 1],
                [L - 1, L + 1 - 2 * p, 2 * (k - q + 1), 2 * (j + k + L) - 3],
            )
            bracket = PiLaurent.coerce(1) / (_g(1) * _g(2 * (p + q) + 1)) + PiLaurent.coerce(
                1
            ) / (_g(2 * p + 1) * _g(2 * q + 1))
            total = total + pre * bracket
    return total


def _theta_sine_moment(n: int) -> Fraction:
    # int_0^{pi/2} theta sin^n(theta) d theta for odd n
    val = Fraction(1)
    for m in range(3, n + 1, 2):
        val = Fraction(m - 1, m) * val + Fraction(1, m * m)
    return val


def _odd_m1_arcsine(j: int, k: int) -> PiLaurent:
    # With x = sin(phi), y = sin(theta) the L = 1 weight is flat in the angle,
    # and a_{2j-1,2k} = (2/pi) T(j, k) with
    # T(j, k) = int_0^{pi/2} sin^{2k-1}(theta) int_0^theta sin^{2j-2}(phi) dphi dtheta.
    t = _theta_sine_moment(2 * k - 1)
    for i in range(1, j):
        t = Fraction(2 * i - 1, 2 * i) * t - Fraction(1, 2 * i * (2 * k + 2 * i - 1))
    # G = a * 2^L / L! = 2 a at L = 1
    return PiLaurent.monomial(4 * t, -2)


def prefactor_rational(Ls: Sequence[int]) -> Fraction:
    """prod_i L_i!/2^{L_i}, the scalar in front of the G-function."""
    out = Fraction(1)
    for L in Ls:
        out *= Fraction(math.factorial(L), 2 ** L)
    return out
