"""Real Schur eigenvalues by Hessenberg reduction and Francis double-shift QR.

A real eigenvalue is one that deflates as a 1x1 block, or as one of the two
real roots of a 2x2 block; no threshold on imaginary parts is involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

__all__ = ["SpectrumSample", "SolverError", "hessenberg", "schur_eigenvalues", "real_schur_spectrum"]

EPS = np.finfo(float).eps
MAX_ITS = 60


class SolverError(RuntimeError):
    """QR iteration failed to deflate within the iteration budget."""


@numba.njit(cache=True)
def _hessenberg_inplace(a):
    n = a.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += a[i, k] * a[i, k]
        alpha = np.sqrt(alpha)
        if alpha == 0.0:
            continue
        if a[k + 1, k] > 0:
            alpha = -alpha
        vnorm2 = 0.0
        for i in range(k + 1, n):
            v[i] = a[i, k]
        v[k + 1] -= alpha
        for i in range(k + 1, n):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left reflection on rows k+1.., columns k..
        for j in range(k, n):
            s = 0.0
            for i in range(k + 1, n):
                s += v[i] * a[i, j]
            s *= beta
            for i in range(k + 1, n):
                a[i, j] -= s * v[i]
        # right reflection on all rows, columns k+1..
        for i in range(n):
            s = 0.0
            for j in range(k + 1, n):
                s += a[i, j] * v[j]
            s *= beta
            for j in range(k + 1, n):
                a[i, j] -= s * v[j]
        a[k + 1, k] = alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0


@numba.njit(cache=True)
def _sign(a, b):
    return abs(a) if b >= 0 else -abs(a)


@numba.njit(cache=True)
def _hqr(a, wr, wi, blocks):
    # eigenvalues of an upper Hessenberg matrix; blocks[i] = 1 for eigenvalues
    # that came out real.  Returns the number of reals, or -1 on failure.
    n = a.shape[0]
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(a[i, j])
    nn = n - 1
    t = 0.0
    nreal = 0
    x = y = z = w = p = q = r = s = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= EPS * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                blocks[nn] = 1
                nreal += 1
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = np.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + _sign(z, p)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                    blocks[nn - 1] = 1
                    blocks[nn] = 1
                    nreal += 2
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = z
                    wi[nn] = -z
                    blocks[nn - 1] = 2
                    blocks[nn] = 2
                nn -= 2
                break
            if its == MAX_ITS:
                return -1
            if its % 10 == 0 and its > 0:
                # exceptional shift
                t += x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u <= EPS * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            k = m
            while k <= nn - 1:
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = _sign(np.sqrt(p * p + q * q + r * r), p)
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
                k += 1
    return nreal


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Orthogonally similar upper Hessenberg form (Householder reflections)."""
    H = np.array(A, dtype=float, order="C", copy=True)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("need a square matrix")
    _hessenberg_inplace(H)
    return H


def schur_eigenvalues(A: np.ndarray):
    """Eigenvalues with their block type.

    Returns
    -------
    wr, wi : ndarray
        Real and imaginary parts.
    blocks : ndarray of int8
        1 where the eigenvalue came out of the iteration as real, 2 for
        members of a complex-conjugate 2x2 block.
    """
    H = hessenberg(A)
    n = H.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    blocks = np.zeros(n, dtype=np.int8)
    if n == 0:
        return wr, wi, blocks
    if not np.all(np.isfinite(H)):
        raise SolverError("matrix has non-finite entries")
    if _hqr(H, wr, wi, blocks) < 0:
        raise SolverError(f"QR iteration did not converge in {MAX_ITS} sweeps")
    return wr, wi, blocks


@dataclass
class SpectrumSample:
    """Eigenvalues of one realization.

    Attributes
    ----------
    reals : ndarray
        Real eigenvalues in deflation order.
    complex_pairs : ndarray of complex
        One representative with positive imaginary part per conjugate pair.
    index : int
        Realization index (-1 when not from a run).
    seed : tuple
        Seed material of the realization's stream.
    """

    reals: np.ndarray
    complex_pairs: np.ndarray
    index: int = -1
    seed: tuple = field(default_factory=tuple)

    @property
    def real_count(self) -> int:
        return int(self.reals.size)

    @property
    def N(self) -> int:
        return int(self.reals.size + 2 * self.complex_pairs.size)

    def eigenvalues(self) -> np.ndarray:
        c = self.complex_pairs
        return np.concatenate([self.reals.astype(complex), c, np.conj(c)])


def real_schur_spectrum(A: np.ndarray, index: int = -1, seed: tuple = ()) -> SpectrumSample:
    """Split the spectrum of ``A`` into reals and conjugate pairs by Schur blocks."""
    wr, wi, blocks = schur_eigenvalues(A)
    reals = wr[blocks == 1].copy()
    pair = (blocks == 2) & (wi > 0)
    return SpectrumSample(reals, wr[pair] + 1j * wi[pair], index, tuple(seed))
