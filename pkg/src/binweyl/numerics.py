"""Compensated floating-point building blocks for phase-accurate summation.

The Weyl-sum phases alpha * n**k wrap mod 1 up to ~2**63 times, while the
value of the sum only depends on the fractional parts.  Plain double
arithmetic loses ~8 digits of phase at n**k ~ 10**18, so fractional parts
are computed with error-free transformations (two_sum / two_prod) applied
to a double-double representation of alpha and an exact hi/err splitting
of the integer n**k.  All final reductions use exact summation (math.fsum)
so results are deterministic and independent of chunking.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant

RealLike = Union[int, float, str, Fraction]


def two_sum(a, b):
    """Error-free sum: returns (s, e) with s = fl(a+b) and s + e = a + b."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def two_prod(a, b):
    """Error-free product via Dekker splitting: (p, e), p + e = a * b."""
    p = a * b
    c = _SPLITTER * a
    ahi = c - (c - a)
    alo = a - ahi
    c = _SPLITTER * b
    bhi = c - (c - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def as_dd(x: RealLike) -> tuple[float, float]:
    """Double-double (hi, lo) representation of a real input.

    Fractions and decimal strings convert exactly to ~32 significant
    digits; floats carry no extra information and get lo = 0.
    """
    if isinstance(x, tuple):
        return x
    if isinstance(x, float):
        return (x, 0.0)
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, str):
        x = Fraction(x)
    hi = float(x)
    lo = float(x - Fraction(hi))
    return (hi, lo)


def dd_add(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    s, e = two_sum(a[0], b[0])
    e += a[1] + b[1]
    hi, lo = two_sum(s, e)
    return (hi, lo)


def dd_neg(a: tuple[float, float]) -> tuple[float, float]:
    return (-a[0], -a[1])


def dd_sub(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    return dd_add(a, dd_neg(b))


def dd_from_ratio(num: int, den: int) -> tuple[float, float]:
    return as_dd(Fraction(num, den))


def _split_int_pow(n: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact splitting n**k = hi + err with hi a rounded double, |err| <= 1024.

    Requires max(n)**k < 2**62 (int64 fast path); callers check.
    """
    nk = n.astype(np.int64)
    for _ in range(k - 1):
        nk = nk * n
    hi = nk.astype(np.float64)
    err = (nk - hi.astype(np.int64)).astype(np.float64)
    return hi, err


def frac_alpha_npow(alpha: tuple[float, float], n: np.ndarray, k: int) -> np.ndarray:
    """Fractional parts of alpha * n**k, accurate to ~1e-14 for n**k < 2**62."""
    a_hi, a_lo = alpha
    x_hi, x_err = _split_int_pow(n, k)
    p, e = two_prod(a_hi, x_hi)
    out = p % 1.0
    out += e % 1.0
    p2, e2 = two_prod(a_lo, x_hi)
    out += p2 % 1.0
    out += e2
    p3, e3 = two_prod(a_hi, x_err)
    out += p3 % 1.0
    out += e3
    out += a_lo * x_err
    return out % 1.0


def _frac_alpha_pow_bigint(alpha: tuple[float, float], n_values, k: int) -> np.ndarray:
    """Python-int fallback of frac_alpha_npow for n**k >= 2**62 (slow)."""
    a_hi, a_lo = alpha
    out = np.empty(len(n_values), dtype=np.float64)
    for i, n in enumerate(n_values):
        nk = int(n) ** k
        x_hi = float(nk)
        x_err = float(nk - int(x_hi))
        p, e = two_prod(a_hi, x_hi)
        acc = p % 1.0 + e % 1.0
        p2, e2 = two_prod(a_lo, x_hi)
        acc += p2 % 1.0 + e2
        p3, e3 = two_prod(a_hi, x_err)
        acc += p3 % 1.0 + e3 + a_lo * x_err
        out[i] = acc % 1.0
    return out


def frac_phases(coeffs: Iterable[tuple[int, tuple[float, float]]], n: np.ndarray) -> np.ndarray:
    """Fractional parts of sum_j alpha_j * n**k_j for int64 n >= 1."""
    total = np.zeros(n.shape, dtype=np.float64)
    nmax = int(n.max()) if n.size else 0
    for k, alpha in coeffs:
        if nmax and nmax**k < 2**62:
            total += frac_alpha_npow(alpha, n, k)
        else:
            total += _frac_alpha_pow_bigint(alpha, n, k)
    return total % 1.0


def cexp_sum(phases: np.ndarray) -> complex:
    """Exactly-rounded sum of e(phases) = exp(2*pi*i*phases)."""
    theta = (2.0 * np.pi) * phases
    return complex(math.fsum(np.cos(theta)), math.fsum(np.sin(theta)))


class Neumaier:
    """Running compensated (Kahan-Neumaier) accumulator for floats."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c
