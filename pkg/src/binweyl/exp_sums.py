"""Complete exponential sums S(q; a1, ak) = sum_{x=1}^{q} e((a1*x + ak*x**k)/q).

Phases are reduced mod q in exact integer arithmetic (modular exponentiation
for x**k) before any conversion to floating point, so values are free of
phase drift for any modulus the direct O(q) loop can afford.  A multiplicative
splitting over coprime factors reduces composite moduli to prime powers, and
squares of primes p > 3 in the cubic case collapse to at most two terms via
the solutions of b + 3*a*u**2 = 0 (mod p).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .arith import ext_gcd, factorize, inv_mod, sqrt_mod

_DIRECT_LIMIT = 2**31


@dataclass(frozen=True)
class CompleteSumArgs:
    """Arguments of a binomial complete sum; value depends on residues mod q."""

    q: int
    a1: int
    ak: int
    k: int = 3

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("modulus q must be >= 1")
        if self.k < 2:
            raise ValueError("degree k must be >= 2")


def _pow_mod_vec(x: np.ndarray, k: int, q: int) -> np.ndarray:
    """x**k mod q elementwise; q < 2**31 keeps products inside int64."""
    r = np.ones_like(x)
    b = x % q
    e = k
    while e:
        if e & 1:
            r = (r * b) % q
        b = (b * b) % q
        e >>= 1
    return r


def _roots_table(q: int) -> np.ndarray:
    j = np.arange(q, dtype=np.float64)
    return np.exp((2j * np.pi / q) * j)


def complete_sum_direct(q: int, a1: int, ak: int, k: int = 3) -> complex:
    """Direct O(q) evaluation with exact integer phase reduction."""
    CompleteSumArgs(q, a1, ak, k)
    if q == 1:
        return complex(1.0, 0.0)
    if q >= _DIRECT_LIMIT:
        raise ValueError(f"direct summation refuses q >= 2**31 (got {q})")
    a1 %= q
    ak %= q
    x = np.arange(1, q + 1, dtype=np.int64)
    phase = (a1 * x + ak * _pow_mod_vec(x, k, q)) % q
    theta = (2.0 * np.pi) * (phase / q)
    return complex(np.cos(theta).sum(), np.sin(theta).sum())


def complete_sum_batch(q: int, a1s, aks, k: int = 3) -> np.ndarray:
    """S(q; a1, ak) for paired coefficient arrays, sharing the x**k table."""
    if q < 1:
        raise ValueError("modulus q must be >= 1")
    a1s = np.asarray(a1s, dtype=np.int64) % q
    aks = np.asarray(aks, dtype=np.int64) % q
    if q == 1:
        return np.ones(a1s.shape, dtype=np.complex128)
    x = np.arange(1, q + 1, dtype=np.int64)
    xk = _pow_mod_vec(x, k, q)
    table = _roots_table(q)
    out = np.empty(a1s.shape, dtype=np.complex128)
    step = max(1, int(4e6 // q))
    for lo in range(0, a1s.size, step):
        ph = (a1s[lo : lo + step, None] * x[None, :] + aks[lo : lo + step, None] * xk[None, :]) % q
        out[lo : lo + step] = table[ph].sum(axis=1)
    return out


def complete_sum_all_linear(q: int, ak: int, k: int = 3) -> np.ndarray:
    """S(q; b, ak) for every b = 0..q-1 at once.

    With v_y = e(ak * y**k / q) the sum over a full residue system reads
    S(b) = sum_y v_y e(b*y/q), which is q * ifft(v) evaluated at b.  This
    is an exact finite rearrangement, not an approximation.
    """
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    y = np.arange(q, dtype=np.int64)
    v = _roots_table(q)[(ak % q) * _pow_mod_vec(y, k, q) % q]
    return q * np.fft.ifft(v)


def complete_sum_shifted_cubic_all(q: int, c: int) -> np.ndarray:
    """S(q; a - c, a) for the cubic binomial, every a = 0..q-1 at once.

    Rearranged over the residue histogram of x + x**3:  with
    w_y = sum_{x: x + x**3 = y (q)} e(-c*x/q) one has
    S(a) = sum_y w_y e(a*y/q) = q * ifft(w)[a].
    """
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    x = np.arange(q, dtype=np.int64)
    y = (x + _pow_mod_vec(x, 3, q)) % q
    ph = _roots_table(q)[(-c % q) * x % q]
    w_re = np.bincount(y, weights=ph.real, minlength=q)
    w_im = np.bincount(y, weights=ph.imag, minlength=q)
    return q * np.fft.ifft(w_re + 1j * w_im)


def complete_sum_prime_square_cubic(p: int, b: int, a: int) -> complex:
    """Fast cubic sum for modulus p**2, p prime > 3, gcd(a, p) = 1.

    Summing x = p*v + u kills every u with b + 3*a*u**2 != 0 (mod p); the
    surviving u (at most two, found by modular square root) contribute
    p * e((b*u + a*u**3)/p**2).  In particular |S| <= 2*p.
    """
    if p <= 3:
        raise ValueError("prime-square fast path needs p > 3")
    if a % p == 0:
        raise ValueError("top coefficient must be coprime to p")
    q = p * p
    b %= q
    a %= q
    rhs = (-b) * inv_mod(3 * a, p) % p
    roots = sqrt_mod(rhs, p)
    if not roots:
        return complex(0.0, 0.0)
    total = 0j
    for r in roots:
        u = r if r != 0 else p  # u ranges over 1..p
        phase = (b * u + a * u**3) % q
        total += cmath.exp(2j * cmath.pi * phase / q)
    return p * total


def _prime_power_sum(p: int, t: int, a1: int, ak: int, k: int) -> complex:
    m = p**t
    if k == 3 and t == 2 and p > 3 and ak % p != 0:
        return complete_sum_prime_square_cubic(p, a1, ak)
    return complete_sum_direct(m, a1, ak, k)


def complete_sum_crt(q: int, a1: int, ak: int, k: int = 3) -> complex:
    """Evaluation through the coprime splitting q = prod p**t.

    For q = r*s with (r, s) = 1 and r*r' + s*s' = 1 one has
    e(n/(r*s)) = e(n*s'/r) * e(n*r'/s), whence
    S(r*s; a1, ak) = S(r; s'*a1, s'*ak) * S(s; r'*a1, r'*ak).
    """
    CompleteSumArgs(q, a1, ak, k)
    if q == 1:
        return complex(1.0, 0.0)
    value = complex(1.0, 0.0)
    rem, b1, bk = q, a1, ak
    for p, t in factorize(q):
        m = p**t
        rem //= m
        if rem == 1:
            value *= _prime_power_sum(p, t, b1 % m, bk % m, k)
            break
        # m*m_inv + rem*rem_inv = 1, so 1/(m*rem) = rem_inv/m + m_inv/rem (mod 1)
        _, m_inv, rem_inv = ext_gcd(m, rem)
        w = rem_inv % m
        value *= _prime_power_sum(p, t, b1 * w % m, bk * w % m, k)
        b1 = b1 * (m_inv % rem) % rem
        bk = bk * (m_inv % rem) % rem
    return value
