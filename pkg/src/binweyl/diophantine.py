"""Continued fractions, Dirichlet approximation and modulus exponent splitting.

All fraction comparisons run in exact integer arithmetic; real inputs are
carried as exact Fractions.  Plain floats convert exactly (they are dyadic
rationals), which keeps convergents faithful up to denominators ~2**26;
decimal strings or the built-in tokens (sqrt2, golden, e, pi-frac:<p>/<q>)
extend that to ~10**15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

import numpy as np

from .arith import factorize

RealInput = Union[int, float, str, Fraction]

_FLOAT_Q_LIMIT = 1 << 26  # half the 53-bit precision of a double input
_EXACT_Q_LIMIT = 10**15

_E_40 = Fraction("2.7182818284590452353602874713526624977572")
_PI_40 = Fraction("3.1415926535897932384626433832795028841971")


def real_from_token(token: RealInput) -> Fraction:
    """Exact rational stand-in for a real input.

    Accepts Fractions, ints, floats (converted exactly), decimal strings,
    and the tokens sqrt2, golden, e, pi-frac:<p>/<q> (40-digit accuracy).
    """
    if isinstance(token, Fraction):
        return token
    if isinstance(token, (int, float)):
        return Fraction(token)
    s = token.strip()
    if s == "sqrt2":
        return Fraction(isqrt(2 * 10**80), 10**40)
    if s == "golden":
        return Fraction(isqrt(5 * 10**80) + 10**40, 2 * 10**40)
    if s == "e":
        return _E_40
    if s.startswith("pi-frac:"):
        num, _, den = s[len("pi-frac:") :].partition("/")
        return _PI_40 * Fraction(int(num), int(den or "1"))
    return Fraction(s)


def _q_limit(token: RealInput) -> int:
    return _FLOAT_Q_LIMIT if isinstance(token, float) else _EXACT_Q_LIMIT


@dataclass(frozen=True)
class Convergent:
    """A continued-fraction convergent c/q of gamma with err = gamma - c/q."""

    c: int
    q: int
    err: float


def continued_fraction(gamma: RealInput, n: int) -> list[Convergent]:
    """First n convergents of gamma by the standard recurrence.

    Stops early when the expansion terminates (rational input) or when the
    denominator outruns the input's precision; the returned list length
    reports how many convergents were produced.  Every convergent satisfies
    |gamma - c/q| <= 1/q**2 relative to the exact rational input.
    """
    if n < 1:
        raise ValueError("need n >= 1 convergents")
    g = real_from_token(gamma)
    limit = _q_limit(gamma)
    num, den = g.numerator, g.denominator
    h_prev, h = 1, 0  # numerators (indices -1, -2)
    k_prev, k = 0, 1  # denominators
    out: list[Convergent] = []
    while den and len(out) < n:
        a, rem = divmod(num, den)
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        if k_prev > limit:
            break
        out.append(Convergent(h_prev, k_prev, float(g - Fraction(h_prev, k_prev))))
        num, den = den, rem
    return out


def odd_convergent(gamma: RealInput, qmin: int) -> Convergent:
    """First convergent with odd denominator q >= qmin.

    Successive convergent denominators are coprime, so one of any two
    consecutive ones is odd and the search succeeds unless precision runs out.
    """
    for conv in continued_fraction(gamma, 200):
        if conv.q >= qmin and conv.q % 2 == 1:
            return conv
    raise ValueError(f"no odd convergent with q >= {qmin} before precision exhausted")


def dirichlet_approx(alpha: RealInput, qbound: float) -> tuple[int, int, float]:
    """(a, q, beta) with gcd(a, q) = 1, q <= qbound, |alpha - a/q| <= 1/(q*qbound).

    The last convergent with denominator <= qbound does the job: either the
    expansion terminated there (beta = 0) or the next denominator exceeds
    qbound and |alpha - a/q| < 1/(q*q_next) <= 1/(q*qbound).
    """
    if qbound < 1:
        raise ValueError("qbound must be >= 1")
    g = real_from_token(alpha)
    best = None
    convs = continued_fraction(alpha, 200)
    for conv in convs:
        if conv.q <= qbound:
            best = conv
    if best is None:  # cannot happen: q0 = 1
        a = round(g)
        return int(a), 1, float(g - a)
    err = g - Fraction(best.c, best.q)
    if not (best is convs[-1] and err == 0):
        assert abs(err) <= Fraction(1, best.q) / Fraction(qbound)
    return best.c, best.q, float(err)


@dataclass(frozen=True)
class ExponentSplit:
    """q = q2 * q3 split by prime-power exponent: t <= 2 into q2, t >= 3 into q3.

    saving = sqrt(q2) * cbrt(q3) is the denominator of the cubic
    complete-sum bound |S(q; b, a)| << q**(1+eps) / saving.
    """

    q2: int
    q3: int
    saving: float


def exponent_split(q: int) -> ExponentSplit:
    if q < 1:
        raise ValueError("q must be >= 1")
    q2 = q3 = 1
    for p, t in factorize(q):
        if t <= 2:
            q2 *= p**t
        else:
            q3 *= p**t
    return ExponentSplit(q2, q3, math.sqrt(q2) * q3 ** (1.0 / 3.0))


def _cubefull_parts(qmax: int) -> np.ndarray:
    """q3(q) for q = 0..qmax: the product of prime powers p**t || q with t >= 3."""
    q3 = np.ones(qmax + 1, dtype=np.int64)
    p = 2
    while p**3 <= qmax:
        if all(p % r for r in range(2, isqrt(p) + 1)):
            pe = p**3
            q3[pe::pe] *= pe
            pe *= p
            while pe <= qmax:
                q3[pe::pe] *= p
                pe *= p
        p += 1
    return q3


def gamma0_violations(
    gamma: RealInput, delta: float, qmax: int
) -> list[tuple[int, int]]:
    """All (q, c), 2 <= q <= qmax, gcd(c, q) = 1, with
    |gamma - c/q| <= q2**(-2-delta) * q3**(-4/3-delta).

    q = 1 is excluded: every real lies within 1 of an integer, so such
    pairs carry no approximation content.  For q >= 2 the admissible window
    is shorter than the gap 1/q between fractions, so only the nearest
    numerator can qualify.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not 2 <= qmax <= 10**6:
        raise ValueError("qmax must lie in [2, 10**6]")
    g = real_from_token(gamma)
    gf = float(g)
    q = np.arange(qmax + 1, dtype=np.int64)
    q3 = _cubefull_parts(qmax)
    q2 = q[2:] // q3[2:]
    bound = q2.astype(float) ** (-2.0 - delta) * q3[2:].astype(float) ** (-4.0 / 3.0 - delta)
    c0 = np.round(gf * q[2:].astype(float))
    dist = np.abs(gf * q[2:].astype(float) - c0) / q[2:].astype(float)
    candidates = np.nonzero(dist <= bound + 1e-9)[0]
    out = []
    for idx in candidates:
        qq = int(idx) + 2
        cc = int(c0[idx])
        if gcd(cc, qq) != 1:
            continue
        if abs(float(g - Fraction(cc, qq))) <= bound[idx]:
            out.append((qq, cc))
    return out


def khinchine_minimum(gamma: RealInput, qmax: int) -> float:
    """min over 1 <= q <= qmax of q**2 * log(2q)**2 * |gamma - c/q| (nearest c).

    Almost-every gamma keeps this positive; the measured minimum is reported
    as evidence, never as a certified constant.
    """
    gf = float(real_from_token(gamma))
    q = np.arange(1, qmax + 1, dtype=np.float64)
    dist = np.abs(gf * q - np.round(gf * q))
    vals = q * np.log(2.0 * q) ** 2 * dist
    return float(vals.min())
