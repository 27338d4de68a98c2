"""Divisor-indexed main-term approximations of binomial Weyl sums.

For alpha_1 = a1/q + beta1, alpha_k = ak/q + betak with gcd(q, ak) = 1 and
|beta1| <= 1/(2q), the sum f(alpha_1, alpha_k) is approximated by

    q**-1 * sum_d S(q; d*[[a1/d]], ak) * I(alpha_1 - [[a1/d]]/(q/d), betak)

where d runs over divisors of q, [[x]] is a closest integer to x, the sum
keeps one term per distinct numerator d*[[a1/d]] subject to
gcd([[a1/d]], q/d) = 1, and the term with d = gcd(a1, q) reproduces the
classical single-term approximation q**-1 S(q; a1, ak) I(beta1, betak).
All center fractions are handled in exact integer arithmetic; floating
point enters only in the final S * I evaluation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .arith import divisors
from .exp_sums import complete_sum_direct
from .numerics import RealLike, as_dd, dd_add, dd_from_ratio
from .oscillatory import integral_eval
from .weyl import Dyadic, Full, Range, weyl_sum


@dataclass(frozen=True)
class CalibrationConstants:
    """Measured stand-ins for the implicit constants in the asymptotic bounds.

    The analytic bounds carry unspecified constants and q**eps factors;
    the artifact fixes eps = 0.05 and calibrates each constant empirically.
    These values are reported alongside every diagnostic that uses them.
    """

    eps: float = 0.05
    main_term_C: float = 10.0       # |f - main| vs q**(1/2+eps) envelopes
    sum_saving_C: float = 4.0       # |S(q;b,a)| vs q**(1+eps)/saving
    sum_gcd_C: float = 4.0          # |S(q;a1,ak)| vs q**(1/2+eps) * gcd(q, a1)
    sum_degree_C: float = 4.0       # |S(q;a1,ak)| vs q**(1-1/k+eps)
    osc_pair_C: float = 4.0         # |I| vs |beta1|**-1 (1+Q**k|betak|)**(1/2)
    osc_second_C: float = 2.0       # |I| vs (|betak| Q**(k-2))**(-1/2)
    cubic_bound_C: float = 8.0      # uniform cubic sup bound
    witness_floor: float = 0.05     # witness |f| vs Q**(3/4-2*delta)


CALIBRATION = CalibrationConstants()


def log_factor(P: float) -> float:
    """log P, floored at 1 to stay meaningful for P <= e."""
    return math.log(max(P, math.e))


@dataclass(frozen=True)
class BinomialApprox:
    """Rational approximation data (a1/q + beta1, ak/q + betak) of degree k."""

    q: int
    a1: int
    ak: int
    beta1: float
    betak: float
    k: int = 3

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if gcd(self.q, self.ak) != 1:
            raise ValueError("top coefficient must be coprime to q")
        if abs(self.beta1) > 0.5 / self.q + 1e-15:
            raise ValueError("|beta1| must not exceed 1/(2q)")

    @property
    def alpha1(self) -> float:
        return self.a1 / self.q + self.beta1

    @property
    def alphak(self) -> float:
        return self.ak / self.q + self.betak

    def alpha1_dd(self) -> tuple[float, float]:
        return dd_add(dd_from_ratio(self.a1, self.q), as_dd(self.beta1))

    def alphak_dd(self) -> tuple[float, float]:
        return dd_add(dd_from_ratio(self.ak, self.q), as_dd(self.betak))

    @classmethod
    def from_alphas(cls, q, a1, ak, alpha1, alpha_k, k=3, betak=None):
        """Build from explicit alphas, checking consistency to 1e-12."""
        beta1 = alpha1 - a1 / q
        bk = betak if betak is not None else alpha_k - ak / q
        ma = cls(q, a1, ak, beta1, bk, k)
        if abs(ma.alpha1 - alpha1) > 1e-12 or abs(ma.alphak - alpha_k) > 1e-12:
            raise ValueError("alphas inconsistent with (a/q, beta) decomposition")
        return ma


def nearest_integers(num: int, den: int) -> list[int]:
    """All integers closest to num/den: one generically, two at half-integers.

    Exact rational comparison; the smaller candidate comes first.
    """
    if den < 1:
        raise ValueError("den must be >= 1")
    fl, r = divmod(num, den)
    if 2 * r < den:
        return [fl]
    if 2 * r > den:
        return [fl + 1]
    return [fl, fl + 1]


@dataclass(frozen=True)
class DivisorTerm:
    """One main-term summand: divisor d, rounding e = [[a1/d]], numerator d*e.

    center = e/(q/d) is the reduced fraction the term recenters the linear
    coefficient on; the d = gcd(a1, q) term (numerator a1) is the leading one.
    """

    d: int
    e: int
    numerator: int
    center: Fraction
    leading: bool


def divisor_terms(q: int, a1: int) -> list[DivisorTerm]:
    """All divisor terms of the main-term sum, one per distinct numerator.

    For each d | q both roundings of a1/d are considered at half-integer
    ties; candidates with gcd(e, q/d) != 1 drop out, which makes every
    surviving center fraction reduced and pairwise distinct.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    d_lead = gcd(a1, q) if a1 != 0 else q
    seen: set[int] = set()
    out: list[DivisorTerm] = []
    for d in divisors(q):
        for e in nearest_integers(a1, d):
            if gcd(e, q // d) != 1:
                continue
            numer = d * e
            if numer in seen:
                continue
            seen.add(numer)
            out.append(
                DivisorTerm(d, e, numer, Fraction(e, q // d), d == d_lead and numer == a1)
            )
    out.sort(key=lambda t: t.d)
    return out


def _range_interval(rng: Range) -> tuple[float, float]:
    if isinstance(rng, Full):
        return (0.0, float(rng.P))
    return (float(rng.Q), 2.0 * float(rng.Q))


def _term_value(ma: BinomialApprox, term: DivisorTerm, interval) -> complex:
    s = complete_sum_direct(ma.q, term.numerator % ma.q, ma.ak, ma.k)
    # alpha1 - center = (a1 - d*e)/q + beta1, small and exactly centered
    beta1p = float(Fraction(ma.a1 - term.numerator, ma.q)) + ma.beta1
    i_val = integral_eval(beta1p, ma.betak, ma.k, [interval])
    return s * i_val


def main_term(ma: BinomialApprox, rng: Range) -> complex:
    """q**-1 sum over divisor terms of S(q; d*e, ak) * I(alpha1 - e/(q/d), betak)."""
    interval = _range_interval(rng)
    total = complex(0.0, 0.0)
    for term in divisor_terms(ma.q, ma.a1):
        total += _term_value(ma, term, interval)
    return total / ma.q


def leading_term(ma: BinomialApprox, rng: Range) -> complex:
    """The classical single-term approximation q**-1 S(q; a1, ak) I(beta1, betak)."""
    s = complete_sum_direct(ma.q, ma.a1, ma.ak, ma.k)
    return s * integral_eval(ma.beta1, ma.betak, ma.k, [_range_interval(rng)]) / ma.q


def binomial_sum(ma: BinomialApprox, rng: Range) -> complex:
    """The Weyl sum f(alpha1, alphak) this data approximates."""
    return weyl_sum([(1, ma.alpha1_dd()), (ma.k, ma.alphak_dd())], rng)


def delta_classical(ma: BinomialApprox, rng: Range = None, P: float = None) -> complex:
    """f(alpha1, alphak) - q**-1 S(q; a1, ak) I(beta1, betak)."""
    if rng is None:
        rng = Full(P)
    return binomial_sum(ma, rng) - leading_term(ma, rng)


def delta_residual(ma: BinomialApprox, rng: Range = None, P: float = None) -> complex:
    """f minus the full divisor-term sum.

    Computed both directly and as delta_classical minus the secondary
    terms; the two decompositions must reconcile to 1e-9, which guards the
    leading-term bookkeeping.
    """
    if rng is None:
        rng = Full(P)
    interval = _range_interval(rng)
    f = binomial_sum(ma, rng)
    terms = divisor_terms(ma.q, ma.a1)
    values = [(_term_value(ma, t, interval) / ma.q, t.leading) for t in terms]
    full = sum(v for v, _ in values)
    residual = f - full
    secondary = sum(v for v, lead in values if not lead)
    alt = (f - sum(v for v, lead in values if lead)) - secondary
    if abs(residual - alt) > 1e-9 * (1.0 + abs(f)):
        warnings.warn("divisor-term decompositions failed to reconcile")
    return residual


def small_betak(ma: BinomialApprox, P: float) -> bool:
    """Tight top-coefficient regime |betak| <= 1/(4*k*q*P**(k-1))."""
    return abs(ma.betak) <= 1.0 / (4.0 * ma.k * ma.q * P ** (ma.k - 1))


def residual_envelope(
    ma: BinomialApprox, P: float, calib: CalibrationConstants = CALIBRATION
) -> float:
    """Envelope C * q**(1/2+eps) * (1 + |betak| P**k)**(1/2) * log P for |f - main|.

    In the tight top-coefficient regime the moment factor and the log drop out.
    """
    base = ma.q ** (0.5 + calib.eps)
    if small_betak(ma, P):
        return calib.main_term_C * base
    moment = math.sqrt(1.0 + abs(ma.betak) * P**ma.k)
    return calib.main_term_C * base * moment * log_factor(P)


def uniform_cubic_bound(
    ma: BinomialApprox, P: float, calib: CalibrationConstants = CALIBRATION
) -> tuple[float, float]:
    """(|f|, bound) for the cubic sup bound C*(P**(1+eps)/(q+q|b3|P**3)**(1/3) + P**(3/4+eps)).

    Requires k = 3 and the approximation quality q*(1 + P**3 |beta3|) <= 2*P**(3/2).
    """
    if ma.k != 3:
        raise ValueError("cubic bound needs k = 3")
    if ma.q * (1.0 + P**3 * abs(ma.betak)) > 2.0 * P**1.5:
        raise ValueError("approximation out of range: q(1+P^3|beta3|) > 2 P^(3/2)")
    value = abs(binomial_sum(ma, Full(P)))
    bound = calib.cubic_bound_C * (
        P ** (1.0 + calib.eps) / (ma.q + ma.q * abs(ma.betak) * P**3) ** (1.0 / 3.0)
        + P ** (0.75 + calib.eps)
    )
    return value, bound


def delta_scan(
    k: int,
    n_samples: int,
    qmax: int,
    pmax: float,
    seed: int,
    tight_top: bool,
    calib: CalibrationConstants = CALIBRATION,
) -> list[dict]:
    """Randomized scan rows comparing f, the main term and their difference.

    tight_top controls the betak regime: inside it the ratio is
    |f - main| / q**(1/2+eps); outside, betak is drawn up to min(q**-2,
    2000/P**k) (keeping quadrature affordable) and the ratio divides out
    the full envelope (1 + |betak| P**k)**(1/2) * log P.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_samples):
        q = int(rng.integers(1, qmax + 1))
        a1 = int(rng.integers(0, q)) if q > 1 else 0
        ak = int(rng.integers(1, q + 1))
        while gcd(ak, q) != 1:
            ak = int(rng.integers(1, q + 1))
        P = float(rng.uniform(100.0, pmax))
        beta1 = float(rng.uniform(-0.5, 0.5)) / q
        if tight_top:
            bk_cap = 1.0 / (4.0 * k * q * P ** (k - 1))
        else:
            bk_cap = min(1.0 / q**2, 2000.0 / P**k)
        betak = float(rng.uniform(-1.0, 1.0)) * bk_cap
        ma = BinomialApprox(q, a1, ak, beta1, betak, k)
        f = binomial_sum(ma, Full(P))
        main = main_term(ma, Full(P))
        diff = abs(f - main)
        denom = q ** (0.5 + calib.eps)
        if not tight_top:
            denom *= math.sqrt(1.0 + abs(betak) * P**k) * log_factor(P)
        rows.append(
            {
                "q": q,
                "a1": a1,
                "ak": ak,
                "beta1": beta1,
                "betak": betak,
                "P": P,
                "f_abs": abs(f),
                "main_abs": abs(main),
                "delta_abs": diff,
                "ratio": diff / denom,
            }
        )
    return rows
