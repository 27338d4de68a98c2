"""Extremal growth of sup_alpha |f(alpha, alpha+gamma; Q)| along dyadic scales.

The lower-bound construction walks the continued fraction of gamma: an odd
convergent c/q pins beta1 = c/q - gamma with |beta1| <= q**-2, the top
coefficient is recentered exactly on a_k/q (so betak = 0), and for k = 3
the coefficient a_k is chosen to make |S(q; a_k - c, a_k)| large.  The
resulting single major-arc value already grows like Q**(3/4 - 2*delta)
when Q ~ q**(2/(1+2*delta)).  Grid mode estimates the supremum directly by
coarse sampling plus golden-section refinement and is a certified lower
bound of the true sup.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .approx import CALIBRATION, CalibrationConstants
from .diophantine import Convergent, RealInput, continued_fraction, odd_convergent, real_from_token
from .exp_sums import complete_sum_batch, complete_sum_direct, complete_sum_shifted_cubic_all
from .weyl import Dyadic, binomial_abs_grid, binomial_abs_uniform_grid, weyl_sum

_EXHAUSTIVE_LIMIT = 10**4
_RANDOM_SAMPLES = 10**4
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def best_cubic_coeff(q: int, c: int, seed: int = 0) -> tuple[int, float]:
    """(a, |S(q; a-c, a)|) maximizing the shifted cubic sum over gcd(a, q) = 1.

    Exhaustive for q <= 10**4 (the maximum then provably exceeds
    0.3 * q**0.45, which is asserted); beyond that a seeded random search
    of 10**4 coprime candidates keeps the best and only warns.
    """
    if q == 1:
        return 1, 1.0
    if q % 2 == 0:
        raise ValueError("q must be odd")
    if gcd(q, c) != 1:
        raise ValueError("shift c must be coprime to q")
    if q <= _EXHAUSTIVE_LIMIT:
        vals = np.abs(complete_sum_shifted_cubic_all(q, c % q))
        vals[np.gcd(np.arange(q, dtype=np.int64), q) != 1] = -1.0
        a = int(np.argmax(vals))
        s_abs = float(vals[a])
        if s_abs < 0.3 * q**0.45:
            raise ArithmeticError(
                f"exhaustive search fell below 0.3*q**0.45 at q={q}, c={c}"
            )
        return a, s_abs
    rng = np.random.default_rng((q * 0x9E3779B1 + c + seed) & 0xFFFFFFFF)
    cands = rng.integers(1, q, size=3 * _RANDOM_SAMPLES)
    cands = cands[np.gcd(cands, q) == 1][:_RANDOM_SAMPLES]
    vals = np.abs(complete_sum_batch(q, (cands - c) % q, cands, 3))
    i = int(np.argmax(vals))
    a, s_abs = int(cands[i]), float(vals[i])
    if s_abs < 0.3 * q**0.45:
        warnings.warn(f"random search stayed below 0.3*q**0.45 at q={q}")
    return a, s_abs


@dataclass(frozen=True)
class WitnessReport:
    """One lower-bound experiment at scale Q.

    alpha = -gamma + a_k/q makes the top coefficient exactly rational
    (betak = 0) while beta1 = c/q - gamma inherits the convergent quality
    |beta1| <= q**-2; predicted = floor_const * Q**(3/4 - 2*delta).
    """

    gamma: float
    k: int
    q: int
    c: int
    a_k: int
    delta: float
    Q: float
    alpha: float
    f_abs: float
    predicted: float
    s_abs: float

    @property
    def floor_ok(self) -> bool:
        return self.f_abs >= self.predicted


def _witness_at(
    gamma_frac: Fraction,
    k: int,
    delta: float,
    conv: Convergent,
    Q: float,
    calib: CalibrationConstants,
) -> WitnessReport:
    q, c = conv.q, conv.c
    if k == 3:
        a_k, s_abs = best_cubic_coeff(q, c % q if q > 1 else 1)
    else:
        a_k = 1
        s_abs = abs(complete_sum_direct(q, (a_k - c) % q, a_k, 2))
    alpha1 = Fraction(a_k, q) - gamma_frac   # beta_k = alpha1 + gamma - a_k/q = 0
    beta1 = Fraction(c, q) - gamma_frac
    assert abs(beta1) <= Fraction(1, q * q)
    f = weyl_sum([(1, alpha1), (k, Fraction(a_k, q))], Dyadic(Q))
    predicted = calib.witness_floor * Q ** (0.75 - 2.0 * delta)
    return WitnessReport(
        gamma=float(gamma_frac),
        k=k,
        q=q,
        c=c,
        a_k=a_k,
        delta=delta,
        Q=Q,
        alpha=float(alpha1),
        f_abs=abs(f),
        predicted=predicted,
        s_abs=s_abs,
    )


def lower_bound_witness(
    gamma: RealInput,
    k: int,
    delta: float,
    qmin: int,
    calib: CalibrationConstants = CALIBRATION,
) -> WitnessReport:
    """Witness at the scale Q = q**(2/(1+2*delta)) set by the chosen convergent."""
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    if not 0 < delta <= 0.1:
        raise ValueError("delta must lie in (0, 0.1]")
    conv = odd_convergent(gamma, qmin)
    Q = conv.q ** (2.0 / (1.0 + 2.0 * delta))
    return _witness_at(real_from_token(gamma), k, delta, conv, Q, calib)


def _convergent_for_scale(
    gamma: RealInput, Q: float, delta: float
) -> Convergent:
    """Smallest odd convergent whose actual error meets |beta1| <= Q**-(1+2*delta)."""
    tol = Q ** (-(1.0 + 2.0 * delta))
    for conv in continued_fraction(gamma, 80):
        if conv.q % 2 == 1 and conv.q > 1 and abs(conv.err) <= tol:
            return conv
    raise ValueError(f"insufficient convergents for scale Q={Q}")


def witness_at_scale(
    gamma: RealInput,
    k: int,
    Q: float,
    delta: float = 0.02,
    calib: CalibrationConstants = CALIBRATION,
) -> WitnessReport:
    """Witness pinned to a requested scale Q.

    The convergent is the smallest odd one that still satisfies the scale
    hypothesis |beta1| <= Q**-(1+2*delta) (the inverse reading of
    Q = q**(2/(1+2*delta)), using the actual convergent error).
    """
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    conv = _convergent_for_scale(gamma, Q, delta)
    return _witness_at(real_from_token(gamma), k, delta, conv, Q, calib)


def sup_search(
    gamma: RealInput,
    k: int,
    Q: float,
    coarse: int | None = None,
    refine_iters: int = 40,
    seeds=None,
    threads: int = 1,
) -> tuple[float, float]:
    """(alpha_star, value): grid scan of |f(alpha, alpha+gamma; Q)| over [0, 1)
    plus golden-section refinement around the top ten grid points.

    The result is a lower bound on the true supremum.  Resolving every
    major-arc peak needs ~4*Q**k points; requests are capped at 10**7 with
    an undersampling warning.
    """
    needed = 4 * math.ceil(Q) ** k
    if coarse is None:
        coarse = min(needed, 10**7)
    coarse = int(coarse)
    if coarse < needed:
        warnings.warn(
            f"coarse grid {coarse} below the peak-resolving density {needed}; "
            "the returned lower bound may be slack"
        )
    gamma_frac = real_from_token(gamma)
    vals = binomial_abs_uniform_grid(k, gamma_frac, Q, coarse, threads)
    top = min(10, coarse)
    idx = np.argpartition(-vals, top - 1)[:top]
    idx = idx[np.argsort(-vals[idx], kind="stable")]
    cands = [(float(vals[i]), i / coarse) for i in idx]
    if seeds is not None:
        seed_vals = binomial_abs_grid(k, gamma_frac, Q, np.asarray(seeds, float), threads)
        cands.extend((float(v), float(s)) for v, s in zip(seed_vals, seeds))

    def f_abs(alpha: float) -> float:
        return float(binomial_abs_grid(k, gamma_frac, Q, np.array([alpha]), threads)[0])

    h = 1.0 / coarse
    best_alpha, best_val = 0.0, -1.0
    for v0, center in cands:
        a, b = center - h, center + h
        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        f1, f2 = f_abs(x1), f_abs(x2)
        for _ in range(refine_iters):
            if f1 < f2:
                a, x1, f1 = x1, x2, f2
                x2 = a + _GOLDEN * (b - a)
                f2 = f_abs(x2)
            else:
                b, x2, f2 = x2, x1, f1
                x1 = b - _GOLDEN * (b - a)
                f1 = f_abs(x1)
        for alpha, val in ((x1, f1), (x2, f2), (center, v0)):
            if val > best_val:
                best_alpha, best_val = alpha % 1.0, val
    return best_alpha, best_val


def exponent_regression(
    gamma: RealInput,
    k: int,
    Qs,
    mode: str = "witness",
    delta: float = 0.02,
    threads: int = 1,
    coarse_cap: int = 10**7,
    refine_iters: int = 40,
    calib: CalibrationConstants = CALIBRATION,
) -> tuple[float, float, list[dict]]:
    """(slope, stderr, rows): least-squares slope of log(sup estimate) vs log Q.

    witness mode produces one lower-bound witness per scale; grid mode runs
    sup_search.  rows carry the per-scale data for CSV emission.
    """
    Qs = [float(Q) for Q in Qs]
    if len(Qs) < 5 or any(b <= a for a, b in zip(Qs, Qs[1:])):
        raise ValueError("need at least 5 strictly increasing scales")
    rows = []
    for Q in Qs:
        if mode == "witness":
            rep = _witness_at(
                real_from_token(gamma), k, delta,
                _convergent_for_scale(gamma, Q, delta), Q, calib,
            )
            rows.append(
                {
                    "Q": Q,
                    "estimate": rep.f_abs,
                    "q": rep.q,
                    "c": rep.c,
                    "a_k": rep.a_k,
                    "alpha": rep.alpha,
                    "s_abs": rep.s_abs,
                    "predicted": rep.predicted,
                }
            )
        elif mode == "grid":
            coarse = min(4 * math.ceil(Q) ** k, coarse_cap)
            alpha_star, value = sup_search(
                gamma, k, Q, coarse=coarse, refine_iters=refine_iters, threads=threads
            )
            rows.append({"Q": Q, "estimate": value, "alpha": alpha_star})
        else:
            raise ValueError("mode must be 'witness' or 'grid'")
    x = np.log([r["Q"] for r in rows])
    y = np.log([max(r["estimate"], 1e-300) for r in rows])
    n = len(x)
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - y.mean())).sum() / sxx)
    resid = y - (y.mean() + slope * (x - xbar))
    stderr = float(math.sqrt((resid**2).sum() / max(n - 2, 1) / sxx))
    return slope, stderr, rows
