"""Oscillatory integrals I(beta1, betak; A) = int_A e(beta1*x + betak*x**k) dx.

The linear case has the stable closed form (hi-lo) * e(beta1*(lo+hi)/2) *
sinc(beta1*(hi-lo)).  Everything else runs through 15-point Gauss-Kronrod
panels whose initial width tracks the local oscillation count, refined
adaptively until the estimated error drops below tol * (1 + total length).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# QUADPACK dqk15 abscissae/weights; Gauss-7 nodes are every other Kronrod node.
_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993945, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
])

_NODES = np.concatenate([-_XGK[:7], _XGK[::-1]])  # 15 nodes ascending
_W15 = np.concatenate([_WGK[:7], _WGK[::-1]])
_W7 = np.zeros(15)
_W7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:3], _WG[::-1]])


class QuadratureError(RuntimeError):
    """Raised when the adaptive subdivision budget is exhausted."""


@dataclass(frozen=True)
class IntegralArgs:
    """Phase coefficients and a finite union of disjoint intervals in [0, inf)."""

    beta1: float
    betak: float
    k: int
    intervals: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("degree k must be >= 2")
        prev_hi = -math.inf
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ValueError(f"interval [{lo}, {hi}] needs lo < hi")
            if lo < 0:
                raise ValueError("intervals must lie in [0, inf)")
            if lo < prev_hi:
                raise ValueError("intervals must be pairwise disjoint and sorted")
            prev_hi = hi


def integral_linear(beta1: float, lo: float, hi: float) -> complex:
    """int_lo^hi e(beta1*x) dx; equals (hi-lo)*e(beta1*(lo+hi)/2)*sinc(beta1*(hi-lo))."""
    length = hi - lo
    if beta1 == 0.0:
        return complex(length, 0.0)
    mid = 0.5 * (lo + hi)
    return cmath.exp(2j * cmath.pi * beta1 * mid) * length * float(np.sinc(beta1 * length))


def _phase_cycles(beta1: float, betak: float, k: int, lo: float, hi: float) -> float:
    """Upper bound on the number of oscillations of e(beta1*x + betak*x**k)."""
    return abs(beta1) * (hi - lo) + abs(betak) * abs(hi**k - lo**k)


def _gk15(beta1: float, betak: float, k: int, a: np.ndarray, b: np.ndarray):
    """Kronrod-15 and Gauss-7 per panel; returns (k15, err) arrays."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    f = np.exp((2j * np.pi) * (beta1 * x + betak * x**k))
    k15 = half * (f @ _W15)
    g7 = half * (f @ _W7)
    return k15, np.abs(k15 - g7)


def integral_quad(
    beta1: float,
    betak: float,
    k: int,
    intervals: Sequence[tuple[float, float]],
    tol: float = 1e-9,
    max_subdiv: int = 10**6,
) -> complex:
    """Adaptive Gauss-Kronrod value of I(beta1, betak; union of intervals)."""
    args = IntegralArgs(beta1, betak, k, tuple(intervals))
    total_len = sum(hi - lo for lo, hi in args.intervals)
    if total_len == 0.0:
        return complex(0.0, 0.0)
    abs_tol = tol * (1.0 + total_len)

    a_parts, b_parts = [], []
    count = 0
    for lo, hi in args.intervals:
        # quarter-period panels resolve the local oscillation up front
        n0 = int(math.ceil(4.0 * _phase_cycles(beta1, betak, k, lo, hi))) + 1
        count += n0
        if count > max_subdiv:
            raise QuadratureError(
                f"initial panelling needs > {max_subdiv} panels; input too oscillatory"
            )
        edges = np.linspace(lo, hi, n0 + 1)
        a_parts.append(edges[:-1])
        b_parts.append(edges[1:])
    a = np.concatenate(a_parts)
    b = np.concatenate(b_parts)

    settled: list[tuple[float, complex]] = []
    while a.size:
        vals = np.empty(a.size, dtype=np.complex128)
        errs = np.empty(a.size, dtype=np.float64)
        for lo_i in range(0, a.size, 1 << 16):
            sl = slice(lo_i, min(lo_i + (1 << 16), a.size))
            vals[sl], errs[sl] = _gk15(beta1, betak, k, a[sl], b[sl])
        budget = abs_tol * (b - a) / total_len
        ok = errs <= budget
        settled.extend(zip(a[ok].tolist(), vals[ok].tolist()))
        a_bad, b_bad = a[~ok], b[~ok]
        count += 2 * a_bad.size
        if count > max_subdiv:
            raise QuadratureError(f"exceeded {max_subdiv} panel subdivisions")
        mid = 0.5 * (a_bad + b_bad)
        a = np.concatenate([a_bad, mid])
        b = np.concatenate([mid, b_bad])

    settled.sort(key=lambda t: t[0])
    return complex(
        math.fsum(v.real for _, v in settled), math.fsum(v.imag for _, v in settled)
    )


def integral_eval(
    beta1: float, betak: float, k: int, intervals: Sequence[tuple[float, float]]
) -> complex:
    """Closed form when betak == 0, quadrature otherwise."""
    if betak == 0.0:
        return sum((integral_linear(beta1, lo, hi) for lo, hi in intervals), 0j)
    return integral_quad(beta1, betak, k, intervals)


def derivative_floor(
    beta1: float, betak: float, k: int, intervals: Sequence[tuple[float, float]]
) -> float:
    """min over the intervals of |beta1 + k*betak*x**(k-1)|.

    The phase derivative is monotone in x >= 0, so the minimum sits at an
    endpoint unless the derivative changes sign inside, in which case 0.
    """
    args = IntegralArgs(beta1, betak, k, tuple(intervals))

    def dphi(x: float) -> float:
        return beta1 + k * betak * x ** (k - 1)

    best = math.inf
    for lo, hi in args.intervals:
        d_lo, d_hi = dphi(lo), dphi(hi)
        if d_lo == 0.0 or d_hi == 0.0 or (d_lo < 0) != (d_hi < 0):
            return 0.0
        best = min(best, abs(d_lo), abs(d_hi))
    return best
