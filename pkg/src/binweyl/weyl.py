"""Weyl sums f(alpha_1, ..., alpha_t) = sum_n e(sum_j alpha_j n**k_j).

Full ranges sum n = 1..floor(P), dyadic ranges n in (Q, 2Q].  Phases are
reduced mod 1 per term through double-double accumulation (numerics module)
so that alpha * n**k keeps ~14 fractional digits even at n**k ~ 2**62, and
the final reduction is exactly rounded.  Grid sweeps over many alpha values
run through the compiled kernels with fixed chunking, which keeps results
byte-stable under any thread count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .numerics import RealLike, as_dd, cexp_sum, frac_alpha_npow, frac_phases


@dataclass(frozen=True)
class Full:
    """Summation range n = 1..floor(P)."""

    P: float

    def __post_init__(self):
        if not self.P > 0:
            raise ValueError("P must be positive")


@dataclass(frozen=True)
class Dyadic:
    """Summation range n in (Q, 2Q]."""

    Q: float

    def __post_init__(self):
        if not self.Q > 0:
            raise ValueError("Q must be positive")


Range = Union[Full, Dyadic]


def range_bounds(rng: Range) -> tuple[int, int]:
    """Inclusive integer bounds (n0, n1) of the summation range."""
    if isinstance(rng, Full):
        return 1, int(math.floor(rng.P))
    return int(math.floor(rng.Q)) + 1, int(math.floor(2.0 * rng.Q))


def _check_coeffs(coeffs) -> list[tuple[int, tuple[float, float]]]:
    out = []
    seen = set()
    for k, alpha in coeffs:
        k = int(k)
        if k < 1:
            raise ValueError("degrees must be >= 1")
        if k in seen:
            raise ValueError(f"duplicate degree {k}")
        seen.add(k)
        out.append((k, as_dd(alpha)))
    if not out:
        raise ValueError("need at least one coefficient")
    return out


def weyl_sum(coeffs: Sequence[tuple[int, RealLike]], rng: Range) -> complex:
    """sum over the range of e(sum_j alpha_j * n**k_j), compensated."""
    cs = _check_coeffs(coeffs)
    n0, n1 = range_bounds(rng)
    if n1 < n0:
        return complex(0.0, 0.0)
    n = np.arange(n0, n1 + 1, dtype=np.int64)
    return cexp_sum(frac_phases(cs, n))


def f1k(alpha1: RealLike, alphak: RealLike, k: int, rng: Range) -> complex:
    """Binomial Weyl sum with phase alpha1*n + alphak*n**k."""
    return weyl_sum([(1, alpha1), (k, alphak)], rng)


def dyadic_assemble(alpha1: RealLike, alphak: RealLike, k: int, P: float) -> complex:
    """Reassemble the full sum from dyadic blocks (P/2**i, P/2**(i-1)].

    The blocks partition [1, floor(P)]: halving continues until the block
    (Q, 2Q] with Q < 1 picks up n = 1.
    """
    if not P >= 1:
        raise ValueError("P must be >= 1")
    total = complex(0.0, 0.0)
    Q = P
    while Q >= 1.0:
        Q *= 0.5
        total += f1k(alpha1, alphak, k, Dyadic(Q))
    return total


def _binomial_grid_parts(k: int, gamma: RealLike, Q: float):
    n0, n1 = range_bounds(Dyadic(Q))
    n = np.arange(n0, n1 + 1, dtype=np.int64)
    if n.size and float(n1) ** k + n1 >= 2**53:
        raise ValueError("grid sweep needs n + n**k < 2**53")
    m = n + n**k
    gfrac = frac_alpha_npow(as_dd(gamma), n, k)
    return m, gfrac


def binomial_abs_grid(
    k: int,
    gamma: RealLike,
    Q: float,
    alphas: np.ndarray,
    threads: int = 1,
) -> np.ndarray:
    """|f(alpha, alpha + gamma; Q)| over an array of alpha values.

    The phase splits as alpha*(n + n**k) + gamma*n**k; the gamma part is
    precomputed once with double-double accuracy, the alpha part uses plain
    doubles (n + n**k stays far below 2**53 at grid scales).
    """
    m, gfrac = _binomial_grid_parts(k, gamma, Q)
    return _kernels.abs_grid(
        np.asarray(alphas, dtype=np.float64), m.astype(np.float64), gfrac, threads
    )


def binomial_abs_uniform_grid(
    k: int, gamma: RealLike, Q: float, mgrid: int, threads: int = 1
) -> np.ndarray:
    """|f(j/mgrid, j/mgrid + gamma; Q)| for j = 0..mgrid-1 (phasor recurrence)."""
    m, gfrac = _binomial_grid_parts(k, gamma, Q)
    return _kernels.abs_uniform_grid(mgrid, m, gfrac, threads)


def single_degree_abs_grid(
    k: int, P: float, alphas: np.ndarray, threads: int = 1
) -> np.ndarray:
    """|sum_{n <= P} e(alpha * n**k)| over an array of alpha values."""
    n0, n1 = range_bounds(Full(P))
    n = np.arange(n0, n1 + 1, dtype=np.int64)
    if n.size and float(n1) ** k >= 2**53:
        raise ValueError("grid sweep needs n**k < 2**53")
    m = (n**k).astype(np.float64)
    gfrac = np.zeros(n.size)
    return _kernels.abs_grid(np.asarray(alphas, dtype=np.float64), m, gfrac, threads)


def default_moment_grid(k: int, Q: float) -> int:
    """Grid size heuristic: comfortably past the alias-exact threshold, capped."""
    return int(min(max(1e5, 8.0 * k * (2.0 * Q) ** (k - 1) * Q), 1e8))


def second_moment_parseval(
    k: int,
    gamma: RealLike,
    Q: float,
    grid: int | None = None,
    threads: int = 1,
) -> tuple[float, int]:
    """(numeric, exact) for int_0^1 |f(alpha, alpha+gamma; Q)|**2 d alpha.

    Orthogonality collapses the integral to the number of summands,
    exact = floor(2Q) - floor(Q).  The numeric side is a uniform Riemann
    sum; |f|**2 is a trigonometric polynomial whose top frequency is below
    (2Q)**k + 2Q, so any grid above that is alias-free and the comparison
    is a true end-to-end consistency check.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if grid is None:
        grid = default_moment_grid(k, Q)
        safe = 8.0 * k * (2.0 * Q) ** (k - 1) * Q
        if safe > 1e8:
            warnings.warn("moment grid capped at 1e8 points; accuracy may degrade")
    grid = int(grid)
    if grid < 4 * Q * k:
        raise ValueError(f"grid {grid} below minimum 4*Q*k = {4 * Q * k:.0f}")
    n0, n1 = range_bounds(Dyadic(Q))
    n = np.arange(n0, n1 + 1, dtype=np.int64)
    exact = n1 - n0 + 1
    max_freq = (n1**k - n0**k) + (n1 - n0)
    if grid <= max_freq:
        warnings.warn(
            f"grid {grid} below alias-free threshold {max_freq + 1}; "
            "the Riemann sum may fold high frequencies"
        )
    m = n + n**k
    gfrac = frac_alpha_npow(as_dd(gamma), n, k)
    numeric = _kernels.moment_grid_sum(grid, m, gfrac, threads) / grid
    return numeric, exact


def _merge_arcs(arcs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    arcs.sort()
    merged = [arcs[0]]
    overlapped = False
    for lo, hi in arcs[1:]:
        if lo <= merged[-1][1]:
            overlapped = True
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    if overlapped:
        warnings.warn("central arcs overlap; merged before integration")
    return merged


def minor_arc_second_moment(
    k: int, P: float, phi: float, psi: float, threads: int = 1
) -> tuple[float, int]:
    """(major, total) for the second moment of f_k(alpha) = sum_{n<=P} e(alpha n**k).

    major integrates |f_k|**2 over the union of arcs |alpha - a/q| <= 1/(q*Q)
    with q <= R = P**(1+phi), gcd(a, q) = 1 and Q = P**(k-1-psi); total is
    the exact full-period moment floor(P).  The minor-arc moment is their
    difference.
    """
    if not 0 < phi < psi:
        raise ValueError("need 0 < phi < psi")
    R = P ** (1.0 + phi)
    Qarc = P ** (k - 1.0 - psi)
    if R * Qarc >= P**k:
        raise ValueError("R*Q >= P**k: arcs would cover a full period")
    arcs = []
    for q in range(1, int(math.floor(R)) + 1):
        w = 1.0 / (q * Qarc)
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                arcs.append((a / q - w, a / q + w))
    arcs = _merge_arcs(arcs)

    nu_max = float(math.floor(P)) ** k  # top alpha-frequency of |f|**2
    majors = []
    for lo, hi in arcs:
        panels = max(8, int(math.ceil((hi - lo) * 8.0 * nu_max)))
        panels += panels % 2  # Simpson needs an even panel count
        nodes = np.linspace(lo, hi, panels + 1)
        vals = single_degree_abs_grid(k, P, nodes, threads) ** 2
        h = (hi - lo) / panels
        wts = np.ones(panels + 1)
        wts[1:-1:2] = 4.0
        wts[2:-1:2] = 2.0
        majors.append(h / 3.0 * float(vals @ wts))
    major = float(math.fsum(majors))
    return major, int(math.floor(P))
