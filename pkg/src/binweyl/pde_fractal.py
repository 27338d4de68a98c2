"""Dispersive evolution of step data and fractal dimension of line restrictions.

The 2*pi-periodic evolution q_k(t, x) = sum_n g_hat(n) e^{i(t n**k + x n)}
solves i d_t q = (-i)**k-type linear dispersion; restricting to the oblique
line t + r*x = c gives q_{k;r,c}(x) = sum_n g_hat(n) e^{i((c - r x) n**k + x n)}.
For step-function data the graphs of Re/Im are fractal for typical c; their
upper box-counting dimension is estimated from column oscillations over a
dyadic window of scales, cross-checked by a Hoelder-exponent regression
(a C^alpha graph has box dimension at most 2 - alpha).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels

TWO_PI = 2.0 * math.pi

MIN_SAMPLES = 1 << 14
DEFAULT_TRUNC = 1 << 12
# box-counting scales must sit above the coefficient-truncation scale ~1/N
DEFAULT_SCALE_WINDOW = (2.0**-8, 2.0**-3)


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant 2*pi-periodic function: value[i] on [break[i], break[i+1])."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2:
            raise ValueError("need at least 2 breakpoints (non-constant data)")
        if len(self.breakpoints) != len(self.values):
            raise ValueError("one value per breakpoint")
        b = self.breakpoints
        if any(x >= y for x, y in zip(b, b[1:])) or b[0] < 0 or b[-1] >= TWO_PI:
            raise ValueError("breakpoints must increase within [0, 2*pi)")

    def pieces(self) -> list[tuple[float, float, float]]:
        """(lo, hi, value) triples; the last piece wraps to breakpoints[0] + 2*pi."""
        b, v = self.breakpoints, self.values
        out = [(b[i], b[i + 1], v[i]) for i in range(len(b) - 1)]
        out.append((b[-1], b[0] + TWO_PI, v[-1]))
        return out

    def mean_square(self) -> float:
        """(1/2*pi) * integral of g**2."""
        return sum(v * v * (hi - lo) for lo, hi, v in self.pieces()) / TWO_PI


def indicator_half() -> StepFunction:
    """The default initial datum: indicator of [0, pi)."""
    return StepFunction((0.0, math.pi), (1.0, 0.0))


def fourier_coeffs(g: StepFunction, N: int) -> np.ndarray:
    """Exact coefficients g_hat(n) for |n| <= N, index n = -N..N.

    g_hat(0) is the mean; for n != 0 each piece [a, b) with value v
    contributes v * (e^{-i n a} - e^{-i n b}) / (2*pi*i*n).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(-N, N + 1, dtype=np.float64)
    out = np.zeros(2 * N + 1, dtype=np.complex128)
    nz = n != 0
    for lo, hi, v in g.pieces():
        out[nz] += v * (np.exp(-1j * n[nz] * lo) - np.exp(-1j * n[nz] * hi)) / (
            TWO_PI * 1j * n[nz]
        )
        out[N] += v * (hi - lo) / TWO_PI
    return out


@dataclass(frozen=True)
class ObliqueRestriction:
    """Samples of q_{k;r,c} on a uniform x grid, with the L2 truncation tail."""

    k: int
    r: Fraction
    c: float
    N: int
    x: np.ndarray
    samples: np.ndarray
    trunc_l2: float


def evolve_restrict(
    coeffs: np.ndarray,
    k: int,
    r,
    c: float,
    samples: int = MIN_SAMPLES,
    g: StepFunction | None = None,
    threads: int = 1,
) -> ObliqueRestriction:
    """Evaluate sum_{|n|<=N} g_hat(n) e^{i((c - r x) n**k + x n)} on a uniform grid.

    trunc_l2 reports the L2 tail sum_{|n|>N} |g_hat(n)|**2 via the Parseval
    residual when the step function is supplied (O(1/N) for step data).
    """
    r = Fraction(r)
    if r == 0:
        raise ValueError("oblique slope r must be nonzero")
    N = (len(coeffs) - 1) // 2
    if len(coeffs) != 2 * N + 1:
        raise ValueError("coeffs must have odd length 2N+1")
    n = np.arange(-N, N + 1, dtype=np.int64)
    nk = n.astype(np.float64) ** k
    dx = TWO_PI / samples
    vals = _kernels.oblique_grid(
        0.0, dx, samples, np.ascontiguousarray(coeffs), nk, n, float(c), float(r), threads
    )
    tail = 0.0
    if g is not None:
        tail = max(g.mean_square() - float((np.abs(coeffs) ** 2).sum()), 0.0)
    x = dx * np.arange(samples, dtype=np.float64)
    return ObliqueRestriction(k, r, float(c), N, x, vals, tail)


@dataclass(frozen=True)
class DimensionEstimate:
    """Box-counting slope with its regression stderr and the (eps, count) table."""

    slope: float
    stderr: float
    scales: tuple[tuple[float, int], ...]


def _dyadic_scales(scale_lo: float, scale_hi: float) -> list[float]:
    j_lo = int(math.ceil(-math.log2(scale_hi)))
    j_hi = int(math.floor(-math.log2(scale_lo)))
    return [2.0**-j for j in range(j_lo, j_hi + 1)]


def box_dimension(
    samples: Sequence[float],
    scale_lo: float = DEFAULT_SCALE_WINDOW[0],
    scale_hi: float = DEFAULT_SCALE_WINDOW[1],
) -> DimensionEstimate:
    """Box-counting dimension of the graph of uniformly-sampled values.

    x is normalized to [0, 1] and y by its range (box dimension is invariant
    under such affine scaling).  At scale eps the graph is covered column by
    column, N(eps) = sum over columns of (ceil(osc/eps) + 1), and the slope
    of log N against log(1/eps) over dyadic eps estimates the dimension.
    Constant samples have a flat graph: slope 1 by definition.
    """
    y = np.asarray(samples, dtype=np.float64)
    if y.size < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    if not scale_lo < scale_hi:
        raise ValueError("scale_lo must be below scale_hi")
    if scale_lo < 4.0 / y.size:
        raise ValueError("scale_lo below 4 * grid spacing is unresolvable")
    rng_y = float(y.max() - y.min())
    scales = _dyadic_scales(scale_lo, scale_hi)
    if len(scales) < 2:
        raise ValueError("scale window contains fewer than 2 dyadic scales")
    if rng_y == 0.0:
        return DimensionEstimate(1.0, 0.0, tuple((eps, int(1 / eps)) for eps in scales))
    y = (y - y.min()) / rng_y
    counts = []
    for eps in scales:
        ncols = int(round(1.0 / eps))
        usable = (y.size // ncols) * ncols
        cols = y[:usable].reshape(ncols, -1)
        osc = cols.max(axis=1) - cols.min(axis=1)
        counts.append(int(np.ceil(osc / eps).sum() + ncols))
    lx = np.log([1.0 / eps for eps in scales])
    ly = np.log(counts)
    xbar = lx.mean()
    sxx = float(((lx - xbar) ** 2).sum())
    slope = float(((lx - xbar) * (ly - ly.mean())).sum() / sxx)
    resid = ly - (ly.mean() + slope * (lx - xbar))
    stderr = float(math.sqrt((resid**2).sum() / max(len(lx) - 2, 1) / sxx))
    return DimensionEstimate(slope, stderr, tuple(zip(scales, counts)))


def holder_exponent(
    samples: Sequence[float],
    scale_lo: float = DEFAULT_SCALE_WINDOW[0],
    scale_hi: float = DEFAULT_SCALE_WINDOW[1],
) -> float:
    """Regression slope of log sup_|i-j|=h |s_i - s_j| against log h.

    Lags run over the dyadic h whose relative scale h/M lies inside the
    same window used for box counting.
    """
    y = np.asarray(samples, dtype=np.float64)
    if y.size < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    M = y.size
    lags = [h for h in (2**j for j in range(0, 64)) if scale_lo <= h / M <= scale_hi]
    if len(lags) < 2:
        raise ValueError("scale window contains fewer than 2 dyadic lags")
    sup = []
    for h in lags:
        d = float(np.abs(y[h:] - y[:-h]).max())
        sup.append(max(d, 1e-300))
    lx = np.log(lags)
    ly = np.log(sup)
    xbar = lx.mean()
    slope = float(((lx - xbar) * (ly - ly.mean())).sum() / ((lx - xbar) ** 2).sum())
    return slope


@dataclass(frozen=True)
class FractalReport:
    """Joint output of the evolve -> dimension pipeline for one oblique line."""

    restriction: ObliqueRestriction
    dim_re: DimensionEstimate
    dim_im: DimensionEstimate
    holder_re: float
    holder_im: float

    @property
    def dimension(self) -> float:
        """Dimension of the rougher of the two component graphs."""
        return max(self.dim_re.slope, self.dim_im.slope)


def dimension_pipeline(
    g: StepFunction,
    k: int,
    r,
    c: float,
    N: int = DEFAULT_TRUNC,
    samples: int = MIN_SAMPLES,
    scale_lo: float = DEFAULT_SCALE_WINDOW[0],
    scale_hi: float = DEFAULT_SCALE_WINDOW[1],
    threads: int = 1,
) -> FractalReport:
    """Evolve step data, restrict to the line t + r*x = c, estimate dimensions."""
    coeffs = fourier_coeffs(g, N)
    res = evolve_restrict(coeffs, k, r, c, samples=samples, g=g, threads=threads)
    re = np.ascontiguousarray(res.samples.real)
    im = np.ascontiguousarray(res.samples.imag)
    return FractalReport(
        res,
        box_dimension(re, scale_lo, scale_hi),
        box_dimension(im, scale_lo, scale_hi),
        holder_exponent(re, scale_lo, scale_hi),
        holder_exponent(im, scale_lo, scale_hi),
    )
