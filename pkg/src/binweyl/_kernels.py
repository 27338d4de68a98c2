"""Hot loops for grid sweeps, JIT-compiled when numba is available.

Kernels release the GIL but are internally sequential; callers split work
into fixed-size chunks and reduce partial results in chunk order, so results
are bit-identical no matter how many worker threads run.

Uniform-grid sweeps (alpha = j/M) advance each term's unit phasor by a
constant rotation instead of calling sin/cos per term.  Every chunk re-anchors
the phasors from exact integer phases ((j0 * m) mod M in int64), so the
multiplicative drift stays below chunk_len * eps ~ 1e-11 and results do not
depend on how chunks are distributed over threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap

TWO_PI = 6.283185307179586

# fixed chunk sizes; results must not depend on thread count
GRID_CHUNK = 1 << 15
MOMENT_CHUNK = 1 << 16


def default_threads() -> int:
    env = os.environ.get("WEYL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(os.cpu_count() or 1, 8))


def run_chunks(fn, chunks, threads: int):
    """Map fn over chunk descriptors, preserving chunk order in the output."""
    if threads <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


@njit(cache=True, nogil=True)
def _abs_scatter_kernel(alphas, m, gfrac):
    """|sum_n e(alpha * m_n + gfrac_n)| for arbitrary alpha values.

    m_n are exact small integers as doubles (n + n**k for binomial sums,
    n**k for single-degree sums); gfrac_n collect the alpha-independent
    phase parts, already reduced mod 1.
    """
    out = np.empty(alphas.size, dtype=np.float64)
    for i in range(alphas.size):
        a = alphas[i]
        re = 0.0
        im = 0.0
        for j in range(m.size):
            t = TWO_PI * (a * m[j] + gfrac[j])
            re += math.cos(t)
            im += math.sin(t)
        out[i] = math.hypot(re, im)
    return out


@njit(cache=True, nogil=True)
def _anchor(j0, mgrid, m_int, gfrac):
    """Phasors z_n = e(j0*m_n/mgrid + g_n) and steps w_n = e(m_n/mgrid)."""
    size = m_int.size
    zre = np.empty(size)
    zim = np.empty(size)
    wre = np.empty(size)
    wim = np.empty(size)
    for n in range(size):
        ph = TWO_PI * (((j0 * m_int[n]) % mgrid) / mgrid + gfrac[n])
        zre[n] = math.cos(ph)
        zim[n] = math.sin(ph)
        st = TWO_PI * ((m_int[n] % mgrid) / mgrid)
        wre[n] = math.cos(st)
        wim[n] = math.sin(st)
    return zre, zim, wre, wim


@njit(cache=True, nogil=True)
def _abs_ugrid_kernel(j0, j1, mgrid, m_int, gfrac):
    """|f(j/mgrid)| for j0 <= j < j1 via the anchored phasor recurrence."""
    zre, zim, wre, wim = _anchor(j0, mgrid, m_int, gfrac)
    out = np.empty(j1 - j0, dtype=np.float64)
    for j in range(j1 - j0):
        re = 0.0
        im = 0.0
        for n in range(m_int.size):
            re += zre[n]
            im += zim[n]
            t = zre[n] * wre[n] - zim[n] * wim[n]
            zim[n] = zre[n] * wim[n] + zim[n] * wre[n]
            zre[n] = t
        out[j] = math.hypot(re, im)
    return out


@njit(cache=True, nogil=True)
def _moment_ugrid_kernel(j0, j1, mgrid, m_int, gfrac):
    """sum_{j0 <= j < j1} |f(j/mgrid)|**2, Kahan-compensated."""
    zre, zim, wre, wim = _anchor(j0, mgrid, m_int, gfrac)
    s = 0.0
    comp = 0.0
    for _ in range(j1 - j0):
        re = 0.0
        im = 0.0
        for n in range(m_int.size):
            re += zre[n]
            im += zim[n]
            t = zre[n] * wre[n] - zim[n] * wim[n]
            zim[n] = zre[n] * wim[n] + zim[n] * wre[n]
            zre[n] = t
        v = re * re + im * im
        t2 = s + v
        if abs(s) >= abs(v):
            comp += (s - t2) + v
        else:
            comp += (v - t2) + s
        s = t2
    return s + comp


@njit(cache=True, nogil=True)
def _oblique_kernel(x0, dx, count, cre, cim, nk, nn, cval, rval):
    """q(x) = sum_n g_n exp(i((c - r*x)*n**k + x*n)) on x_j = x0 + j*dx.

    In x the phase is linear per term, so each term advances by the fixed
    rotation e^(i*(n - r*n**k)*dx).
    """
    size = nn.size
    zre = np.empty(size)
    zim = np.empty(size)
    wre = np.empty(size)
    wim = np.empty(size)
    for n in range(size):
        ph = (cval - rval * x0) * nk[n] + x0 * nn[n]
        zre[n] = math.cos(ph)
        zim[n] = math.sin(ph)
        st = (nn[n] - rval * nk[n]) * dx
        wre[n] = math.cos(st)
        wim[n] = math.sin(st)
    out_re = np.empty(count, dtype=np.float64)
    out_im = np.empty(count, dtype=np.float64)
    for j in range(count):
        re = 0.0
        im = 0.0
        for n in range(size):
            re += cre[n] * zre[n] - cim[n] * zim[n]
            im += cre[n] * zim[n] + cim[n] * zre[n]
            t = zre[n] * wre[n] - zim[n] * wim[n]
            zim[n] = zre[n] * wim[n] + zim[n] * wre[n]
            zre[n] = t
        out_re[j] = re
        out_im[j] = im
    return out_re, out_im


def _abs_scatter_numpy(alphas, m, gfrac):
    out = np.empty(alphas.size, dtype=np.float64)
    step = max(1, int(4e6 // max(m.size, 1)))
    for lo in range(0, alphas.size, step):
        a = alphas[lo : lo + step, None]
        t = TWO_PI * (a * m[None, :] + gfrac[None, :])
        out[lo : lo + step] = np.abs(np.exp(1j * t).sum(axis=1))
    return out


def abs_grid(alphas: np.ndarray, m: np.ndarray, gfrac: np.ndarray, threads: int = 1) -> np.ndarray:
    """Chunked |f| evaluation over an arbitrary array of alpha values."""
    alphas = np.ascontiguousarray(alphas, dtype=np.float64)
    mf = np.ascontiguousarray(m, dtype=np.float64)
    gf = np.ascontiguousarray(gfrac, dtype=np.float64)
    if not HAVE_NUMBA:
        return _abs_scatter_numpy(alphas, mf, gf)
    chunks = [(lo, min(lo + GRID_CHUNK, alphas.size)) for lo in range(0, alphas.size, GRID_CHUNK)]
    parts = run_chunks(lambda c: _abs_scatter_kernel(alphas[c[0] : c[1]], mf, gf), chunks, threads)
    return np.concatenate(parts) if parts else np.empty(0)


def _require_anchor_safe(mgrid: int, m_int: np.ndarray) -> None:
    if m_int.size and int(mgrid) * int(m_int.max()) >= 2**62:
        raise ValueError("uniform grid sweep needs mgrid * max(m) < 2**62")


def abs_uniform_grid(mgrid: int, m_int: np.ndarray, gfrac: np.ndarray, threads: int = 1) -> np.ndarray:
    """|f(j/mgrid)| for j = 0..mgrid-1."""
    m_int = np.ascontiguousarray(m_int, dtype=np.int64)
    gf = np.ascontiguousarray(gfrac, dtype=np.float64)
    _require_anchor_safe(mgrid, m_int)
    chunks = [(lo, min(lo + GRID_CHUNK, mgrid)) for lo in range(0, mgrid, GRID_CHUNK)]
    if HAVE_NUMBA:
        parts = run_chunks(
            lambda c: _abs_ugrid_kernel(c[0], c[1], mgrid, m_int, gf), chunks, threads
        )
        return np.concatenate(parts)
    return _abs_scatter_numpy(
        np.arange(mgrid, dtype=np.float64) / mgrid, m_int.astype(np.float64), gf
    )


def moment_grid_sum(mgrid: int, m_int: np.ndarray, gfrac: np.ndarray, threads: int = 1) -> float:
    """sum_{j=0}^{mgrid-1} |f(j/mgrid)|**2, deterministic chunked reduction."""
    from .numerics import Neumaier

    m_int = np.ascontiguousarray(m_int, dtype=np.int64)
    gf = np.ascontiguousarray(gfrac, dtype=np.float64)
    _require_anchor_safe(mgrid, m_int)
    chunks = [(lo, min(lo + MOMENT_CHUNK, mgrid)) for lo in range(0, mgrid, MOMENT_CHUNK)]
    if HAVE_NUMBA:
        parts = run_chunks(
            lambda c: _moment_ugrid_kernel(c[0], c[1], mgrid, m_int, gf), chunks, threads
        )
    else:
        def numpy_part(c):
            j = np.arange(c[0], c[1], dtype=np.float64)
            vals = _abs_scatter_numpy(j / mgrid, m_int.astype(np.float64), gf)
            return float((vals * vals).sum())

        parts = run_chunks(numpy_part, chunks, threads)
    acc = Neumaier()
    for p in parts:
        acc.add(p)
    return acc.value


def oblique_grid(x0, dx, count, coeffs, nk, nn, cval, rval, threads: int = 1):
    """Oblique-line restriction on the uniform grid x_j = x0 + j*dx (complex array)."""
    cre = np.ascontiguousarray(coeffs.real)
    cim = np.ascontiguousarray(coeffs.imag)
    nkf = np.ascontiguousarray(nk, dtype=np.float64)
    nnf = np.ascontiguousarray(nn, dtype=np.float64)
    if HAVE_NUMBA:
        chunks = [(lo, min(lo + GRID_CHUNK, count)) for lo in range(0, count, GRID_CHUNK)]
        parts = run_chunks(
            lambda c: _oblique_kernel(
                x0 + c[0] * dx, dx, c[1] - c[0], cre, cim, nkf, nnf, cval, rval
            ),
            chunks,
            threads,
        )
        re = np.concatenate([p[0] for p in parts])
        im = np.concatenate([p[1] for p in parts])
        return re + 1j * im
    xs = x0 + dx * np.arange(count, dtype=np.float64)
    out = np.empty(count, dtype=np.complex128)
    step = max(1, int(4e6 // max(nn.size, 1)))
    for lo in range(0, count, step):
        x = xs[lo : lo + step, None]
        th = (cval - rval * x) * nkf[None, :] + x * nnf[None, :]
        out[lo : lo + step] = (coeffs[None, :] * np.exp(1j * th)).sum(axis=1)
    return out
