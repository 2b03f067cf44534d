"""Float kernels behind the numeric oracles.

Each kernel has a vectorized numpy implementation and a scalar-loop
implementation compiled with numba.  The numba path is used when numba
imports and ``CAKECUT_DISABLE_NUMBA`` is not set to a truthy value; both are
always importable so they can be compared (see ``benchmarks/``).
"""

from __future__ import annotations

import math
import os

import numpy as np

_TRUTHY = {"1", "true", "yes", "on"}

JIT_DISABLED = os.environ.get("CAKECUT_DISABLE_NUMBA", "").strip().lower() in _TRUTHY

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None
BACKEND = "numba" if HAVE_NUMBA and not JIT_DISABLED else "numpy"

TWO_PI = 2.0 * math.pi


def sector_counts_numpy(xs: np.ndarray, ys: np.ndarray, radius: float, rays: np.ndarray) -> np.ndarray:
    """Count samples (relative to the center) inside the disk, per angular sector.

    ``rays`` holds sorted ray angles in ``[0, 2*pi)``; sector ``i`` spans
    ``[rays[i], rays[i+1])`` and the last one wraps around.  Returns
    ``max(1, len(rays))`` counts.
    """
    inside = xs * xs + ys * ys <= radius * radius
    m = len(rays)
    if m == 0:
        return np.array([np.count_nonzero(inside)], dtype=np.int64)
    theta = np.mod(np.arctan2(ys[inside], xs[inside]), TWO_PI)
    idx = np.searchsorted(rays, theta, side="right") - 1
    idx[idx < 0] = m - 1
    return np.bincount(idx, minlength=m).astype(np.int64)


def _sector_counts_loop(xs, ys, radius, rays):
    m = rays.shape[0]
    counts = np.zeros(max(1, m), dtype=np.int64)
    r2 = radius * radius
    for k in range(xs.shape[0]):
        x = xs[k]
        y = ys[k]
        if x * x + y * y > r2:
            continue
        if m == 0:
            counts[0] += 1
            continue
        t = math.atan2(y, x)
        if t < 0.0:
            t += TWO_PI
        if t >= TWO_PI:
            t -= TWO_PI
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) // 2
            if rays[mid] <= t:
                lo = mid + 1
            else:
                hi = mid
        i = lo - 1
        if i < 0:
            i = m - 1
        counts[i] += 1
    return counts


def segment_covered_numpy(p: np.ndarray, q: np.ndarray, centers: np.ndarray, radii: np.ndarray,
                          samples: int, tol: float) -> bool:
    """True iff every one of ``samples`` evenly spaced points of segment ``pq``
    lies within ``tol`` of some disk."""
    t = np.linspace(0.0, 1.0, samples)
    pts = p[None, :] + t[:, None] * (q - p)[None, :]
    d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    lim = (radii + tol) ** 2
    return bool(np.all(np.any(d2 <= lim[None, :], axis=1)))


def _segment_covered_loop(p, q, centers, radii, samples, tol):
    for s in range(samples):
        t = s / (samples - 1) if samples > 1 else 0.0
        x = p[0] + t * (q[0] - p[0])
        y = p[1] + t * (q[1] - p[1])
        hit = False
        for c in range(centers.shape[0]):
            dx = x - centers[c, 0]
            dy = y - centers[c, 1]
            lim = radii[c] + tol
            if dx * dx + dy * dy <= lim * lim:
                hit = True
                break
        if not hit:
            return False
    return True


if HAVE_NUMBA:
    sector_counts_numba = njit(cache=True)(_sector_counts_loop)
    segment_covered_numba = njit(cache=True)(_segment_covered_loop)
else:  # pragma: no cover
    sector_counts_numba = None
    segment_covered_numba = None

if BACKEND == "numba":
    sector_counts = sector_counts_numba
    segment_covered = segment_covered_numba
else:
    sector_counts = sector_counts_numpy
    segment_covered = segment_covered_numpy


def disk_samples(radius: float, samples: int, seed: int, method: str = "stratified") -> tuple[np.ndarray, np.ndarray]:
    """Uniform samples over the square ``[-r, r]^2`` (callers reject outside the disk).

    ``stratified`` jitters one sample in each cell of a ``k x k`` grid with
    ``k = isqrt(samples)``; ``plain`` draws independent uniforms.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    if method == "plain":
        xy = rng.uniform(-radius, radius, size=(samples, 2))
        return xy[:, 0].copy(), xy[:, 1].copy()
    if method != "stratified":
        raise ValueError(f"unknown sampling method {method!r}")
    k = max(1, math.isqrt(samples))
    i, j = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    jitter = rng.random((2, k, k))
    xs = ((i + jitter[0]) / k * 2.0 - 1.0) * radius
    ys = ((j + jitter[1]) / k * 2.0 - 1.0) * radius
    return xs.ravel(), ys.ravel()
