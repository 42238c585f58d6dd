"""Fifth-order WENO reconstruction (Jiang-Shu) from cell averages.

Cells are indexed by their offset from the reconstruction cell, ``-2..2``;
candidate stencil ``k`` covers offsets ``k-2..k``.  Points inside the cell are
given in the local coordinate ``xi in [-1/2, 1/2]``.
"""

from __future__ import annotations

from functools import lru_cache

import numba
import numpy as np

EPSILON = 1.0e-6
POWER = 2


def _average_matrix(offsets):
    # A[j, m] = cell average of xi**m over the cell with offset offsets[j]
    n = len(offsets)
    m = np.arange(n)
    hi = (np.asarray(offsets, dtype=float)[:, None] + 0.5) ** (m + 1)
    lo = (np.asarray(offsets, dtype=float)[:, None] - 0.5) ** (m + 1)
    return (hi - lo) / (m + 1)


def _point_coefficients(offsets, xi):
    """Weights ``c`` with ``P(xi) = c @ ubar`` for the interpolant of ``offsets``."""
    A = _average_matrix(offsets)
    v = float(xi) ** np.arange(len(offsets))
    return np.linalg.solve(A.T, v)


@lru_cache(maxsize=None)
def _coefficients(xi: float):
    if xi < 0:
        # mirror the nonnegative point so that left/right states are bit-symmetric
        c, d = _coefficients(-xi)
        return c[::-1, ::-1].copy(), d[::-1].copy()

    c = np.array([_point_coefficients(range(k - 2, k + 1), xi) for k in range(3)])
    big = _point_coefficients(range(-2, 3), xi)
    d0 = big[0] / c[0, 0]
    d2 = big[4] / c[2, 2]
    d = np.array([d0, 1.0 - d0 - d2, d2])
    if np.any(d <= 0):
        raise ValueError(f"linear WENO5 weights are not positive at xi={xi}")
    return c, d


def candidate_coefficients(xi: float) -> np.ndarray:
    """``(3, 3)`` matrix of candidate-stencil point coefficients at ``xi``."""
    return _coefficients(float(xi))[0].copy()


def linear_weights(xi: float) -> np.ndarray:
    """Ideal weights combining the three quadratics into the quartic at ``xi``."""
    return _coefficients(float(xi))[1].copy()


def smoothness_indicators(um2, um1, u0, up1, up2):
    """Jiang-Shu smoothness indicators of the three candidate stencils.

    Sums are grouped so that mirroring the stencil swaps ``b0`` and ``b2``
    bit for bit.
    """
    b0 = 13.0 / 12.0 * ((um2 + u0) - 2.0 * um1) ** 2 + 0.25 * ((3.0 * u0 + um2) - 4.0 * um1) ** 2
    b1 = 13.0 / 12.0 * ((um1 + up1) - 2.0 * u0) ** 2 + 0.25 * (um1 - up1) ** 2
    b2 = 13.0 / 12.0 * ((u0 + up2) - 2.0 * up1) ** 2 + 0.25 * ((3.0 * u0 + up2) - 4.0 * up1) ** 2
    return b0, b1, b2


def _combine(stencil, betas, xi):
    # candidates are written as u0 + (weighted differences): constants are
    # reproduced exactly and mirrored data give mirrored results bit for bit
    c, d = _coefficients(float(xi))
    um2, um1, u0, up1, up2 = stencil
    b0, b1, b2 = betas
    a0 = d[0] / (EPSILON + b0) ** POWER
    a1 = d[1] / (EPSILON + b1) ** POWER
    a2 = d[2] / (EPSILON + b2) ** POWER
    q0 = c[0, 0] * (um2 - u0) + c[0, 1] * (um1 - u0)
    q1 = c[1, 0] * (um1 - u0) + c[1, 2] * (up1 - u0)
    q2 = c[2, 1] * (up1 - u0) + c[2, 2] * (up2 - u0)
    return u0 + ((a0 * q0 + a2 * q2) + a1 * q1) / ((a0 + a2) + a1)


def weno5_reconstruct(v):
    """Face values of the central cell from five consecutive cell averages.

    Returns ``(value at the left face, value at the right face)``.
    """
    v = [np.asarray(x, dtype=float) for x in v]
    if len(v) != 5:
        raise ValueError("WENO5 needs exactly 5 cell averages")
    betas = smoothness_indicators(*v)
    left = _combine(v, betas, -0.5)
    right = _combine(v, betas, 0.5)
    return left, right


def weno5_points_numpy(u: np.ndarray, axis: int, points) -> list:
    """Vectorised numpy version of :func:`weno5_points`."""
    n = u.shape[axis]
    if n < 5:
        raise ValueError(f"WENO5 needs at least 5 cells along axis {axis}, got {n}")
    pad = [(0, 0)] * u.ndim
    pad[axis] = (2, 2)
    up = np.pad(u, pad, mode="wrap")

    def shifted(k):
        sl = [slice(None)] * u.ndim
        sl[axis] = slice(2 + k, 2 + k + n)
        return up[tuple(sl)]

    stencil = [shifted(k) for k in range(-2, 3)]
    betas = smoothness_indicators(*stencil)
    return [_combine(stencil, betas, xi) for xi in points]


@numba.njit(cache=True)
def _weno_kernel(u, coef, lin, eps, out):
    # u: (m, n, k) reconstructed along the middle axis with periodic wrap
    # coef: (npts, 3, 3), lin: (npts, 3), out: (npts, m, n, k)
    m, n, k = u.shape
    npts = coef.shape[0]
    for a in range(m):
        for i in range(n):
            im2 = (i - 2) % n
            im1 = (i - 1) % n
            ip1 = (i + 1) % n
            ip2 = (i + 2) % n
            for j in range(k):
                v0 = u[a, im2, j]
                v1 = u[a, im1, j]
                v2 = u[a, i, j]
                v3 = u[a, ip1, j]
                v4 = u[a, ip2, j]
                t0 = (v0 + v2) - 2.0 * v1
                t1 = (3.0 * v2 + v0) - 4.0 * v1
                b0 = 13.0 / 12.0 * t0 * t0 + 0.25 * t1 * t1
                t0 = (v1 + v3) - 2.0 * v2
                t1 = v1 - v3
                b1 = 13.0 / 12.0 * t0 * t0 + 0.25 * t1 * t1
                t0 = (v2 + v4) - 2.0 * v3
                t1 = (3.0 * v2 + v4) - 4.0 * v3
                b2 = 13.0 / 12.0 * t0 * t0 + 0.25 * t1 * t1
                s0 = 1.0 / ((eps + b0) * (eps + b0))
                s1 = 1.0 / ((eps + b1) * (eps + b1))
                s2 = 1.0 / ((eps + b2) * (eps + b2))
                d0 = v0 - v2
                d1 = v1 - v2
                d3 = v3 - v2
                d4 = v4 - v2
                for p in range(npts):
                    a0 = lin[p, 0] * s0
                    a1 = lin[p, 1] * s1
                    a2 = lin[p, 2] * s2
                    q0 = coef[p, 0, 0] * d0 + coef[p, 0, 1] * d1
                    q1 = coef[p, 1, 0] * d1 + coef[p, 1, 2] * d3
                    q2 = coef[p, 2, 1] * d3 + coef[p, 2, 2] * d4
                    out[p, a, i, j] = v2 + ((a0 * q0 + a2 * q2) + a1 * q1) / ((a0 + a2) + a1)


def weno5_points(u: np.ndarray, axis: int, points, eps: float = EPSILON) -> np.ndarray:
    """Periodic WENO5 reconstruction of ``u`` at local ``points`` along ``axis``.

    Returns an array of shape ``(len(points),) + u.shape``.
    """
    u = np.ascontiguousarray(u, dtype=float)
    n = u.shape[axis]
    if n < 5:
        raise ValueError(f"WENO5 needs at least 5 cells along axis {axis}, got {n}")
    m = int(np.prod(u.shape[:axis], dtype=int))
    k = int(np.prod(u.shape[axis + 1:], dtype=int))
    coef = np.array([_coefficients(float(xi))[0] for xi in points])
    lin = np.array([_coefficients(float(xi))[1] for xi in points])
    out = np.empty((len(coef), m, n, k))
    _weno_kernel(u.reshape(m, n, k), coef, lin, eps, out)
    return out.reshape((len(coef),) + u.shape)
