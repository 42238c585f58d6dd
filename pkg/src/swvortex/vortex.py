"""Exact vortex solutions of the shallow water equations.

Every solution is a radially symmetric depth/angular-velocity pair in
cyclostrophic balance, ``g h'(r) = r omega(r)**2``, optionally advected by a
constant background velocity.  Four families are available:

``CosPower(p)``
    ``omega = G (1 + cos(pi r / r0))**p`` inside ``r0``, ``C^{2p}`` regular.
``Gaussian()``
    ``omega = G exp(-(r/r0)**2)``, not compactly supported.
``ExpBump(p)``
    ``h = h0 - G**2 exp(-1 / (1 - rho)**p)``, ``rho = (r/r0)**2``, ``C^inf``.
``ArctanBump(p)``
    ``h = h0 - G**2 exp(-1 / arctan(1 - rho)**p)``, ``C^inf``.

All evaluators accept scalars or numpy arrays of radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

__all__ = [
    "CosPower",
    "Gaussian",
    "ExpBump",
    "ArctanBump",
    "VortexFamily",
    "VortexSpec",
    "RadialProfile",
    "rb_antiderivative",
    "cos_power_antiderivative",
    "omega",
    "u_theta",
    "depth",
    "depth_deficit",
    "calibrate_gamma",
    "radial_derivative",
    "displacement",
    "eval_cartesian",
    "exact_cell_average",
    "cell_averages",
    "family_from_name",
]


# {{{ families


def _check_exponent(p):
    if int(p) != p or p < 1:
        raise ValueError(f"exponent p must be a positive integer, got {p!r}")


@dataclass(frozen=True)
class CosPower:
    p: int = 1

    def __post_init__(self):
        _check_exponent(self.p)

    compact = True
    name = "cos"


@dataclass(frozen=True)
class Gaussian:
    compact = False
    name = "gauss"


@dataclass(frozen=True)
class ExpBump:
    p: int = 2

    def __post_init__(self):
        _check_exponent(self.p)

    compact = True
    name = "expbump"


@dataclass(frozen=True)
class ArctanBump:
    p: int = 2

    def __post_init__(self):
        _check_exponent(self.p)

    compact = True
    name = "arctan"


VortexFamily = Union[CosPower, Gaussian, ExpBump, ArctanBump]


def family_from_name(name: str, p: int = 1) -> VortexFamily:
    """Build a family from its command-line name (``cos``, ``gauss``, ...)."""
    if name == "cos":
        return CosPower(p)
    if name == "gauss":
        return Gaussian()
    if name == "expbump":
        return ExpBump(p)
    if name == "arctan":
        return ArctanBump(p)
    raise ValueError(f"unknown vortex family {name!r}")


# }}}


# {{{ antiderivatives of y cos^{4p}(y)


def rb_antiderivative(x):
    """Antiderivative of ``x (1 + cos x)**2``, the classic cos-vortex kernel."""
    x = np.asarray(x, dtype=float)
    return (
        2.0 * np.cos(x)
        + 2.0 * x * np.sin(x)
        + np.cos(2.0 * x) / 8.0
        + x * np.sin(2.0 * x) / 4.0
        + 12.0 * x**2 / 16.0
    )


def cos_power_antiderivative(p: int, x):
    r"""Antiderivative of :math:`y \cos^{4p}(y)`.

    Built from ``rb_antiderivative(2x) / 16`` for ``p = 1`` and a reduction
    formula in ``p`` otherwise.  The additive constant is chosen so that the
    ``p = 1, 2, 3`` values at ``x = 0`` agree with the tabulated closed forms
    (``9/64``, ``1313/9216``, ``246341/1843200``).
    """
    _check_exponent(p)
    x = np.asarray(x, dtype=float)
    c = np.cos(x)
    s = np.sin(x)
    value = rb_antiderivative(2.0 * x) / 16.0 + 1.0 / 128.0
    for k in range(2, p + 1):
        n = 4 * k
        value = (
            (n - 1) * (n - 3) / (n * (n - 2)) * value
            + x * c ** (n - 3) * s / n * ((n - 1) / (n - 2) + c**2)
            + c ** (n - 2) * (c**2 / n**2 + (n - 1) / (n * (n - 2) ** 2))
        )
    return value


def _cos_power_span(p: int) -> float:
    return float(cos_power_antiderivative(p, math.pi / 2) - cos_power_antiderivative(p, 0.0))


# }}}


# {{{ spec


def _depth_deficit_at_center(family, r0, gamma_amp, g):
    if isinstance(family, CosPower):
        scale = (2 ** (family.p + 1) * gamma_amp * r0 / math.pi) ** 2 / g
        return scale * _cos_power_span(family.p)
    if isinstance(family, Gaussian):
        return gamma_amp**2 * r0**2 / (4.0 * g)
    if isinstance(family, ExpBump):
        return gamma_amp**2 * math.exp(-1.0)
    if isinstance(family, ArctanBump):
        return gamma_amp**2 * math.exp(-1.0 / math.atan(1.0) ** family.p)
    raise TypeError(f"not a vortex family: {family!r}")


@dataclass(frozen=True)
class VortexSpec:
    """Complete description of one exact vortex solution.

    Parameters
    ----------
    family : VortexFamily
    r0 : float
        Vortex radius (support radius for compact families, width otherwise).
    h0 : float
        Far-field depth.
    gamma_amp : float
        Amplitude of the angular velocity.
    g : float
        Gravity.
    center : tuple of float
        Vortex center at ``t = 0``.
    u_inf : tuple of float
        Background advection velocity.
    """

    family: VortexFamily = field(default_factory=CosPower)
    r0: float = 1.0
    h0: float = 1.0
    gamma_amp: float = 0.0
    g: float = 1.0
    center: Tuple[float, float] = (0.0, 0.0)
    u_inf: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if not self.h0 > 0:
            raise ValueError(f"h0 must be positive, got {self.h0}")
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if not self.gamma_amp >= 0:
            raise ValueError(f"gamma_amp must be nonnegative, got {self.gamma_amp}")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "u_inf", tuple(float(c) for c in self.u_inf))
        if len(self.center) != 2 or len(self.u_inf) != 2:
            raise ValueError("center and u_inf must be 2D")

        h_min = self.h0 - _depth_deficit_at_center(self.family, self.r0, self.gamma_amp, self.g)
        if not h_min > 0:
            raise ValueError(
                f"dry state: depth at the vortex center is {h_min:.6g} <= 0; "
                "reduce gamma_amp"
            )

    @classmethod
    def from_hmin(cls, family, r0, h0, h_min, g=1.0, center=(0.0, 0.0), u_inf=(0.0, 0.0)):
        """Build a spec whose depth at the vortex center equals ``h_min``."""
        gamma_amp = calibrate_gamma(family, r0, h0, h_min, g)
        return cls(family, r0, h0, gamma_amp, g, center, u_inf)

    @property
    def h_min(self) -> float:
        return float(depth(self, 0.0))


def calibrate_gamma(family, r0, h0, h_min, g=1.0) -> float:
    """Return the amplitude for which the depth at the center is ``h_min``."""
    if not 0 < h_min < h0:
        raise ValueError(f"need 0 < h_min < h0, got h_min={h_min}, h0={h0}")
    dh = h0 - h_min
    if isinstance(family, CosPower):
        return math.pi / (2 ** (family.p + 1) * r0) * math.sqrt(g * dh / _cos_power_span(family.p))
    if isinstance(family, Gaussian):
        return 2.0 / r0 * math.sqrt(g * dh)
    if isinstance(family, ExpBump):
        return math.sqrt(dh * math.e)
    if isinstance(family, ArctanBump):
        return math.sqrt(dh * math.exp(1.0 / math.atan(1.0) ** family.p))
    raise TypeError(f"not a vortex family: {family!r}")


# }}}


# {{{ radial evaluators


def _radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    return r


def _masked(r, inside, fn):
    # evaluate fn only where inside, exact zero elsewhere
    out = np.zeros_like(r)
    if np.any(inside):
        out[inside] = fn(r[inside])
    return out


def omega(spec: VortexSpec, r):
    """Angular velocity ``omega(r)``."""
    r = _radius(r)
    fam, r0, G = spec.family, spec.r0, spec.gamma_amp

    if isinstance(fam, Gaussian):
        return G * np.exp(-((r / r0) ** 2))
    if isinstance(fam, CosPower):
        fn = lambda s: G * (1.0 + np.cos(np.pi * s / r0)) ** fam.p  # noqa: E731
    elif isinstance(fam, ExpBump):
        p = fam.p

        def fn(s):
            t = 1.0 - (s / r0) ** 2
            log_w = 0.5 * (math.log(2 * p * spec.g / r0**2) - (p + 1) * np.log(t)) - 0.5 / t**p
            return G * np.exp(log_w)

    elif isinstance(fam, ArctanBump):
        p = fam.p

        def fn(s):
            t = 1.0 - (s / r0) ** 2
            a = np.arctan(t)
            log_w = (
                0.5 * (math.log(2 * p * spec.g / r0**2) - (p + 1) * np.log(a) - np.log1p(t**2))
                - 0.5 / a**p
            )
            return G * np.exp(log_w)

    else:
        raise TypeError(f"not a vortex family: {fam!r}")

    return _masked(r, r < r0, fn)


def u_theta(spec: VortexSpec, r):
    """Tangential velocity ``r omega(r)``."""
    r = _radius(r)
    return r * omega(spec, r)


def depth_deficit(spec: VortexSpec, r):
    """``h0 - h(r)``, computed directly to keep its relative precision."""
    r = _radius(r)
    fam, r0, G, g = spec.family, spec.r0, spec.gamma_amp, spec.g

    if isinstance(fam, Gaussian):
        return G**2 * r0**2 / (4.0 * g) * np.exp(-2.0 * (r / r0) ** 2)
    if isinstance(fam, CosPower):
        p = fam.p
        scale = (2 ** (p + 1) * G * r0 / math.pi) ** 2 / g
        top = float(cos_power_antiderivative(p, math.pi / 2))
        fn = lambda s: scale * (top - cos_power_antiderivative(p, np.pi * s / (2 * r0)))  # noqa: E731
    elif isinstance(fam, ExpBump):
        fn = lambda s: G**2 * np.exp(-1.0 / (1.0 - (s / r0) ** 2) ** fam.p)  # noqa: E731
    elif isinstance(fam, ArctanBump):
        fn = lambda s: G**2 * np.exp(-1.0 / np.arctan(1.0 - (s / r0) ** 2) ** fam.p)  # noqa: E731
    else:
        raise TypeError(f"not a vortex family: {fam!r}")

    return _masked(r, r < r0, fn)


def depth(spec: VortexSpec, r):
    """Water depth ``h(r)``."""
    return spec.h0 - depth_deficit(spec, r)


# }}}


# {{{ derivatives

def fd_weights(offsets, k: int) -> np.ndarray:
    """Weights ``w`` with ``sum(w * f(x + o*h)) / h**k ~ f^(k)(x)``."""
    offsets = np.asarray(offsets, dtype=float)
    n = offsets.size
    V = offsets[None, :] ** np.arange(n)[:, None]
    rhs = np.zeros(n)
    rhs[k] = math.factorial(k)
    return np.linalg.solve(V, rhs)


# second-order stencils for the k-th derivative
_CENTRAL = {k: np.arange(-((k + 1) // 2), (k + 1) // 2 + 1) for k in range(1, 6)}
_BACKWARD = {k: np.arange(-(k + 1), 1) for k in range(1, 6)}
_FORWARD = {k: np.arange(0, k + 2) for k in range(1, 6)}


def fd_step(r0: float, k: int) -> float:
    """Finite-difference step used for the ``k``-th radial derivative."""
    return max(r0, 1.0) * np.finfo(float).eps ** (1.0 / (k + 2))


class RadialProfile:
    """Radial evaluators of one vortex, with derivatives up to fifth order.

    Depth derivatives are taken on ``-(h0 - h)`` and the profiles are extended
    to negative radii by parity (``h`` even, ``u_theta`` odd) so that central
    stencils remain valid at ``r = 0``.  For compact families a stencil that
    would cross ``r0`` is replaced by a one-sided one on the side of the
    evaluation point; at ``r = r0`` this gives the interior limit.
    """

    def __init__(self, spec: VortexSpec):
        self.spec = spec

    def omega(self, r):
        return omega(self.spec, r)

    def u_theta(self, r):
        return u_theta(self.spec, r)

    def depth(self, r):
        return depth(self.spec, r)

    def _extended(self, which, s):
        a = np.abs(s)
        if which == "h":
            return -depth_deficit(self.spec, a)
        return s * omega(self.spec, a)

    def _apply(self, which, k, r, offsets, step):
        w = fd_weights(offsets, k)
        total = np.zeros_like(r)
        for o, c in zip(offsets, w):
            if c != 0.0:
                total = total + c * self._extended(which, r + o * step)
        return total / step**k

    def derivative(self, which: str, k: int, r):
        if which not in ("h", "u_theta"):
            raise ValueError(f"which must be 'h' or 'u_theta', got {which!r}")
        if k not in _CENTRAL:
            raise ValueError(f"derivative order must be in 1..5, got {k}")
        r = _radius(r)
        if r.ndim == 0:
            return self.derivative(which, k, r[None])[0]
        if which == "h" and k == 1:
            return r * omega(self.spec, r) ** 2 / self.spec.g

        step = fd_step(self.spec.r0, k)
        out = self._apply(which, k, r, _CENTRAL[k], step)
        if self.spec.family.compact:
            r0 = self.spec.r0
            reach = _CENTRAL[k][-1] * step
            inner = (r <= r0) & (r + reach > r0)
            outer = (r > r0) & (r - reach < r0)
            if np.any(inner):
                out[inner] = self._apply(which, k, r[inner], _BACKWARD[k], step)
            if np.any(outer):
                out[outer] = self._apply(which, k, r[outer], _FORWARD[k], step)
        return out


def radial_derivative(profile: RadialProfile, which: str, k: int, r):
    """``k``-th radial derivative of ``h`` or ``u_theta`` (``k`` in 1..5)."""
    return profile.derivative(which, k, r)


# }}}


# {{{ cartesian fields


def displacement(spec: VortexSpec, x, y, t: float = 0.0, period=None):
    """Offset of ``(x, y)`` from the advected vortex center.

    With ``period = (Lx, Ly)`` the offset is reduced to its minimum image, which
    is exact for compact vortices narrower than half the period.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    zx = x - spec.center[0] - spec.u_inf[0] * t
    zy = y - spec.center[1] - spec.u_inf[1] * t
    if period is not None:
        lx, ly = period
        zx = zx - lx * np.round(zx / lx)
        zy = zy - ly * np.round(zy / ly)
    return zx, zy


def eval_cartesian(spec: VortexSpec, x, y, t: float = 0.0, period=None):
    """Depth and velocity at points ``(x, y)`` and time ``t``.

    Returns ``(h, u_x, u_y)`` broadcast to the shape of ``x`` and ``y``.
    """
    ux_inf, uy_inf = spec.u_inf
    zx, zy = displacement(spec, x, y, t, period)
    r = np.hypot(zx, zy)

    # u_theta * (-zy, zx) / r == omega * (-zy, zx); no division at the center
    w = omega(spec, r)
    h = depth(spec, r)
    return h, ux_inf - w * zy, uy_inf + w * zx


def _gauss_nodes(q: int):
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    xi, wi = np.polynomial.legendre.leggauss(q)
    return 0.5 * xi, 0.5 * wi


def exact_cell_average(spec: VortexSpec, cell, t: float = 0.0, q: int = 4, period=None):
    """Tensor Gauss-Legendre cell average of ``(h, h u_x, h u_y)``.

    ``cell`` is ``(x_lo, x_hi, y_lo, y_hi)``.
    """
    x_lo, x_hi, y_lo, y_hi = cell
    avg = cell_averages(spec, np.array([x_lo, x_hi]), np.array([y_lo, y_hi]), t, q, period)
    return tuple(float(a[0, 0]) for a in avg)


def cell_averages(spec: VortexSpec, x_edges, y_edges, t: float = 0.0, q: int = 4, period=None):
    """Cell averages of the conserved variables on a tensor grid.

    Returns an array of shape ``(3, nx, ny)``.
    """
    xi, wi = _gauss_nodes(q)
    x_edges = np.asarray(x_edges, dtype=float)
    y_edges = np.asarray(y_edges, dtype=float)
    dx = np.diff(x_edges)
    dy = np.diff(y_edges)
    xc = 0.5 * (x_edges[1:] + x_edges[:-1])
    yc = 0.5 * (y_edges[1:] + y_edges[:-1])

    # integrate the departure from the far-field state so that cells the
    # vortex does not reach come out exactly constant
    far = (spec.h0, spec.h0 * spec.u_inf[0], spec.h0 * spec.u_inf[1])
    out = np.zeros((3, xc.size, yc.size))
    # loop over the q x-nodes to bound memory on fine grids
    for a in range(q):
        xa = (xc + xi[a] * dx)[:, None, None]
        yb = (yc[:, None] + xi[None, :] * dy[:, None])[None, :, :]
        h, ux, uy = eval_cartesian(spec, xa, yb, t, period)
        out[0] += wi[a] * ((h - far[0]) @ wi)
        out[1] += wi[a] * ((h * ux - far[1]) @ wi)
        out[2] += wi[a] * ((h * uy - far[2]) @ wi)
    for k in range(3):
        out[k] += far[k]
    return out


# }}}
