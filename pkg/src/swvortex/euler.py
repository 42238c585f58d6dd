"""Steady Euler vortices built from the shallow-water angular velocity laws.

A steady swirl with ``u_r = 0`` solves the compressible Euler equations iff
``r p'(r) = rho(r) u_theta(r)**2``.  Two closed constructions are provided:

* isentropic, ``p = rho**gamma`` with
  ``rho = (rho0 - (gamma-1)/gamma * I(r))**(1/(gamma-1))``;
* isochoric, ``rho = rho0`` and ``p = p0 - rho0 * I(r)``;

where ``I(r) = int_r^inf s omega(s)**2 ds`` is the swirl integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vortex import CosPower, Gaussian, VortexSpec, depth_deficit, displacement, omega

ISENTROPIC = "isentropic"
ISOCHORIC = "isochoric"

GAUSS_ANCHOR = 8.0
QUAD_POINTS = 16
QUAD_PANELS = 64

_XI, _WI = np.polynomial.legendre.leggauss(QUAD_POINTS)


def swirl_anchor(spec: VortexSpec) -> float:
    """Radius beyond which the swirl integral is taken as zero."""
    if isinstance(spec.family, Gaussian):
        return GAUSS_ANCHOR * spec.r0
    return spec.r0


def swirl_integral(spec: VortexSpec, r, chunk: int = 4096):
    """``int_r^anchor s omega(s)**2 ds``.

    Closed form for the cos-power family (``g (h0 - h)``), composite
    Gauss-Legendre quadrature otherwise.
    """
    r = np.asarray(r, dtype=float)
    if isinstance(spec.family, CosPower):
        return spec.g * depth_deficit(spec, r)

    anchor = swirl_anchor(spec)
    flat = np.minimum(r.ravel(), anchor)
    out = np.empty_like(flat)
    # panel nodes on [0, 1], mapped to [r, anchor] per radius
    edges = np.linspace(0.0, 1.0, QUAD_PANELS + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * _XI[None, :]).ravel()
    weights = (half[:, None] * _WI[None, :]).ravel()
    for start in range(0, flat.size, chunk):
        a = flat[start:start + chunk, None]
        length = anchor - a
        s = a + length * nodes[None, :]
        out[start:start + chunk] = length[:, 0] * ((s * omega(spec, s) ** 2) @ weights)
    return out.reshape(r.shape)


@dataclass(frozen=True)
class EulerVortexField:
    """Exact steady Euler vortex derived from a shallow-water ``VortexSpec``.

    ``rho0`` is the additive constant inside the isentropic power (so the
    far-field density is ``rho0**(1/(gamma-1))``) and the constant density of
    the isochoric vortex; ``p0`` is the isochoric far-field pressure.
    """

    spec: VortexSpec
    kind: str = ISENTROPIC
    gamma_gas: float = 1.4
    rho0: float = 1.0
    p0: float = 1.0

    def __post_init__(self):
        if self.kind not in (ISENTROPIC, ISOCHORIC):
            raise ValueError(f"kind must be {ISENTROPIC!r} or {ISOCHORIC!r}, got {self.kind!r}")
        if not self.gamma_gas > 1:
            raise ValueError(f"adiabatic constant must exceed 1, got {self.gamma_gas}")
        if not self.rho0 > 0:
            raise ValueError(f"rho0 must be positive, got {self.rho0}")
        center = float(swirl_integral(self.spec, 0.0))
        if self.kind == ISENTROPIC:
            base = self.rho0 - (self.gamma_gas - 1.0) / self.gamma_gas * center
            if not base > 0:
                raise ValueError("vacuum at the vortex center; reduce the swirl amplitude")
        elif not self.p0 - self.rho0 * center > 0:
            raise ValueError("nonpositive pressure at the vortex center; raise p0")

    def density(self, r):
        if self.kind == ISOCHORIC:
            return np.full_like(np.asarray(r, dtype=float), self.rho0)
        return isentropic_density(self, r)

    def pressure(self, r):
        if self.kind == ISOCHORIC:
            return isochoric_pressure(self, r)
        return isentropic_density(self, r) ** self.gamma_gas


def isentropic_density(field: EulerVortexField, r):
    """Density of the isentropic vortex (``p = rho**gamma``)."""
    gm = field.gamma_gas
    if not gm > 1:
        raise ValueError(f"adiabatic constant must exceed 1, got {gm}")
    base = field.rho0 - (gm - 1.0) / gm * swirl_integral(field.spec, r)
    return base ** (1.0 / (gm - 1.0))


def isochoric_pressure(field: EulerVortexField, r):
    """Pressure of the constant-density vortex."""
    return field.p0 - field.rho0 * swirl_integral(field.spec, r)


def eval_euler_cartesian(field: EulerVortexField, x, y, t: float = 0.0, period=None):
    """Conserved Euler variables ``(rho, rho u_x, rho u_y, rho E)`` at points."""
    spec = field.spec
    zx, zy = displacement(spec, x, y, t, period)
    r = np.hypot(zx, zy)
    w = omega(spec, r)
    ux = spec.u_inf[0] - w * zy
    uy = spec.u_inf[1] + w * zx
    rho = field.density(r)
    p = field.pressure(r)
    energy = p / (field.gamma_gas - 1.0) + 0.5 * rho * (ux**2 + uy**2)
    return rho, rho * ux, rho * uy, energy


def euler_cell_averages(field: EulerVortexField, x_edges, y_edges, t: float = 0.0, q: int = 4,
                        period=None):
    """Tensor Gauss-Legendre cell averages, shape ``(4, nx, ny)``."""
    xi, wi = np.polynomial.legendre.leggauss(q)
    xi, wi = 0.5 * xi, 0.5 * wi
    x_edges = np.asarray(x_edges, dtype=float)
    y_edges = np.asarray(y_edges, dtype=float)
    dx, dy = np.diff(x_edges), np.diff(y_edges)
    xc = 0.5 * (x_edges[1:] + x_edges[:-1])
    yc = 0.5 * (y_edges[1:] + y_edges[:-1])
    out = np.zeros((4, xc.size, yc.size))
    yb = (yc[:, None] + xi[None, :] * dy[:, None])[None, :, :]
    for a in range(q):
        xa = (xc + xi[a] * dx)[:, None, None]
        for k, comp in enumerate(eval_euler_cartesian(field, xa, yb, t, period)):
            out[k] += wi[a] * (comp @ wi)
    return out
