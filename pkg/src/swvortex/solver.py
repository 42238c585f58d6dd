"""Finite-volume solver for the 2D shallow water equations.

Uniform periodic Cartesian grid, cell averages of ``(h, hu, hv)``.  Face
fluxes are integrated with a 4-point Gauss rule: a WENO5 pass normal to the
face gives face-line averages, a second WENO5 pass along the face gives point
values at the Gauss nodes, and the Rusanov flux is evaluated there.  Time
integration uses the RK(6,5) tableau.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .rk import RK65, ButcherTableau
from .vortex import VortexSpec, cell_averages
from .weno import weno5_points

log = logging.getLogger(__name__)

FACE_QUADRATURE = 4


class SolverInstability(RuntimeError):
    """Raised on nonpositive depth or non-finite values."""

    def __init__(self, message, t=None, cell=None):
        super().__init__(message)
        self.t = t
        self.cell = cell


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    domain: Tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)

    def __post_init__(self):
        if self.nx < 5 or self.ny < 5:
            raise ValueError(f"grid needs at least 5 cells per direction, got {self.nx}x{self.ny}")
        x0, x1, y0, y1 = self.domain
        if not (x1 > x0 and y1 > y0):
            raise ValueError(f"degenerate domain {self.domain}")

    @classmethod
    def square(cls, n: int, domain=(0.0, 1.0, 0.0, 1.0)) -> "Grid":
        return cls(n, n, tuple(domain))

    @property
    def period(self) -> Tuple[float, float]:
        return (self.domain[1] - self.domain[0], self.domain[3] - self.domain[2])

    @property
    def dx(self) -> float:
        return (self.domain[1] - self.domain[0]) / self.nx

    @property
    def dy(self) -> float:
        return (self.domain[3] - self.domain[2]) / self.ny

    @property
    def x_edges(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.nx + 1)

    @property
    def y_edges(self) -> np.ndarray:
        return np.linspace(self.domain[2], self.domain[3], self.ny + 1)

    @property
    def x_centers(self) -> np.ndarray:
        e = self.x_edges
        return 0.5 * (e[1:] + e[:-1])

    @property
    def y_centers(self) -> np.ndarray:
        e = self.y_edges
        return 0.5 * (e[1:] + e[:-1])


@dataclass
class FieldState:
    """Cell averages ``U[var, i, j]`` with ``var`` in ``(h, hu, hv)``."""

    grid: Grid
    U: np.ndarray
    t: float = 0.0
    g: float = 1.0

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=float)
        if self.U.shape != (3, self.grid.nx, self.grid.ny):
            raise ValueError(f"state shape {self.U.shape} does not match grid {self.grid}")

    @property
    def h(self):
        return self.U[0]

    def velocities(self):
        return self.U[1] / self.U[0], self.U[2] / self.U[0]

    def total_mass(self) -> float:
        return float(np.sum(self.U[0], dtype=np.float64) * self.grid.dx * self.grid.dy)


def initial_state(spec: VortexSpec, grid: Grid, t: float = 0.0, q: int = 4) -> FieldState:
    U = cell_averages(spec, grid.x_edges, grid.y_edges, t, q, grid.period)
    return FieldState(grid, U, t, spec.g)


# {{{ fluxes


def physical_flux(U, axis: int, g: float):
    h, hu, hv = U
    un = (hu if axis == 0 else hv) / h
    F = np.empty_like(U)
    F[0] = h * un
    F[1] = hu * un
    F[2] = hv * un
    F[1 + axis] += 0.5 * g * h * h
    return F


def rusanov_flux(UL, UR, axis: int, g: float = 1.0):
    """Rusanov flux between left/right states along ``axis`` (0: x, 1: y)."""
    UL = np.asarray(UL, dtype=float)
    UR = np.asarray(UR, dtype=float)
    hL, hR = UL[0], UR[0]
    if not (np.all(hL > 0) and np.all(hR > 0)):
        bad = np.argwhere(~((hL > 0) & (hR > 0)))
        raise SolverInstability(f"nonpositive depth in Riemann states at index {bad[0].tolist()}",
                                cell=tuple(bad[0].tolist()))
    lamL = np.abs(UL[1 + axis] / hL) + np.sqrt(g * hL)
    lamR = np.abs(UR[1 + axis] / hR) + np.sqrt(g * hR)
    lam = np.maximum(lamL, lamR)
    return 0.5 * (physical_flux(UL, axis, g) + physical_flux(UR, axis, g)) - 0.5 * lam * (UR - UL)


# }}}


# {{{ semi-discretisation


@dataclass(frozen=True)
class _FaceRule:
    nodes: tuple
    weights: tuple


def _face_rule(q):
    xi, wi = np.polynomial.legendre.leggauss(q)
    return _FaceRule(tuple(0.5 * xi), tuple(0.5 * wi))


_FACE = _face_rule(FACE_QUADRATURE)


def _face_flux(U, axis: int, g: float):
    """Gauss-averaged flux through the upper face ``i + 1/2`` of every cell."""
    normal = 1 + axis
    tangential = 2 - axis
    minus, plus = weno5_points(U, normal, (-0.5, 0.5))
    # left state of face i+1/2 is plus[i], right state is minus[i+1]
    right = np.roll(minus, -1, axis=normal)
    left_pts = weno5_points(plus, tangential, _FACE.nodes)
    right_pts = weno5_points(right, tangential, _FACE.nodes)
    f = [rusanov_flux(UL, UR, axis, g) for UL, UR in zip(left_pts, right_pts)]
    # pair nodes symmetric about the face midpoint
    n = len(f)
    F = _FACE.weights[0] * (f[0] + f[n - 1])
    for k in range(1, n // 2):
        F = F + _FACE.weights[k] * (f[k] + f[n - 1 - k])
    if n % 2:
        F = F + _FACE.weights[n // 2] * f[n // 2]
    return F


def rhs(state: FieldState) -> np.ndarray:
    """Time derivative of all cell averages."""
    return _rhs_array(state.U, state.grid, state.g)


def _rhs_array(U, grid: Grid, g: float):
    Fx = _face_flux(U, 0, g)
    Fy = _face_flux(U, 1, g)
    dU = -(Fx - np.roll(Fx, 1, axis=1)) / grid.dx
    dU -= (Fy - np.roll(Fy, 1, axis=2)) / grid.dy
    return dU


# }}}


# {{{ time stepping


def compute_dt(state: FieldState, cfl: float, t_final: Optional[float] = None) -> float:
    """CFL time step, clipped to land on ``t_final`` when given."""
    if not 0 < cfl <= 1:
        raise ValueError(f"cfl must be in (0, 1], got {cfl}")
    u, v = state.velocities()
    c = np.sqrt(state.g * state.h)
    rate = (np.abs(u) + c) / state.grid.dx + (np.abs(v) + c) / state.grid.dy
    dt = cfl / float(np.max(rate))
    if t_final is not None:
        dt = min(dt, t_final - state.t)
    return dt


def rk_step(state: FieldState, dt: float, tableau: ButcherTableau = RK65) -> FieldState:
    """Advance ``state`` by ``dt`` with an explicit RK method."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    a, b, c = tableau.as_arrays()
    grid, g, U0 = state.grid, state.g, state.U
    k = []
    for i in range(tableau.stages):
        Ui = U0.copy()
        for j in range(i):
            if a[i, j] != 0.0:
                Ui += (dt * a[i, j]) * k[j]
        k.append(_rhs_array(Ui, grid, g))
    U = U0.copy()
    for i in range(tableau.stages):
        if b[i] != 0.0:
            U += (dt * b[i]) * k[i]
    return replace(state, U=U, t=state.t + dt)


def _check_state(state: FieldState):
    U = state.U
    finite = np.isfinite(U).all(axis=0)
    bad = ~finite | ~(U[0] > 0)
    if np.any(bad):
        cell = tuple(int(i) for i in np.argwhere(bad)[0])
        raise SolverInstability(
            f"instability at t={state.t:.6g} in cell {cell}", t=state.t, cell=cell
        )


def advance(
    state: FieldState,
    t_final: float,
    cfl: float = 0.95,
    tableau: ButcherTableau = RK65,
    callback: Optional[Callable[[FieldState], None]] = None,
) -> FieldState:
    """March ``state`` to ``t_final``."""
    _check_state(state)
    nsteps = 0
    while state.t < t_final:
        dt = compute_dt(state, cfl, t_final)
        # guard against a sliver step from roundoff in the accumulated time
        if t_final - (state.t + dt) < 1e-14 * max(1.0, t_final):
            dt = t_final - state.t
        try:
            new = rk_step(state, dt, tableau)
        except SolverInstability as exc:
            raise SolverInstability(f"{exc} (t={state.t:.6g})", t=state.t, cell=exc.cell) from exc
        if t_final - new.t < 1e-14 * max(1.0, t_final):
            new = replace(new, t=t_final)
        _check_state(new)
        state = new
        nsteps += 1
        if callback is not None:
            callback(state)
    log.debug("advanced to t=%g in %d steps", state.t, nsteps)
    return state


def simulate(
    spec: VortexSpec,
    grid: Grid,
    cfl: float = 0.95,
    t_final: float = 1.0,
    q: int = 4,
    callback=None,
) -> FieldState:
    """Initialise from exact cell averages and march to ``t_final``."""
    state = initial_state(spec, grid, 0.0, q)
    return advance(state, t_final, cfl, callback=callback)


# }}}
