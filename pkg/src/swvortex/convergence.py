"""Mesh-refinement studies against exact vortex solutions."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .solver import FieldState, Grid, SolverInstability, simulate
from .vortex import VortexSpec, cell_averages

log = logging.getLogger(__name__)

#: Dyadic mesh sequence of the classic cos-vortex study.
DYADIC_MESHES = (8, 16, 32, 64, 128, 256, 512)
#: Mesh sequence used for the Gaussian, cos-power and C-infinity studies.
STUDY_MESHES = (25, 50, 100, 200, 300, 400, 500, 600)

NORM = "L1 of cell averages; velocities as primitives (hu/h)"


def error_norm(numeric: FieldState, spec: VortexSpec, t: Optional[float] = None, q: int = 4):
    """Discrete L1 errors ``(err_h, err_u, err_v)`` against exact cell averages."""
    grid = numeric.grid
    t = numeric.t if t is None else t
    exact = cell_averages(spec, grid.x_edges, grid.y_edges, t, q, grid.period)
    U = numeric.U
    n = grid.nx * grid.ny
    err_h = np.sum(np.abs(U[0] - exact[0])) / n
    err_u = np.sum(np.abs(U[1] / U[0] - exact[1] / exact[0])) / n
    err_v = np.sum(np.abs(U[2] / U[0] - exact[2] / exact[0])) / n
    return float(err_h), float(err_u), float(err_v)


def observed_order(e_coarse, e_fine, n_coarse, n_fine) -> float:
    """``log(e_coarse / e_fine) / log(n_fine / n_coarse)``; NaN if undefined."""
    if not (e_coarse > 0 and e_fine > 0) or not n_fine > n_coarse > 0:
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(n_fine / n_coarse)


@dataclass
class ConvergenceRow:
    N: int
    err_h: float = math.nan
    ord_h: float = 0.0
    err_u: float = math.nan
    ord_u: float = 0.0
    err_v: float = math.nan
    ord_v: float = 0.0
    mass_drift: float = math.nan
    failure: Optional[str] = None

    @property
    def errors(self):
        return (self.err_h, self.err_u, self.err_v)

    @property
    def orders(self):
        return (self.ord_h, self.ord_u, self.ord_v)


@dataclass
class ConvergenceReport:
    rows: List[ConvergenceRow]
    metadata: dict = field(default_factory=dict)

    def row(self, N: int) -> ConvergenceRow:
        for r in self.rows:
            if r.N == N:
                return r
        raise KeyError(N)

    def to_text(self) -> str:
        """Aligned plain-text table in the usual ``N | Error | Order`` layout."""
        head = f"{'N':>5}  {'Error h':>10}  {'Order h':>7}  {'Error u':>10}  {'Order u':>7}  " \
               f"{'Error v':>10}  {'Order v':>7}"
        lines = [head]
        for r in self.rows:
            if r.failure:
                lines.append(f"{r.N:>5}  failed: {r.failure}")
                continue
            lines.append(
                f"{r.N:>5}  {r.err_h:>10.3e}  {r.ord_h:>7.3f}  {r.err_u:>10.3e}  {r.ord_u:>7.3f}  "
                f"{r.err_v:>10.3e}  {r.ord_v:>7.3f}"
            )
        return "\n".join(lines)

    def as_dicts(self):
        return [asdict(r) for r in self.rows]


def _run_mesh(spec, n, cfl, t_final, q, domain):
    grid = Grid.square(n, domain)
    try:
        state = simulate(spec, grid, cfl, t_final, q)
    except SolverInstability as exc:
        log.warning("N=%d aborted: %s", n, exc)
        return ConvergenceRow(n, failure=str(exc))
    initial = cell_averages(spec, grid.x_edges, grid.y_edges, 0.0, q, grid.period)
    m0 = float(np.sum(initial[0]))
    drift = abs(float(np.sum(state.U[0])) - m0) / abs(m0)
    eh, eu, ev = error_norm(state, spec, t_final, q)
    log.info("N=%d  err_h=%.3e err_u=%.3e err_v=%.3e", n, eh, eu, ev)
    return ConvergenceRow(n, eh, 0.0, eu, 0.0, ev, 0.0, drift)


def run_study(
    spec: VortexSpec,
    meshes: Sequence[int],
    cfl: float = 0.95,
    t_final: float = 1.0,
    q: int = 4,
    domain=(0.0, 1.0, 0.0, 1.0),
    jobs: int = 1,
) -> ConvergenceReport:
    """Simulate on each mesh and collect errors and observed orders.

    ``jobs > 1`` runs meshes in separate processes; the report is identical.
    """
    meshes = [int(n) for n in meshes]
    if not meshes or any(b <= a for a, b in zip(meshes, meshes[1:])):
        raise ValueError(f"mesh list must be nonempty and strictly increasing, got {meshes}")

    args = [(spec, n, cfl, t_final, q, tuple(domain)) for n in meshes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_mesh, *zip(*args)))
    else:
        rows = [_run_mesh(*a) for a in args]

    for prev, cur in zip(rows, rows[1:]):
        if cur.failure or prev.failure:
            cur.ord_h = cur.ord_u = cur.ord_v = math.nan
            continue
        cur.ord_h = observed_order(prev.err_h, cur.err_h, prev.N, cur.N)
        cur.ord_u = observed_order(prev.err_u, cur.err_u, prev.N, cur.N)
        cur.ord_v = observed_order(prev.err_v, cur.err_v, prev.N, cur.N)

    metadata = {
        "family": type(spec.family).__name__,
        "p": getattr(spec.family, "p", None),
        "r0": spec.r0,
        "h0": spec.h0,
        "gamma_amp": spec.gamma_amp,
        "h_min": spec.h_min,
        "g": spec.g,
        "center": spec.center,
        "u_inf": spec.u_inf,
        "cfl": cfl,
        "t_final": t_final,
        "quad": q,
        "domain": tuple(domain),
        "norm": NORM,
    }
    return ConvergenceReport(rows, metadata)
