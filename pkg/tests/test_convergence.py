import math

import numpy as np
import pytest

from swvortex import convergence
from swvortex.convergence import ConvergenceReport, ConvergenceRow, error_norm, observed_order, run_study
from swvortex.solver import FieldState, Grid, SolverInstability, initial_state
from swvortex.vortex import CosPower, VortexSpec, cell_averages


def test_observed_order_examples():
    assert observed_order(1.0, 1.0 / 32, 10, 20) == pytest.approx(5.0)
    assert observed_order(1.0, 1.0, 10, 20) == 0.0
    assert observed_order(5.794e-8, 7.942e-9, 200, 300) == pytest.approx(4.901, abs=5e-4)


@pytest.mark.parametrize("args", [(0.0, 1.0, 10, 20), (1.0, -1.0, 10, 20), (1.0, 0.5, 20, 10)])
def test_observed_order_undefined(args):
    assert math.isnan(observed_order(*args))


SPEC = VortexSpec.from_hmin(CosPower(2), 0.3, 1.0, 0.99, 1.0, center=(0.5, 0.5), u_inf=(1.0, 1.0))


def test_error_norm_zero_for_exact():
    state = initial_state(SPEC, Grid.square(12))
    assert error_norm(state, SPEC, 0.0) == (0.0, 0.0, 0.0)


def test_error_norm_depth_offset():
    grid = Grid.square(12)
    exact = cell_averages(SPEC, grid.x_edges, grid.y_edges, 0.0, 4, grid.period)
    U = exact.copy()
    U[0] += 1e-3
    eh, eu, ev = error_norm(FieldState(grid, U), SPEC, 0.0)
    assert eh == pytest.approx(1e-3, rel=1e-10)
    ref_u = np.mean(np.abs(exact[1] / (exact[0] + 1e-3) - exact[1] / exact[0]))
    assert eu == pytest.approx(ref_u, rel=1e-10)


def test_error_norm_at_later_time():
    # the exact reference moves with the vortex and wraps periodically
    grid = Grid.square(12)
    state = initial_state(SPEC, grid, t=0.37)
    assert max(error_norm(state, SPEC, 0.37)) < 1e-15
    assert max(error_norm(FieldState(grid, state.U, t=0.37), SPEC)) < 1e-15


def test_initialisation_error_decreases_with_refinement():
    # q=2 initial data against the q=4 reference
    errs = []
    for n in (10, 20, 40):
        grid = Grid.square(n)
        U = cell_averages(SPEC, grid.x_edges, grid.y_edges, 0.0, 2, grid.period)
        errs.append(error_norm(FieldState(grid, U), SPEC, 0.0)[0])
    assert errs[0] > errs[1] > errs[2]


def test_constant_state_study():
    spec = VortexSpec(CosPower(1), r0=0.3, gamma_amp=0.0, u_inf=(1.0, 1.0))
    report = run_study(spec, [8, 16], t_final=0.1)
    row = report.row(16)
    assert max(row.errors) < 1e-13
    assert report.row(8).orders == (0.0, 0.0, 0.0)
    assert all(math.isnan(o) or abs(o) < 60 for o in row.orders)
    assert report.metadata["norm"].startswith("L1")


def test_single_mesh():
    report = run_study(SPEC, [10], t_final=0.05)
    assert len(report.rows) == 1
    assert report.rows[0].orders == (0.0, 0.0, 0.0)
    assert report.rows[0].mass_drift < 1e-12


def test_rejects_unsorted_meshes():
    with pytest.raises(ValueError):
        run_study(SPEC, [20, 10])
    with pytest.raises(ValueError):
        run_study(SPEC, [])


def test_reproducible():
    a = run_study(SPEC, [8, 12], t_final=0.1)
    b = run_study(SPEC, [8, 12], t_final=0.1)
    assert a.as_dicts() == b.as_dicts()


def test_parallel_matches_serial():
    a = run_study(SPEC, [8, 12], t_final=0.1)
    b = run_study(SPEC, [8, 12], t_final=0.1, jobs=2)
    assert a.as_dicts() == b.as_dicts()


def test_failed_row(monkeypatch):
    real = convergence.simulate

    def flaky(spec, grid, *args):
        if grid.nx == 12:
            raise SolverInstability("boom", t=0.1, cell=(1, 2))
        return real(spec, grid, *args)

    monkeypatch.setattr(convergence, "simulate", flaky)
    report = run_study(SPEC, [8, 12, 16], t_final=0.05)
    assert report.row(12).failure
    assert all(math.isnan(o) for o in report.row(12).orders + report.row(16).orders)
    assert "failed" in report.to_text()


def test_text_layout():
    rows = [ConvergenceRow(8, 2.755e-4, 0.0, 3.072e-3, 0.0, 3.0e-3, 0.0),
            ConvergenceRow(16, 1.650e-4, 0.740, 8.94e-4, 1.781, 9.0e-4, 1.7)]
    text = ConvergenceReport(rows).to_text().splitlines()
    assert text[0].split()[:3] == ["N", "Error", "h"]
    assert text[2].split()[:5] == ["16", "1.650e-04", "0.740", "8.940e-04", "1.781"]
