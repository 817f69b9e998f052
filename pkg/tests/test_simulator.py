"""RK4 integration, empirical averages, and the control comparison table."""

import numpy as np
import pytest

from apcontrol import (
    DimensionError,
    SimulationError,
    StateSpace,
    Trajectory,
    TrigPolynomial,
    closed_loop_trajectory,
    compare_controls,
    empirical_average_cost,
    integrate_closed_loop,
    simulate_feedback,
    solve_r_harmonic,
    synthesize,
    trajectory_to_csv,
)

SCALAR = StateSpace(3.0, 4.0, 1.0)
F_SIN = TrigPolynomial.harmonic(1.0, [0.0], [1.0])
ZERO1 = TrigPolynomial.zero(1)


@pytest.fixture(scope="module")
def law():
    return synthesize(SCALAR, F_SIN)


@pytest.fixture(scope="module")
def closed_form(law):
    return closed_loop_trajectory(law, F_SIN)


class TestIntegration:
    def test_tracks_closed_form_trajectory(self, law, closed_form):
        y0 = closed_form.evaluate(0.0)
        traj = integrate_closed_loop(SCALAR, law, F_SIN, y0, 200.0, 1e-3)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(200.0, abs=1e-9)
        assert traj.states.shape == (200_001, 1)
        assert traj.controls.shape == (200_001, 1)
        deviation = np.abs(traj.states - closed_form.evaluate(traj.times)).max()
        assert deviation <= 1e-6

    def test_records_feedback_control(self, law, closed_form):
        y0 = closed_form.evaluate(0.0)
        traj = integrate_closed_loop(SCALAR, law, F_SIN, y0, 10.0, 1e-3)
        expected = -(traj.states @ law.gain.T) - law.bias.evaluate(traj.times)
        assert np.abs(traj.controls - expected).max() <= 1e-15

    def test_zero_forcing_zero_start_stays_zero(self):
        traj = simulate_feedback(SCALAR, [[2.0]], ZERO1, ZERO1, 0.0, 5.0, 0.01)
        assert np.all(traj.states == 0.0)
        assert np.all(traj.controls == 0.0)
        assert np.all(traj.running_cost == 0.0)

    def test_initial_conditions_contract_at_loop_rate(self, law):
        kw = dict(t_end=5.0, dt=1e-3)
        a = integrate_closed_loop(SCALAR, law, F_SIN, [1.0], **kw)
        b = integrate_closed_loop(SCALAR, law, F_SIN, [-1.0], **kw)
        gap = np.abs(a.states - b.states)[:, 0]
        bound = 2.0 * np.exp(-5.0 * a.times) * 1.01
        assert np.all(gap <= bound + 1e-12)

    def test_homogeneous_decay_matches_exponential(self):
        traj = simulate_feedback(SCALAR, [[2.0]], ZERO1, ZERO1, [1.0], 2.0, 1e-3)
        exact = np.exp(-5.0 * traj.times)
        assert np.abs(traj.states[:, 0] - exact).max() <= 1e-10

    def test_fourth_order_step_convergence(self, law, closed_form):
        y0 = closed_form.evaluate(0.0)
        errors = []
        for dt in (0.02, 0.01):
            traj = integrate_closed_loop(SCALAR, law, F_SIN, y0, 20.0, dt)
            errors.append(
                np.abs(traj.states - closed_form.evaluate(traj.times)).max())
        ratio = errors[0] / errors[1]
        assert 8.0 <= ratio <= 32.0

    def test_step_bound_guard_suggests_dt(self, law):
        with pytest.raises(SimulationError, match=r"use dt <= 2\.000e-02"):
            integrate_closed_loop(SCALAR, law, F_SIN, [0.0], 10.0, 0.25)

    def test_grid_must_divide_horizon(self, law):
        with pytest.raises(SimulationError, match="integer multiple"):
            integrate_closed_loop(SCALAR, law, F_SIN, [0.0], 1.0, 0.3)

    def test_dimension_guards(self, law):
        with pytest.raises(DimensionError, match="y0"):
            integrate_closed_loop(SCALAR, law, F_SIN, [0.0, 0.0], 1.0, 0.01)
        with pytest.raises(DimensionError, match="gain"):
            simulate_feedback(SCALAR, np.ones((2, 1)), law.bias, F_SIN, [0.0],
                              1.0, 0.01)
        with pytest.raises(DimensionError, match="forcing"):
            simulate_feedback(SCALAR, law.gain, law.bias,
                              TrigPolynomial.zero(2), [0.0], 1.0, 0.01)

    def test_rejects_nonpositive_grid(self, law):
        with pytest.raises(SimulationError, match="positive"):
            integrate_closed_loop(SCALAR, law, F_SIN, [0.0], -1.0, 0.01)


class TestTrajectoryType:
    def test_dt_property(self, law):
        traj = integrate_closed_loop(SCALAR, law, F_SIN, [0.0], 1.0, 0.01)
        assert traj.dt == pytest.approx(0.01, rel=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(SimulationError, match="two grid points"):
            Trajectory(times=np.array([0.0]), states=np.zeros((1, 1)),
                       controls=np.zeros((1, 1)), running_cost=np.zeros(1))

    def test_rejects_uneven_grid(self):
        with pytest.raises(SimulationError, match="fixed step"):
            Trajectory(times=np.array([0.0, 0.1, 0.3]), states=np.zeros((3, 1)),
                       controls=np.zeros((3, 1)), running_cost=np.zeros(3))

    def test_rejects_misaligned_blocks(self):
        times = np.array([0.0, 0.1, 0.2])
        with pytest.raises(DimensionError, match="states"):
            Trajectory(times=times, states=np.zeros((2, 1)),
                       controls=np.zeros((3, 1)), running_cost=np.zeros(3))


class TestEmpiricalCost:
    def test_worked_example_midsize_horizon(self, law, closed_form):
        y0 = closed_form.evaluate(0.0)
        traj = integrate_closed_loop(SCALAR, law, F_SIN, y0, 500.0, 1e-3)
        J = empirical_average_cost(traj)
        assert J == pytest.approx(1.0 / 52.0, abs=1e-3)
        assert J == traj.running_cost[-1]

    def test_skip_window_matches_manual_tail_average(self, law):
        traj = integrate_closed_loop(SCALAR, law, F_SIN, [0.2], 50.0, 1e-3)
        skipped = empirical_average_cost(traj, skip_time=10.0)
        integrand = ((traj.states @ SCALAR.M.T) ** 2).sum(axis=1) \
            + (traj.controls ** 2).sum(axis=1)
        idx = 10_000
        tail = np.trapezoid(integrand[idx:], dx=traj.dt)
        manual = tail / (traj.times[-1] - traj.times[idx])
        assert skipped == pytest.approx(manual, rel=1e-10)

    def test_skip_window_guards(self, law):
        traj = integrate_closed_loop(SCALAR, law, F_SIN, [0.0], 2.0, 0.01)
        with pytest.raises(ValueError, match="nonnegative"):
            empirical_average_cost(traj, skip_time=-1.0)
        with pytest.raises(SimulationError, match="whole span"):
            empirical_average_cost(traj, skip_time=2.0)

    def test_suboptimal_gain_with_unchanged_bias_costs_more(self, law,
                                                            closed_form):
        y0 = closed_form.evaluate(0.0)
        traj = simulate_feedback(SCALAR, [[3.0]], law.bias, F_SIN, y0, 300.0,
                                 1e-3)
        assert empirical_average_cost(traj) > 1.0 / 52.0


class TestCompareControls:
    def _resolved_bias(self, law, gain_value):
        loop = SCALAR.A - SCALAR.B @ np.array([[gain_value]])
        return solve_r_harmonic(loop, law.riccati.P, F_SIN).apply(SCALAR.B.T)

    def test_synthesized_wins_against_resolved_biases(self, law):
        alternatives = [
            {"gain": [[value]], "bias": self._resolved_bias(law, value),
             "label": f"gain {value}"}
            for value in (1.5, 2.5, 3.0)
        ]
        alternatives.append({"gain": [[0.5]], "bias": law.bias,
                             "label": "unstable"})
        table = compare_controls(SCALAR, F_SIN, law, alternatives,
                                 t_end=200.0, dt=2e-3)
        assert table.synthesized_row.label == "synthesized"
        assert table.synthesized_is_minimal(tol=1e-4)
        by_label = {row.label: row for row in table.rows}
        assert by_label["unstable"].status == "divergent"
        assert by_label["unstable"].J is None
        for value in (1.5, 2.5, 3.0):
            row = by_label[f"gain {value}"]
            assert row.status == "ok"
            assert row.J > table.synthesized_row.J

    def test_equal_alternative_ties_exactly(self, law):
        table = compare_controls(
            SCALAR, F_SIN, law,
            [{"gain": law.gain, "bias": law.bias, "label": "copy"}],
            t_end=50.0, dt=2e-3)
        synthesized, copy = table.rows
        assert abs(synthesized.J - copy.J) <= 1e-10

    def test_empty_alternatives_single_row(self, law):
        table = compare_controls(SCALAR, F_SIN, law, [], t_end=10.0, dt=2e-3)
        assert len(table.rows) == 1
        assert table.rows[0].synthesized
        assert table.synthesized_is_minimal()

    def test_table_serialisation(self, law):
        table = compare_controls(
            SCALAR, F_SIN, law,
            [{"gain": [[0.5]], "bias": law.bias, "label": "unstable"}],
            t_end=10.0, dt=2e-3)
        text = table.to_text()
        assert "divergent" in text
        assert "*" in text
        payload = table.to_json_dict()
        assert payload["rows"][0]["synthesized"] is True
        assert payload["rows"][1]["J"] is None


class TestCsvExport:
    def test_roundtrip_full_precision(self, law, tmp_path):
        traj = integrate_closed_loop(SCALAR, law, F_SIN, [0.3], 2.0, 0.01)
        path = tmp_path / "trajectory.csv"
        trajectory_to_csv(traj, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,y_1,u_1,running_cost"
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        stacked = np.column_stack([traj.times, traj.states, traj.controls,
                                   traj.running_cost])
        assert data.shape == stacked.shape
        assert np.array_equal(data, stacked)
