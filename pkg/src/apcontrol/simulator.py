"""Time-domain verification: fixed-step RK4, empirical averages, comparisons.

The integrator is deliberately a fixed-step classical Runge-Kutta sweep: the
systems here are small and, under the step-size guard dt*|L|_2 <= 0.1, far
from stiff, and a fixed grid makes every reported number reproducible across
platforms bit for bit.  Forcing and bias are sampled once on the half-step
grid before the sweep, so the hot loop is pure matrix-vector work and is
compiled with numba.  Memory scales like (t_end/dt) * n.
"""

from __future__ import annotations

import dataclasses

import numba
import numpy as np

from .config import DEFAULTS
from .errors import DimensionError, SimulationError
from .signals import Signal, evaluate
from .spectral import StateSpace, spectral_abscissa
from .synthesis import FeedbackLaw

__all__ = [
    "Trajectory",
    "CostRow",
    "CostTable",
    "integrate_closed_loop",
    "simulate_feedback",
    "empirical_average_cost",
    "compare_controls",
    "trajectory_to_csv",
]


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled closed-loop run on a fixed grid.

    ``running_cost[k]`` is the average cost accumulated so far, the trapezoid
    value of (1/(t_k - t_0)) int_{t_0}^{t_k} (|M y|^2 + |u|^2); entry 0 holds
    the t -> t_0 limit, the instantaneous cost density.
    """

    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    running_cost: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        if times.size < 2:
            raise SimulationError("trajectory needs at least two grid points")
        diffs = np.diff(times)
        step = (times[-1] - times[0]) / (times.size - 1)
        if step <= 0.0 or np.abs(diffs - step).max() > 1e-9 * step:
            raise SimulationError("time grid must increase with a fixed step")
        states = np.asarray(self.states, dtype=float)
        controls = np.asarray(self.controls, dtype=float)
        running = np.asarray(self.running_cost, dtype=float).reshape(-1)
        if states.ndim != 2 or states.shape[0] != times.size:
            raise DimensionError(
                f"states must be ({times.size}, n), got {states.shape}")
        if controls.ndim != 2 or controls.shape[0] != times.size:
            raise DimensionError(
                f"controls must be ({times.size}, m), got {controls.shape}")
        if running.size != times.size:
            raise DimensionError(
                f"running_cost must have {times.size} entries, got {running.size}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "running_cost", running)

    @property
    def dt(self) -> float:
        return float((self.times[-1] - self.times[0]) / (self.times.size - 1))


@numba.njit(cache=True)
def _rk4_sweep(L, w, y0, dt, n_steps):  # pragma: no cover - compiled
    n = y0.shape[0]
    out = np.empty((n_steps + 1, n))
    out[0] = y0
    y = y0.copy()
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        w0 = w[2 * k]
        wm = w[2 * k + 1]
        w1 = w[2 * k + 2]
        k1 = np.dot(L, y) + w0
        k2 = np.dot(L, y + half * k1) + wm
        k3 = np.dot(L, y + half * k2) + wm
        k4 = np.dot(L, y + dt * k3) + w1
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        out[k + 1] = y
    return out


def _grid_steps(t_end: float, dt: float) -> int:
    if dt <= 0.0 or t_end <= 0.0:
        raise SimulationError("t_end and dt must be positive")
    n_steps = int(round(t_end / dt))
    if n_steps < 1 or abs(n_steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise SimulationError(
            f"t_end = {t_end:g} is not an integer multiple of dt = {dt:g}")
    return n_steps


def simulate_feedback(system: StateSpace, gain, bias: Signal, f: Signal, y0,
                      t_end: float, dt: float,
                      step_bound: float = DEFAULTS.rk4_step_bound) -> Trajectory:
    """Integrate y' = (A - B gain) y - B bias(t) + f(t) with RK4.

    This is the engine behind integrate_closed_loop, exposed so arbitrary
    (gain, bias) pairs can be driven through the exact same scheme.  Controls
    are recorded as u(t) = -gain y(t) - bias(t) on the node grid.
    """
    gain = np.atleast_2d(np.asarray(gain, dtype=float))
    if gain.shape != (system.m, system.n):
        raise DimensionError(
            f"gain must be ({system.m}, {system.n}), got {gain.shape}")
    if bias.dimension != system.m:
        raise DimensionError(
            f"bias has dimension {bias.dimension}, inputs are "
            f"{system.m}-dimensional")
    if f.dimension != system.n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is "
            f"{system.n}-dimensional")
    y0 = np.asarray(y0, dtype=float).reshape(-1)
    if y0.size != system.n:
        raise DimensionError(
            f"y0 must have {system.n} entries, got {y0.size}")
    n_steps = _grid_steps(t_end, dt)
    loop = system.A - system.B @ gain
    loop_scale = float(np.linalg.norm(loop, 2))
    if dt * loop_scale > step_bound:
        raise SimulationError(
            f"step too large: dt*||A - B gain||_2 = {dt * loop_scale:.3e} > "
            f"{step_bound:g}; use dt <= {step_bound / loop_scale:.3e}")

    half_times = 0.5 * dt * np.arange(2 * n_steps + 1)
    bias_half = evaluate(bias, half_times)
    w = evaluate(f, half_times) - bias_half @ system.B.T
    states = _rk4_sweep(np.ascontiguousarray(loop), np.ascontiguousarray(w),
                        np.ascontiguousarray(y0), float(dt), n_steps)
    times = dt * np.arange(n_steps + 1)
    controls = -(states @ gain.T) - bias_half[::2]
    integrand = ((states @ system.M.T) ** 2).sum(axis=1) + (controls ** 2).sum(axis=1)
    cumulative = np.empty(n_steps + 1)
    cumulative[0] = 0.0
    np.cumsum(0.5 * dt * (integrand[1:] + integrand[:-1]), out=cumulative[1:])
    running = np.empty(n_steps + 1)
    running[0] = integrand[0]
    running[1:] = cumulative[1:] / times[1:]
    return Trajectory(times=times, states=states, controls=controls,
                      running_cost=running)


def integrate_closed_loop(system: StateSpace, law: FeedbackLaw, f: Signal, y0,
                          t_end: float, dt: float,
                          step_bound: float = DEFAULTS.rk4_step_bound
                          ) -> Trajectory:
    """Run the synthesised law u = -gain y - bias through the RK4 sweep."""
    return simulate_feedback(system, law.gain, law.bias, f, y0, t_end, dt,
                             step_bound=step_bound)


def empirical_average_cost(traj: Trajectory, skip_time: float = 0.0) -> float:
    """Average cost at the final time, from the trapezoid accumulation.

    Horizons below ~100 carry visible O(1/T) truncation error; the limit
    washes out transients on its own, so the initial window is kept by
    default.  Pass skip_time = 10/delta (delta the closed-loop decay rate) to
    discard the transient window explicitly; it must land inside the grid.
    """
    if skip_time < 0.0:
        raise ValueError("skip_time must be nonnegative")
    if skip_time == 0.0:
        return float(traj.running_cost[-1])
    span = float(traj.times[-1] - traj.times[0])
    if skip_time >= span:
        raise SimulationError(
            f"skip_time {skip_time:g} covers the whole span {span:g}")
    dt = traj.dt
    idx = int(round(skip_time / dt))
    idx = min(max(idx, 0), traj.times.size - 2)
    # recover the integral from the running average: C_k = (t_k - t_0) J_k
    offsets = traj.times - traj.times[0]
    total = offsets[-1] * traj.running_cost[-1]
    head = offsets[idx] * traj.running_cost[idx]
    return float((total - head) / (offsets[-1] - offsets[idx]))


@dataclasses.dataclass(frozen=True, eq=False)
class CostRow:
    label: str
    gain: np.ndarray
    status: str  # "ok" or "divergent"
    J: float | None
    synthesized: bool


@dataclasses.dataclass(frozen=True, eq=False)
class CostTable:
    rows: tuple

    @property
    def synthesized_row(self) -> CostRow:
        return next(row for row in self.rows if row.synthesized)

    def synthesized_is_minimal(self, tol: float = 1e-4) -> bool:
        best = self.synthesized_row.J
        others = [row.J for row in self.rows
                  if row.status == "ok" and not row.synthesized]
        return all(best <= value + tol for value in others)

    def to_json_dict(self) -> dict:
        return {"rows": [
            {"label": row.label, "status": row.status,
             "J": None if row.J is None else float(row.J),
             "gain": row.gain.tolist(), "synthesized": row.synthesized}
            for row in self.rows]}

    def to_text(self) -> str:
        lines = [f"{'label':<16} {'status':<10} {'J':<24} synthesized"]
        for row in self.rows:
            value = "-" if row.J is None else f"{row.J:.12g}"
            flag = "*" if row.synthesized else ""
            lines.append(f"{row.label:<16} {row.status:<10} {value:<24} {flag}")
        return "\n".join(lines)


def compare_controls(system: StateSpace, f: Signal, law: FeedbackLaw,
                     alternatives, y0=None, t_end: float = 400.0,
                     dt: float = 1e-3, skip_time: float = 0.0,
                     stability_margin: float = DEFAULTS.stability_margin
                     ) -> CostTable:
    """Empirical cost table: synthesised law first, then each alternative.

    Alternatives are mappings with keys "gain" and "bias" (optional "label").
    A gain whose loop A - B gain is not exponentially stable is reported with
    status "divergent" and no cost instead of being integrated.  Runs are
    sequential; they share the one compiled RK4 kernel.
    """
    if y0 is None:
        y0 = np.zeros(system.n)
    rows = []

    def run(label, gain, bias, synthesized):
        gain = np.atleast_2d(np.asarray(gain, dtype=float))
        if spectral_abscissa(system.A - system.B @ gain) >= -stability_margin:
            rows.append(CostRow(label=label, gain=gain, status="divergent",
                                J=None, synthesized=synthesized))
            return
        traj = simulate_feedback(system, gain, bias, f, y0, t_end, dt)
        rows.append(CostRow(label=label, gain=gain, status="ok",
                            J=empirical_average_cost(traj, skip_time=skip_time),
                            synthesized=synthesized))

    run("synthesized", law.gain, law.bias, True)
    for i, alt in enumerate(alternatives):
        run(alt.get("label", f"alternative {i + 1}"), alt["gain"], alt["bias"],
            False)
    return CostTable(rows=tuple(rows))


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write columns t, y_1..y_n, u_1..u_m, running_cost at full precision."""
    n = traj.states.shape[1]
    m = traj.controls.shape[1]
    header = ",".join(["t"] + [f"y_{i + 1}" for i in range(n)]
                      + [f"u_{j + 1}" for j in range(m)] + ["running_cost"])
    data = np.column_stack([traj.times, traj.states, traj.controls,
                            traj.running_cost])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=header,
               comments="")
