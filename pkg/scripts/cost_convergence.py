"""Measure how fast the finite-horizon average cost approaches its limit.

Two experiments on the scalar worked example, each written to CSV:

  horizon sweep: one long closed-loop run; the running average cost is read
    at doubling horizons T and compared with the limit 1/52.  The product
    T * |J_T - 1/52| settling into a band is the O(1/T) signature.

  step sweep: the terminal deviation from the exact steady trajectory is
    measured while halving dt; successive ratios near 16 confirm the
    integrator's fourth order.
"""

import argparse
import pathlib

import numpy as np

from apcontrol import (
    StateSpace,
    TrigPolynomial,
    closed_loop_trajectory,
    empirical_average_cost,
    integrate_closed_loop,
    synthesize,
)

J_STAR = 1.0 / 52.0


def horizon_sweep(system, law, f, y0, t_end, dt, out_path):
    traj = integrate_closed_loop(system, law, f, y0, t_end, dt)
    horizons = []
    t = 125.0
    while t <= t_end + 1e-9:
        horizons.append(t)
        t *= 2.0
    rows = []
    for horizon in horizons:
        j = traj.running_cost[int(round(horizon / dt))]
        rows.append((horizon, j, abs(j - J_STAR), horizon * abs(j - J_STAR)))
    np.savetxt(out_path, np.array(rows), fmt="%.17g", delimiter=",",
               header="T,J_T,abs_error,scaled_error", comments="")
    print(f"horizon sweep -> {out_path}")
    for horizon, j, err, scaled in rows:
        print(f"  T = {horizon:7.1f}   J_T = {j:.9f}   "
              f"|J_T - J*| = {err:.3e}   T*|err| = {scaled:.4f}")
    final = empirical_average_cost(traj)
    print(f"  full-horizon cost {final:.9f} vs limit {J_STAR:.9f}")
    band = max(r[3] for r in rows) / min(r[3] for r in rows)
    print(f"  scaled-error band ratio {band:.2f}")


def step_sweep(system, law, f, y0, steps, out_path):
    exact = closed_loop_trajectory(law, f)
    rows = []
    for dt in steps:
        traj = integrate_closed_loop(system, law, f, y0, 20.0, dt)
        deviation = np.abs(traj.states
                           - exact.evaluate(traj.times)).max()
        rows.append((dt, deviation))
    data = [(dt, dev, rows[i - 1][1] / dev if i else float("nan"))
            for i, (dt, dev) in enumerate(rows)]
    np.savetxt(out_path, np.array(data), fmt="%.17g", delimiter=",",
               header="dt,max_deviation,ratio_vs_previous", comments="")
    print(f"step sweep -> {out_path}")
    for dt, dev, ratio in data:
        tag = "" if np.isnan(ratio) else f"   ratio {ratio:.1f}"
        print(f"  dt = {dt:.4f}   max deviation {dev:.3e}{tag}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--t-end", type=float, default=2000.0,
                        help="horizon of the long run (default 2000)")
    parser.add_argument("--dt", type=float, default=1e-3,
                        help="step of the long run (default 1e-3)")
    parser.add_argument("--out-dir", type=pathlib.Path,
                        default=pathlib.Path("results"),
                        help="directory for the CSV files (default results/)")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    system = StateSpace(3.0, 4.0, 1.0)
    f = TrigPolynomial.harmonic(1.0, [0.0], [1.0])
    law = synthesize(system, f)
    y0 = closed_loop_trajectory(law, f).evaluate(0.0)

    horizon_sweep(system, law, f, y0, args.t_end, args.dt,
                  args.out_dir / "horizon_sweep.csv")
    step_sweep(system, law, f, y0, (0.02, 0.01, 0.005, 0.0025),
               args.out_dir / "step_sweep.csv")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
