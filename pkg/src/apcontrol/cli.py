"""Command-line front end: problem specs in, reports and artifacts out.

A problem spec is a JSON file

    {"system": {"A": [[3.0]], "B": [[4.0]], "M": [[1.0]]},
     "forcing": {"dimension": 1, "terms": [{"omega": 1.0, "cos": [0.0], "sin": [1.0]}]},
     "options": {"variant": "standard", "t_end": 500.0, "dt": 0.001}}

Subcommands: check, gramian, solve, synthesize, cost, simulate, example.
Artifacts (report.json, law.json, trajectory.csv) are written only when
--output DIR is given.  JSON reports render every float with 17 significant
digits through one writer, so identical inputs produce byte-identical files.

Exit codes: 0 success, 3 hypothesis failure, 4 solver failure, 5 simulation
failure, 6 input/output failure (argparse keeps its conventional 2 for bad
command lines).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .config import DEFAULTS, Tolerances
from .errors import DimensionError, HypothesisError, SimulationError, SolverError
from .riccati import RiccatiSolution, solve_degenerate_are, solve_standard_are
from .signals import Signal, TrigPolynomial, signal_from_json, signal_to_json
from .simulator import empirical_average_cost, simulate_feedback, trajectory_to_csv
from .spectral import StateSpace, check_hypotheses, controllability_gramian
from .synthesis import (
    CostReport,
    FeedbackLaw,
    closed_form_cost,
    closed_loop_trajectory,
    quadrature_bias_signal,
    synthesize,
)

__all__ = [
    "ProblemSpec",
    "parse_problem_spec",
    "law_to_json_dict",
    "law_from_json_dict",
    "render_json",
    "main",
    "console",
    "EXIT_OK",
    "EXIT_HYPOTHESIS",
    "EXIT_SOLVER",
    "EXIT_SIMULATION",
    "EXIT_IO",
]

EXIT_OK = 0
EXIT_HYPOTHESIS = 3
EXIT_SOLVER = 4
EXIT_SIMULATION = 5
EXIT_IO = 6

_LAW_FORMAT = "apcontrol-law-v1"


# ---------------------------------------------------------------------------
# deterministic JSON


def _render_float(value: float) -> str:
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value {value!r} has no JSON rendering")
    return "%.17g" % value


def render_json(value, indent: int = 0) -> str:
    """Serialise with floats at 17 significant digits, insertion order kept."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [f"{inner}{json.dumps(str(key))}: {render_json(item, indent + 2)}"
                 for key, item in value.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{render_json(item, indent + 2)}" for item in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _render_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot render {type(value).__name__} as JSON")


def _write_artifact(output_dir, name: str, text: str) -> None:
    os.makedirs(output_dir, exist_ok=True)
    with open(os.path.join(output_dir, name), "w", encoding="utf-8") as handle:
        handle.write(text if text.endswith("\n") else text + "\n")


def _write_report(output_dir, payload: dict, name: str = "report.json") -> None:
    if output_dir is not None:
        _write_artifact(output_dir, name, render_json(payload))


# ---------------------------------------------------------------------------
# problem specs


@dataclasses.dataclass(frozen=True)
class ProblemSpec:
    """Parsed problem file: system, forcing, and run options."""

    system: StateSpace
    forcing: Signal
    variant: str
    tolerances: Tolerances
    t_end: float
    dt: float
    y0: np.ndarray | None
    skip_time: float


_KNOWN_OPTIONS = {"variant", "t_end", "dt", "y0", "skip_time", "tolerances"}
_TOL_FIELDS = {field.name: field for field in dataclasses.fields(Tolerances)}


def _coerce_tolerance(name: str, value) -> float | int:
    if name not in _TOL_FIELDS:
        known = ", ".join(sorted(_TOL_FIELDS))
        raise ValueError(f"unknown tolerance {name!r}; known names: {known}")
    if isinstance(value, str):
        value = float(value)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"tolerance {name!r} must be a number")
    if value <= 0:
        raise ValueError(f"tolerance {name!r} must be positive, got {value}")
    if isinstance(getattr(DEFAULTS, name), int):
        return int(value)
    return float(value)


def parse_problem_spec(payload: dict, tol_flags=()) -> ProblemSpec:
    """Validate a raw spec dict; --tol name=value flags override the file."""
    if not isinstance(payload, dict):
        raise ValueError("problem spec must be a JSON object")
    missing = [key for key in ("system", "forcing") if key not in payload]
    if missing:
        raise ValueError(f"problem spec is missing {missing}")
    system_payload = payload["system"]
    if not isinstance(system_payload, dict) or not {"A", "B", "M"} <= set(
            system_payload):
        raise ValueError('"system" must carry matrices A, B and M')
    system = StateSpace(system_payload["A"], system_payload["B"],
                        system_payload["M"])
    forcing = signal_from_json(payload["forcing"])
    if forcing.dimension != system.n:
        raise DimensionError(
            f"forcing has dimension {forcing.dimension}, state is "
            f"{system.n}-dimensional")
    options = payload.get("options", {})
    if not isinstance(options, dict):
        raise ValueError('"options" must be a JSON object')
    unknown = set(options) - _KNOWN_OPTIONS
    if unknown:
        raise ValueError(
            f"unknown options {sorted(unknown)}; known: {sorted(_KNOWN_OPTIONS)}")
    variant = options.get("variant", "standard")
    if variant not in ("standard", "degenerate"):
        raise ValueError(f"variant must be 'standard' or 'degenerate', "
                         f"got {variant!r}")
    overrides = {}
    for name, value in options.get("tolerances", {}).items():
        overrides[name] = _coerce_tolerance(name, value)
    for flag in tol_flags:
        name, sep, raw = flag.partition("=")
        if not sep:
            raise ValueError(f"--tol expects name=value, got {flag!r}")
        overrides[name] = _coerce_tolerance(name, raw)
    tolerances = DEFAULTS.replace(**overrides)
    t_end = float(options.get("t_end", 500.0))
    dt = float(options.get("dt", 1e-3))
    if t_end <= 0 or dt <= 0:
        raise ValueError("t_end and dt must be positive")
    y0 = options.get("y0")
    if y0 is not None:
        y0 = np.asarray(y0, dtype=float).reshape(-1)
        if y0.size != system.n:
            raise DimensionError(
                f"y0 must have {system.n} entries, got {y0.size}")
    skip_time = float(options.get("skip_time", 0.0))
    if skip_time < 0:
        raise ValueError("skip_time must be nonnegative")
    return ProblemSpec(system=system, forcing=forcing, variant=variant,
                       tolerances=tolerances, t_end=t_end, dt=dt, y0=y0,
                       skip_time=skip_time)


def _load_spec(args) -> ProblemSpec:
    with open(args.spec, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    return parse_problem_spec(payload, tol_flags=args.tol or ())


# ---------------------------------------------------------------------------
# law serialisation


def _matrix(values) -> list:
    return np.asarray(values, dtype=float).tolist()


def law_to_json_dict(law: FeedbackLaw) -> dict:
    return {
        "format": _LAW_FORMAT,
        "system": {"A": _matrix(law.system.A), "B": _matrix(law.system.B),
                   "M": _matrix(law.system.M)},
        "riccati": {
            "P": _matrix(law.riccati.P),
            "variant": law.riccati.variant,
            "residual_norm": float(law.riccati.residual_norm),
            "closed_loop_abscissa": float(law.riccati.closed_loop_abscissa),
            "p_min_eigenvalue": float(law.riccati.p_min_eigenvalue),
            "w_condition": None if law.riccati.w_condition is None
            else float(law.riccati.w_condition),
        },
        "gain": _matrix(law.gain),
        "closed_loop": _matrix(law.closed_loop),
        "r": signal_to_json(law.r),
        "bias": signal_to_json(law.bias),
    }


def law_from_json_dict(payload: dict) -> FeedbackLaw:
    if payload.get("format") != _LAW_FORMAT:
        raise ValueError(
            f"not a stored feedback law (format tag {payload.get('format')!r})")
    system = StateSpace(payload["system"]["A"], payload["system"]["B"],
                        payload["system"]["M"])
    rc = payload["riccati"]
    riccati = RiccatiSolution(
        P=np.asarray(rc["P"], dtype=float),
        variant=rc["variant"],
        residual_norm=float(rc["residual_norm"]),
        closed_loop_abscissa=float(rc["closed_loop_abscissa"]),
        p_min_eigenvalue=float(rc["p_min_eigenvalue"]),
        w_condition=None if rc.get("w_condition") is None
        else float(rc["w_condition"]))
    r = signal_from_json(payload["r"])
    bias = signal_from_json(payload["bias"])
    if not isinstance(r, TrigPolynomial) or not isinstance(bias, TrigPolynomial):
        raise ValueError("stored laws carry trigonometric r and bias only")
    return FeedbackLaw(system=system, riccati=riccati, r=r, bias=bias,
                       gain=np.asarray(payload["gain"], dtype=float),
                       closed_loop=np.asarray(payload["closed_loop"],
                                              dtype=float))


# ---------------------------------------------------------------------------
# shared pipeline pieces


def _solve_variant(system: StateSpace, variant: str, tol: Tolerances
                   ) -> RiccatiSolution:
    kwargs = dict(stability_margin=tol.stability_margin,
                  rank_rtol=tol.kalman_rank_rtol,
                  max_condition=tol.gramian_max_condition)
    if variant == "degenerate":
        return solve_degenerate_are(system, **kwargs)
    return solve_standard_are(system, max_iter=tol.newton_max_iter,
                              rtol=tol.newton_rtol, **kwargs)


def _synthesize_from_spec(spec: ProblemSpec) -> FeedbackLaw:
    tol = spec.tolerances
    return synthesize(spec.system, spec.forcing, variant=spec.variant,
                      stability_margin=tol.stability_margin,
                      rank_rtol=tol.kalman_rank_rtol,
                      max_condition=tol.gramian_max_condition,
                      max_iter=tol.newton_max_iter, rtol=tol.newton_rtol)


def _cost_payload(report: CostReport) -> dict:
    return {"J": report.J, "cross_term": report.cross_term,
            "penalty_term": report.penalty_term, "method": report.method}


def _spectrum_payload(matrix: np.ndarray) -> list:
    eigs = sorted(np.linalg.eigvals(matrix), key=lambda z: (z.real, z.imag))
    return [{"re": float(z.real), "im": float(z.imag)} for z in eigs]


def _print_matrix(label: str, matrix: np.ndarray) -> None:
    rows = ["[" + ", ".join("%.12g" % v for v in row) + "]"
            for row in np.atleast_2d(matrix)]
    print(f"{label} = [" + ", ".join(rows) + "]")


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    spec = _load_spec(args)
    tol = spec.tolerances
    report = check_hypotheses(spec.system, stability_margin=tol.stability_margin,
                              rank_rtol=tol.kalman_rank_rtol)
    payload = {
        "command": "check",
        "minus_A_stable": report.minus_A_stable,
        "minus_A_abscissa": report.minus_A_abscissa,
        "exactly_controllable": report.exactly_controllable,
        "controllability_rank": report.controllability_rank,
        "state_dimension": spec.system.n,
        "satisfied": report.satisfied,
        "gramian": None,
    }
    stable = "PASS" if report.minus_A_stable else "FAIL"
    print(f"{stable}  H-stability: -A spectral abscissa = "
          f"{report.minus_A_abscissa:.6g}")
    controllable = "PASS" if report.exactly_controllable else "FAIL"
    print(f"{controllable}  H-controllability: Kalman rank "
          f"{report.controllability_rank} of {spec.system.n}")
    if report.minus_A_stable:
        certificate = controllability_gramian(
            spec.system, stability_margin=tol.stability_margin)
        payload["gramian"] = {"W": _matrix(certificate.W),
                              "beta": certificate.beta,
                              "lyapunov_residual": certificate.lyapunov_residual}
        print(f"beta = {certificate.beta:.12g}")
    _write_report(args.output, payload)
    if not report.satisfied:
        print("hypotheses: FAIL")
        return EXIT_HYPOTHESIS
    print("hypotheses: PASS")
    return EXIT_OK


def cmd_gramian(args) -> int:
    spec = _load_spec(args)
    certificate = controllability_gramian(
        spec.system, stability_margin=spec.tolerances.stability_margin)
    payload = {"command": "gramian", "W": _matrix(certificate.W),
               "beta": certificate.beta,
               "lyapunov_residual": certificate.lyapunov_residual}
    _print_matrix("W", certificate.W)
    print(f"beta = {certificate.beta:.12g}")
    print(f"lyapunov residual = {certificate.lyapunov_residual:.6g}")
    _write_report(args.output, payload)
    return EXIT_OK


def cmd_solve(args) -> int:
    spec = _load_spec(args)
    solution = _solve_variant(spec.system, spec.variant, spec.tolerances)
    payload = {
        "command": "solve",
        "variant": solution.variant,
        "P": _matrix(solution.P),
        "residual_norm": solution.residual_norm,
        "closed_loop_abscissa": solution.closed_loop_abscissa,
        "closed_loop_spectrum": _spectrum_payload(
            spec.system.A - spec.system.B @ spec.system.B.T @ solution.P),
        "p_min_eigenvalue": solution.p_min_eigenvalue,
        "w_condition": solution.w_condition,
    }
    _print_matrix("P", solution.P)
    print(f"variant = {solution.variant}")
    print(f"residual = {solution.residual_norm:.6g}")
    print(f"closed-loop abscissa = {solution.closed_loop_abscissa:.12g}")
    _write_report(args.output, payload)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    spec = _load_spec(args)
    law = _synthesize_from_spec(spec)
    cost = closed_form_cost(law, spec.forcing)
    payload = {
        "command": "synthesize",
        "variant": law.riccati.variant,
        "gain": _matrix(law.gain),
        "closed_loop_abscissa": law.riccati.closed_loop_abscissa,
        "bias": signal_to_json(law.bias),
        "cost": _cost_payload(cost),
    }
    _print_matrix("gain", law.gain)
    print(f"bias lines = {len(law.bias.terms)}")
    print(f"J = {cost.J:.12g} (cross {cost.cross_term:.12g}, "
          f"penalty {cost.penalty_term:.12g})")
    _write_report(args.output, payload)
    if args.output is not None:
        _write_artifact(args.output, "law.json",
                        render_json(law_to_json_dict(law)))
    return EXIT_OK


def cmd_cost(args) -> int:
    spec = _load_spec(args)
    with open(args.law, "r", encoding="utf-8") as handle:
        law = law_from_json_dict(json.load(handle))
    same = (law.system.A.shape == spec.system.A.shape
            and np.allclose(law.system.A, spec.system.A, rtol=0, atol=1e-12)
            and law.system.B.shape == spec.system.B.shape
            and np.allclose(law.system.B, spec.system.B, rtol=0, atol=1e-12)
            and np.allclose(law.system.M, spec.system.M, rtol=0, atol=1e-12))
    if not same:
        raise ValueError("stored law was built for a different system")
    cost = closed_form_cost(law, spec.forcing)
    payload = {"command": "cost", "variant": law.riccati.variant,
               "cost": _cost_payload(cost)}
    print(f"J = {cost.J:.12g}")
    print(f"cross term = {cost.cross_term:.12g}")
    print(f"penalty term = {cost.penalty_term:.12g}")
    _write_report(args.output, payload)
    return EXIT_OK


def _simulate_pipeline(spec: ProblemSpec):
    """Solve, build the bias (closed form or spline), integrate.

    Returns (trajectory, law or None, closed-form cost or None).
    """
    tol = spec.tolerances
    if isinstance(spec.forcing, TrigPolynomial):
        law = _synthesize_from_spec(spec)
        cost = closed_form_cost(law, spec.forcing)
        y0 = spec.y0
        if y0 is None:
            y0 = closed_loop_trajectory(law, spec.forcing).evaluate(0.0)
        traj = simulate_feedback(spec.system, law.gain, law.bias, spec.forcing,
                                 y0, spec.t_end, spec.dt,
                                 step_bound=tol.rk4_step_bound)
        return traj, law, cost
    solution = _solve_variant(spec.system, spec.variant, tol)
    gain = spec.system.B.T @ solution.P
    bias = quadrature_bias_signal(spec.system, solution.P, spec.forcing,
                                  t_end=spec.t_end)
    y0 = spec.y0 if spec.y0 is not None else np.zeros(spec.system.n)
    traj = simulate_feedback(spec.system, gain, bias, spec.forcing, y0,
                             spec.t_end, spec.dt, step_bound=tol.rk4_step_bound)
    return traj, None, None


def cmd_simulate(args) -> int:
    spec = _load_spec(args)
    traj, _, cost = _simulate_pipeline(spec)
    empirical = empirical_average_cost(traj, skip_time=spec.skip_time)
    payload = {
        "command": "simulate",
        "variant": spec.variant,
        "t_end": spec.t_end,
        "dt": spec.dt,
        "skip_time": spec.skip_time,
        "empirical_J": empirical,
        "method": "empirical",
        "closed_form_J": None if cost is None else cost.J,
    }
    print(f"empirical J = {empirical:.12g} over [0, {spec.t_end:g}]")
    if cost is not None:
        print(f"closed-form J = {cost.J:.12g} "
              f"(gap {abs(empirical - cost.J):.3e})")
    _write_report(args.output, payload)
    if args.output is not None:
        os.makedirs(args.output, exist_ok=True)
        trajectory_to_csv(traj, os.path.join(args.output, "trajectory.csv"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# built-in worked example


def _example_spec(forcing: str, variant: str, t_end: float, dt: float) -> dict:
    if forcing == "trig":
        forcing_payload = {"dimension": 1,
                           "terms": [{"omega": 1.0, "cos": [0.0], "sin": [1.0]}]}
    elif forcing == "aa":
        forcing_payload = {"builtin": "aa_sin_reciprocal", "params": {}}
    else:
        raise ValueError(f"unknown forcing {forcing!r}; use 'trig' or 'aa'")
    return {
        "system": {"A": [[3.0]], "B": [[4.0]], "M": [[1.0]]},
        "forcing": forcing_payload,
        "options": {"variant": variant, "t_end": t_end, "dt": dt},
    }


class _Gate:
    """Collects pass/fail lines for the example pipeline."""

    def __init__(self):
        self.failures = []

    def check(self, label: str, value: float, expected: float, tol: float):
        error = abs(value - expected)
        verdict = "PASS" if error <= tol else "FAIL"
        if error > tol:
            self.failures.append(label)
        print(f"{verdict}  {label}: {value:.17g} "
              f"(expected {expected:.17g}, error {error:.3e}, tol {tol:.1e})")

    def require(self, label: str, ok: bool, detail: str):
        verdict = "PASS" if ok else "FAIL"
        if not ok:
            self.failures.append(label)
        print(f"{verdict}  {label}: {detail}")


def cmd_example(args) -> int:
    payload = _example_spec(args.forcing, args.variant, args.t_end, args.dt)
    spec = parse_problem_spec(payload, tol_flags=args.tol or ())
    gate = _Gate()

    stage = "check"
    report = check_hypotheses(spec.system)
    if not report.satisfied:
        print(f"stage {stage} failed", file=sys.stderr)
        return EXIT_HYPOTHESIS
    certificate = controllability_gramian(spec.system)
    gate.check("beta", certificate.beta, 8.0 / 3.0, 1e-10)
    gate.require("gramian residual",
                 certificate.lyapunov_residual < 1e-12,
                 f"{certificate.lyapunov_residual:.3e} < 1e-12")

    stage = "solve"
    solution = _solve_variant(spec.system, spec.variant, spec.tolerances)
    if spec.variant == "standard":
        gate.check("P", solution.P[0, 0], 0.5, 1e-12)
    else:
        gate.check("P", solution.P[0, 0], 3.0 / 8.0, 1e-12)

    stage = "synthesize"
    trig = isinstance(spec.forcing, TrigPolynomial)
    if trig:
        law = _synthesize_from_spec(spec)
        cost = closed_form_cost(law, spec.forcing)
        if spec.variant == "standard":
            gate.check("gain", law.gain[0, 0], 2.0, 1e-12)
            (r_term,) = law.r.terms
            gate.check("r cos coefficient", r_term.cos_coeff[0], 1.0 / 52.0,
                       1e-12)
            gate.check("r sin coefficient", r_term.sin_coeff[0], 5.0 / 52.0,
                       1e-12)
            (b_term,) = law.bias.terms
            gate.check("bias cos coefficient", b_term.cos_coeff[0], 1.0 / 13.0,
                       1e-12)
            gate.check("bias sin coefficient", b_term.sin_coeff[0], 5.0 / 13.0,
                       1e-12)
            gate.check("cross term", cost.cross_term, 5.0 / 52.0, 1e-12)
            gate.check("penalty term", cost.penalty_term, 4.0 / 52.0, 1e-12)
            gate.check("J", cost.J, 1.0 / 52.0, 1e-12)
        else:
            print(f"info  J = {cost.J:.12g} (cross {cost.cross_term:.12g}, "
                  f"penalty {cost.penalty_term:.12g})")

    stage = "simulate"
    traj, _, cost = _simulate_pipeline(spec)
    empirical = empirical_average_cost(traj, skip_time=spec.skip_time)
    if trig and spec.variant == "standard":
        gate.check("empirical J", empirical, 1.0 / 52.0, 1e-3)
    else:
        sup_state = float(np.abs(traj.states).max())
        gate.require("empirical J finite",
                     bool(np.isfinite(empirical)), f"J = {empirical:.12g}")
        gate.require("trajectory bounded", bool(np.isfinite(sup_state)),
                     f"sup |y| = {sup_state:.6g}")

    if args.output is not None:
        os.makedirs(args.output, exist_ok=True)
        trajectory_to_csv(traj, os.path.join(args.output, "trajectory.csv"))
        report_payload = {
            "command": "example",
            "forcing": args.forcing,
            "variant": args.variant,
            "empirical_J": empirical,
            "failures": list(gate.failures),
        }
        _write_artifact(args.output, "report.json", render_json(report_payload))

    if gate.failures:
        print(f"stage {stage} failed value checks: {gate.failures}",
              file=sys.stderr)
        return EXIT_SOLVER if stage != "simulate" else EXIT_SIMULATION
    print("example: all checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apcontrol",
        description="Averaged-cost optimal feedback synthesis for "
                    "y' = Ay + Bu + f with almost periodic forcing.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, needs_spec=True):
        cmd = sub.add_parser(name, help=help_text)
        if needs_spec:
            cmd.add_argument("spec", help="problem spec JSON file")
        cmd.add_argument("--output", default=None, metavar="DIR",
                         help="directory for report/artifact files")
        cmd.add_argument("--tol", action="append", metavar="NAME=VALUE",
                         help="override a tolerance for this run")
        cmd.set_defaults(handler=handler)
        return cmd

    add("check", cmd_check, "verify the stability/controllability hypotheses")
    add("gramian", cmd_gramian, "anti-stable controllability Gramian")
    add("solve", cmd_solve, "solve the selected Riccati equation")
    add("synthesize", cmd_synthesize, "build the optimal feedback law")
    cost = add("cost", cmd_cost, "recompute cost terms from a stored law")
    cost.add_argument("--law", required=True, help="law.json from synthesize")
    add("simulate", cmd_simulate, "integrate the closed loop and report J")
    example = add("example", cmd_example,
                  "run the built-in scalar worked example end to end",
                  needs_spec=False)
    example.add_argument("--variant", default="standard",
                         choices=["standard", "degenerate"])
    example.add_argument("--forcing", default="trig", choices=["trig", "aa"])
    example.add_argument("--t-end", type=float, default=500.0, dest="t_end")
    example.add_argument("--dt", type=float, default=1e-3)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SimulationError as exc:
        print(f"simulation failure: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO


def console() -> None:
    sys.exit(main())
