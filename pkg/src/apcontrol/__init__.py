"""Averaged-cost optimal feedback control of linear systems driven by almost
periodic and almost automorphic forcing.

The package synthesises the feedback law u = -gain*y - bias(t) that minimises
the long-run average of |M y|^2 + |u|^2 along y' = A y + B u + f(t), for
anti-stable A (in the sense that -A is exponentially stable) and exactly
controllable (-A, B).
"""

from .config import DEFAULTS, Tolerances
from .errors import DimensionError, HypothesisError, SimulationError, SolverError
from .signals import (
    BUILTIN_SIGNALS,
    EvaluableSignal,
    HarmonicTerm,
    Signal,
    TrigPolynomial,
    aa_norm_sq,
    bohr_inner_closed,
    bohr_inner_numeric,
    evaluate,
    signal_from_json,
    signal_to_json,
)
from .spectral import (
    DichotomySplitting,
    GramianCertificate,
    HypothesisReport,
    StateSpace,
    check_hypotheses,
    controllability_gramian,
    controllability_matrix,
    hyperbolic_splitting,
    matrix_exponential,
    solve_lyapunov,
    spectral_abscissa,
)
from .riccati import (
    RiccatiSolution,
    are_residual,
    newton_kleinman_oracle,
    solve_degenerate_are,
    solve_standard_are,
)
from .synthesis import (
    CostReport,
    FeedbackLaw,
    bounded_forced_response,
    closed_form_cost,
    closed_loop_trajectory,
    cost_decomposition,
    quadrature_bias_signal,
    quadrature_r,
    solve_r_dichotomy,
    solve_r_harmonic,
    synthesize,
)
from .simulator import (
    CostRow,
    CostTable,
    Trajectory,
    compare_controls,
    empirical_average_cost,
    integrate_closed_loop,
    simulate_feedback,
    trajectory_to_csv,
)

__all__ = [
    "DEFAULTS",
    "Tolerances",
    "DimensionError",
    "HypothesisError",
    "SimulationError",
    "SolverError",
    "BUILTIN_SIGNALS",
    "EvaluableSignal",
    "HarmonicTerm",
    "Signal",
    "TrigPolynomial",
    "aa_norm_sq",
    "bohr_inner_closed",
    "bohr_inner_numeric",
    "evaluate",
    "signal_from_json",
    "signal_to_json",
    "DichotomySplitting",
    "GramianCertificate",
    "HypothesisReport",
    "StateSpace",
    "check_hypotheses",
    "controllability_gramian",
    "controllability_matrix",
    "hyperbolic_splitting",
    "matrix_exponential",
    "solve_lyapunov",
    "spectral_abscissa",
    "RiccatiSolution",
    "are_residual",
    "newton_kleinman_oracle",
    "solve_degenerate_are",
    "solve_standard_are",
    "CostReport",
    "FeedbackLaw",
    "bounded_forced_response",
    "closed_form_cost",
    "closed_loop_trajectory",
    "cost_decomposition",
    "quadrature_bias_signal",
    "quadrature_r",
    "solve_r_dichotomy",
    "solve_r_harmonic",
    "synthesize",
    "CostRow",
    "CostTable",
    "Trajectory",
    "compare_controls",
    "empirical_average_cost",
    "integrate_closed_loop",
    "simulate_feedback",
    "trajectory_to_csv",
]

__version__ = "0.1.0"
