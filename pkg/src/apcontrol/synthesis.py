"""Feedback synthesis: adjoint signal, optimal law, and cost identities.

With P solving the Riccati equation and L = A - B B^T P the stable closed
loop, the optimal control for forcing f is the affine feedback

    u(t) = -B^T P y(t) - B^T r(t),

where the adjoint signal r is the anticausal integral

    r(t) = int_t^oo exp((s-t) L^T) P f(s) ds,

equivalently the bounded solution of r' = -L^T r - P f.  For a harmonic
forcing line f(t) = Re(fh e^{iwt}) (phasor fh = cos_coeff - i sin_coeff) the
integral evaluates to the phasor

    rh = -(L^T + iw I)^{-1} P fh.

A second route to an adjoint-type signal is the bounded mild solution of the
forward equation r' = L^T r + P f through the exponential dichotomy of L^T,
with phasor rh = (iw I - L^T)^{-1} P fh.  The two routes solve differently
signed equations and do not coincide: on the scalar worked example the
anticausal integral gives (cos t + 5 sin t)/52 while the dichotomy route
gives (5 sin t - cos t)/52, flipping the cosine part.  Each route is verified
against its own time-domain quadrature; the synthesis uses the anticausal
one, which is the route consistent with the cost identities below.

Averaged costs: with <.,.> the mean (Bohr) inner product,

    J(u)     = |u + B^T(P y + r)|^2 + 2<r, f> - |B^T r|^2     (any admissible u)
    J(u_opt) =                        2<r, f> - |B^T r|^2.

The identities hold when P solves the output-weighted equation; with the
gain-only (degenerate) P they still hold verbatim but the value accounts for
the control energy |u|^2 alone.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.interpolate

from .config import DEFAULTS
from .errors import DimensionError, SolverError
from .riccati import RiccatiSolution, solve_degenerate_are, solve_standard_are
from .signals import EvaluableSignal, HarmonicTerm, Signal, TrigPolynomial, evaluate
from .signals import aa_norm_sq, bohr_inner_closed
from .spectral import StateSpace, hyperbolic_splitting, matrix_exponential
from .spectral import spectral_abscissa

__all__ = [
    "FeedbackLaw",
    "CostReport",
    "solve_r_harmonic",
    "quadrature_r",
    "solve_r_dichotomy",
    "bounded_forced_response",
    "closed_loop_trajectory",
    "synthesize",
    "closed_form_cost",
    "cost_decomposition",
    "quadrature_bias_signal",
]


def _phasor(term: HarmonicTerm) -> np.ndarray:
    # f(t) = Re(fh exp(iwt)) with fh = cos - i sin
    return term.cos_coeff - 1j * term.sin_coeff


def _term_from_phasor(omega: float, phasor: np.ndarray) -> HarmonicTerm:
    return HarmonicTerm(omega, phasor.real.copy(), -phasor.imag.copy())


def _require_trig(f, what: str) -> TrigPolynomial:
    if not isinstance(f, TrigPolynomial):
        raise TypeError(
            f"{what} must be a trigonometric polynomial for the closed-form "
            "path; route evaluable signals through quadrature_r and the "
            "simulator instead")
    return f


@dataclasses.dataclass(frozen=True, eq=False)
class FeedbackLaw:
    """Synthesised affine feedback u = -gain*y - bias(t).

    Carries the system it was built for: the trajectory and cost operations
    need B.  ``closed_loop`` is A - B*gain and ``bias = B^T r`` line by line.
    """

    system: StateSpace
    riccati: RiccatiSolution
    r: TrigPolynomial
    gain: np.ndarray
    bias: TrigPolynomial
    closed_loop: np.ndarray

    def __post_init__(self):
        expected_gain = self.system.B.T @ self.riccati.P
        if np.linalg.norm(self.gain - expected_gain) > 1e-12 * (
                1.0 + np.linalg.norm(expected_gain)):
            raise SolverError("gain does not equal B^T P")
        expected_loop = self.system.A - self.system.B @ self.gain
        if np.linalg.norm(self.closed_loop - expected_loop) > 1e-12 * (
                1.0 + np.linalg.norm(expected_loop)):
            raise SolverError("closed-loop matrix does not equal A - B B^T P")
        if self.bias.dimension != self.system.m:
            raise DimensionError(
                f"bias has dimension {self.bias.dimension}, inputs are "
                f"{self.system.m}-dimensional")


@dataclasses.dataclass(frozen=True)
class CostReport:
    """Averaged cost split into its identity terms.

    ``J = control_mismatch + cross_term - penalty_term`` where the mismatch
    |u + B^T(P y + r)|^2 is zero exactly for the synthesised control (so the
    closed-form path reports J = cross - penalty directly).
    """

    J: float
    cross_term: float
    penalty_term: float
    method: str

    @property
    def control_mismatch(self) -> float:
        return self.J - self.cross_term + self.penalty_term


# ---------------------------------------------------------------------------
# adjoint signal: anticausal route


def solve_r_harmonic(L, P, f: TrigPolynomial,
                     stability_margin: float = DEFAULTS.stability_margin
                     ) -> TrigPolynomial:
    """Anticausal adjoint signal, line by line in closed form.

    Requires the closed loop L to be exponentially stable; each harmonic of
    f maps to rh = -(L^T + iw I)^{-1} P fh.
    """
    f = _require_trig(f, "forcing")
    L = np.atleast_2d(np.asarray(L, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n = L.shape[0]
    if f.dimension != n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is {n}-dimensional")
    abscissa = spectral_abscissa(L)
    if abscissa >= -float(stability_margin):
        raise SolverError(
            f"closed loop is not exponentially stable: abscissa {abscissa:.6e}")
    Lt = L.T
    terms = []
    for term in f.terms:
        rhs = P @ _phasor(term)
        if term.omega == 0.0:
            vec = -np.linalg.solve(Lt, rhs.real).astype(complex)
        else:
            vec = -np.linalg.solve(Lt + 1j * term.omega * np.eye(n), rhs)
        terms.append(_term_from_phasor(term.omega, vec))
    return TrigPolynomial(n, tuple(terms))


def quadrature_r(L, P, f: Signal, times, truncation: float = None,
                 step: float = None,
                 stability_margin: float = DEFAULTS.stability_margin,
                 decay_target: float = DEFAULTS.quadrature_decay_target
                 ) -> np.ndarray:
    """Brute-force anticausal integral at the requested sample times.

    Composite Simpson quadrature of int_0^T exp(tau L^T) P f(t + tau) dtau
    with propagators advanced by stepping.  This is the independent oracle
    for solve_r_harmonic and the only adjoint route open to signals given by
    evaluators.  Defaults: T = 40/delta and step delta/50 where delta is the
    decay rate of L; the truncation must satisfy exp(-delta T) <= decay_target.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n = L.shape[0]
    if f.dimension != n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is {n}-dimensional")
    abscissa = spectral_abscissa(L)
    if abscissa >= -float(stability_margin):
        raise SolverError(
            f"closed loop is not exponentially stable: abscissa {abscissa:.6e}")
    delta = -abscissa
    if truncation is None:
        truncation = 40.0 / delta
    truncation = float(truncation)
    if delta * truncation < math.log(1.0 / decay_target):
        raise SolverError(
            f"truncation {truncation:.6g} is too short: exp(-delta T) = "
            f"{math.exp(-delta * truncation):.3e} > {decay_target:.1e}; "
            f"use at least {math.log(1.0 / decay_target) / delta:.6g}")
    if step is None:
        step = delta / 50.0
    intervals = int(math.ceil(truncation / float(step)))
    intervals += intervals % 2
    h = truncation / intervals
    ts = np.asarray(times, dtype=float).reshape(-1)

    E = matrix_exponential(L.T, h)
    G = P.copy()  # exp(k h L^T) P for the current k
    acc = np.zeros((ts.size, n))
    block = max(1, int(2_000_000 // max(1, ts.size)))
    k = 0
    while k <= intervals:
        width = min(block, intervals + 1 - k)
        offsets = (k + np.arange(width)) * h
        fvals = evaluate(f, (ts[:, None] + offsets[None, :]).reshape(-1))
        fvals = fvals.reshape(ts.size, width, n)
        for j in range(width):
            idx = k + j
            weight = 1.0 if idx in (0, intervals) else (4.0 if idx % 2 else 2.0)
            acc += weight * (fvals[:, j, :] @ G.T)
            if idx < intervals:
                G = E @ G
        k += width
    return (h / 3.0) * acc


# ---------------------------------------------------------------------------
# bounded responses through the dichotomy


def bounded_forced_response(L, g: TrigPolynomial,
                            margin: float = DEFAULTS.hyperbolicity_margin
                            ) -> TrigPolynomial:
    """Unique bounded (mild) solution of x' = L x + g on the whole line.

    Requires L hyperbolic; each harmonic maps to xh = (iw I - L)^{-1} gh.
    """
    g = _require_trig(g, "forcing")
    L = np.atleast_2d(np.asarray(L, dtype=float))
    n = L.shape[0]
    if g.dimension != n:
        raise DimensionError(
            f"forcing has dimension {g.dimension}, state is {n}-dimensional")
    hyperbolic_splitting(L, margin=margin)  # validates the spectral gap
    terms = []
    for term in g.terms:
        gh = _phasor(term)
        if term.omega == 0.0:
            vec = np.linalg.solve(-L, gh.real).astype(complex)
        else:
            vec = np.linalg.solve(1j * term.omega * np.eye(n) - L, gh)
        terms.append(_term_from_phasor(term.omega, vec))
    return TrigPolynomial(n, tuple(terms))


def solve_r_dichotomy(L, P, f: TrigPolynomial,
                      margin: float = DEFAULTS.hyperbolicity_margin
                      ) -> TrigPolynomial:
    """Bounded solution of the forward adjoint equation r' = L^T r + P f.

    This is the dichotomy route: it exists for any hyperbolic L, stable or
    not, but solves the opposite-signed equation from solve_r_harmonic (see
    the module docstring for the sign discrepancy on the worked example).
    """
    f = _require_trig(f, "forcing")
    L = np.atleast_2d(np.asarray(L, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if f.dimension != L.shape[0]:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is {L.shape[0]}-dimensional")
    return bounded_forced_response(L.T, f.apply(P), margin=margin)


def closed_loop_trajectory(law: FeedbackLaw, f: TrigPolynomial,
                           margin: float = DEFAULTS.hyperbolicity_margin
                           ) -> TrigPolynomial:
    """Unique bounded trajectory of the closed loop y' = L y + f - B bias."""
    f = _require_trig(f, "forcing")
    if f.dimension != law.system.n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is "
            f"{law.system.n}-dimensional")
    g = f - law.bias.apply(law.system.B)
    return bounded_forced_response(law.closed_loop, g, margin=margin)


# ---------------------------------------------------------------------------
# synthesis and cost


def synthesize(system: StateSpace, f: TrigPolynomial, variant: str = "standard",
               stability_margin: float = DEFAULTS.stability_margin,
               rank_rtol: float = DEFAULTS.kalman_rank_rtol,
               max_condition: float = DEFAULTS.gramian_max_condition,
               max_iter: int = DEFAULTS.newton_max_iter,
               rtol: float = DEFAULTS.newton_rtol) -> FeedbackLaw:
    """Build the optimal affine feedback for trigonometric-polynomial forcing.

    ``variant`` selects the Riccati equation: "standard" (output-weighted,
    the default) or "degenerate" (gain-only).
    """
    f = _require_trig(f, "forcing")
    if f.dimension != system.n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is {system.n}-dimensional")
    if variant == "standard":
        sol = solve_standard_are(system, stability_margin=stability_margin,
                                 rank_rtol=rank_rtol, max_condition=max_condition,
                                 max_iter=max_iter, rtol=rtol)
    elif variant == "degenerate":
        sol = solve_degenerate_are(system, stability_margin=stability_margin,
                                   rank_rtol=rank_rtol, max_condition=max_condition)
    else:
        raise ValueError(f"unknown variant {variant!r}; use 'standard' or 'degenerate'")
    closed_loop = system.A - system.B @ system.B.T @ sol.P
    r = solve_r_harmonic(closed_loop, sol.P, f, stability_margin=stability_margin)
    gain = system.B.T @ sol.P
    bias = r.apply(system.B.T)
    return FeedbackLaw(system=system, riccati=sol, r=r, gain=gain, bias=bias,
                       closed_loop=closed_loop)


def closed_form_cost(law: FeedbackLaw, f: TrigPolynomial) -> CostReport:
    """Optimal averaged cost J = 2<r, f> - |B^T r|^2 in closed form."""
    f = _require_trig(f, "forcing")
    if f.dimension != law.system.n:
        raise DimensionError(
            f"forcing has dimension {f.dimension}, state is "
            f"{law.system.n}-dimensional")
    cross = 2.0 * bohr_inner_closed(law.r, f)
    penalty = aa_norm_sq(law.bias)
    return CostReport(J=cross - penalty, cross_term=cross, penalty_term=penalty,
                      method="closed_form")


def cost_decomposition(u: TrigPolynomial, y: TrigPolynomial, law: FeedbackLaw,
                       f: TrigPolynomial) -> CostReport:
    """Averaged cost of an admissible pair (u, y) via the identity

        J(u) = |u + B^T(P y + r)|^2 + 2<r, f> - |B^T r|^2.

    The pair must solve y' = A y + B u + f; the identity then exposes the
    excess over the optimum as the mean-square control mismatch.
    """
    u = _require_trig(u, "control")
    y = _require_trig(y, "trajectory")
    f = _require_trig(f, "forcing")
    if u.dimension != law.system.m:
        raise DimensionError(
            f"control has dimension {u.dimension}, inputs are "
            f"{law.system.m}-dimensional")
    if y.dimension != law.system.n or f.dimension != law.system.n:
        raise DimensionError(
            f"trajectory and forcing must have state dimension {law.system.n}, "
            f"got {y.dimension} and {f.dimension}")
    mismatch = u + y.apply(law.gain) + law.bias
    excess = aa_norm_sq(mismatch)
    cross = 2.0 * bohr_inner_closed(law.r, f)
    penalty = aa_norm_sq(law.bias)
    return CostReport(J=excess + cross - penalty, cross_term=cross,
                      penalty_term=penalty, method="decomposition")


# ---------------------------------------------------------------------------
# numeric-only route for evaluator-backed forcing


def quadrature_bias_signal(system: StateSpace, P, f: Signal, t_end: float,
                           grid_step: float = 0.02, truncation: float = None,
                           step: float = None) -> EvaluableSignal:
    """Bias signal B^T r(t) for forcing without a closed form.

    Samples the anticausal integral on a uniform grid covering [0, t_end]
    (padded at both ends) and interpolates with a cubic spline; the result
    plugs into the simulator exactly like a closed-form bias.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    closed_loop = system.A - system.B @ system.B.T @ P
    pad = 4.0 * grid_step
    count = int(math.ceil((float(t_end) + 2.0 * pad) / grid_step)) + 1
    grid = -pad + grid_step * np.arange(count)
    r_values = quadrature_r(closed_loop, P, f, grid, truncation=truncation,
                            step=step)
    bias_values = r_values @ system.B  # (k, m): row k is B^T r(t_k)
    spline = scipy.interpolate.CubicSpline(grid, bias_values, axis=0)

    def evaluator(t):
        tt = np.asarray(t, dtype=float)
        vals = spline(tt)
        return vals if tt.ndim else np.asarray(vals, dtype=float).reshape(-1)

    return EvaluableSignal(system.m, evaluator,
                           f"spline of B^T r on [{grid[0]:.3g}, {grid[-1]:.3g}]")
