"""Algebraic Riccati equations for the averaged-cost synthesis.

Two equations appear.  The gain-only (degenerate) equation

    A^T P + P A - P B B^T P = 0

has, under the standing hypotheses, the exact positive definite solution
P = W^{-1} where W is the anti-stable controllability Gramian: multiplying
A W + W A^T = B B^T by W^{-1} on both sides gives precisely the equation
above, and the closed loop A - B B^T W^{-1} = -W A^T W^{-1} mirrors the
spectrum of -A, hence is exponentially stable.

The output-weighted (standard) equation

    A^T P + P A - P B B^T P + M^T M = 0

is solved by Newton's method in Kleinman form: given a stabilising gain K_k,
solve the Lyapunov equation

    (A - B K_k)^T P + P (A - B K_k) = -K_k^T K_k - M^T M

and update K_{k+1} = B^T P.  Seeded with K_0 = B^T W^{-1} every iterate is
stabilising and the residual converges quadratically.  The same engine with
the M term switched off is kept as an independent cross-check of the
inverse-Gramian path; the two routes must agree and are never collapsed.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .config import DEFAULTS
from .errors import HypothesisError, SolverError
from .spectral import (
    StateSpace,
    check_hypotheses,
    controllability_gramian,
    solve_lyapunov,
    spectral_abscissa,
)

__all__ = [
    "RiccatiSolution",
    "are_residual",
    "solve_degenerate_are",
    "solve_standard_are",
    "newton_kleinman_oracle",
]


@dataclasses.dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """Solution matrix with its certificate.

    ``variant`` is ``"degenerate"`` (gain-only equation, solved through the
    Gramian) or ``"standard"`` (output-weighted equation, solved by Newton
    iteration).  ``w_condition`` is the condition number of the Gramian and
    is recorded on the degenerate path only.
    """

    P: np.ndarray
    variant: str
    residual_norm: float
    closed_loop_abscissa: float
    p_min_eigenvalue: float
    w_condition: float | None = None

    def __post_init__(self):
        if self.variant not in ("degenerate", "standard"):
            raise ValueError(f"unknown variant {self.variant!r}")
        P = np.asarray(self.P, dtype=float)
        scale = max(1.0, float(np.linalg.norm(P)))
        if np.linalg.norm(P - P.T) > 1e-12 * scale:
            raise SolverError("Riccati solution is not symmetric")
        if self.closed_loop_abscissa >= 0.0:
            raise SolverError(
                f"closed loop is not stable: abscissa {self.closed_loop_abscissa:.6e}")
        if self.p_min_eigenvalue < -1e-10 * scale:
            raise SolverError(
                f"solution is indefinite: min eigenvalue {self.p_min_eigenvalue:.6e}")
        if self.variant == "degenerate" and self.p_min_eigenvalue <= 0.0:
            raise SolverError("degenerate solution must be positive definite")


def are_residual(system: StateSpace, P: np.ndarray, include_M: bool) -> float:
    """Frobenius norm of A^T P + P A - P B B^T P (+ M^T M)."""
    A, B = system.A, system.B
    res = A.T @ P + P @ A - P @ B @ B.T @ P
    if include_M:
        res = res + system.M.T @ system.M
    return float(np.linalg.norm(res))


def _require_hypotheses(system: StateSpace, stability_margin: float,
                        rank_rtol: float) -> None:
    report = check_hypotheses(system, stability_margin=stability_margin,
                              rank_rtol=rank_rtol)
    if not report.minus_A_stable:
        raise HypothesisError(
            "stability hypothesis fails: -A has spectral abscissa "
            f"{report.minus_A_abscissa:.6e}, not < {-stability_margin:.1e}")
    if not report.exactly_controllable:
        raise HypothesisError(
            "controllability hypothesis fails: Kalman matrix has rank "
            f"{report.controllability_rank} < {system.n}")


def solve_degenerate_are(system: StateSpace,
                         stability_margin: float = DEFAULTS.stability_margin,
                         rank_rtol: float = DEFAULTS.kalman_rank_rtol,
                         max_condition: float = DEFAULTS.gramian_max_condition
                         ) -> RiccatiSolution:
    """Exact solution P = W^{-1} of the gain-only Riccati equation.

    Requires both standing hypotheses; rejects Gramians whose condition
    number exceeds ``max_condition`` as numerically singular.
    """
    _require_hypotheses(system, stability_margin, rank_rtol)
    cert = controllability_gramian(system, stability_margin=stability_margin)
    w_condition = float(np.linalg.cond(cert.W, 2))
    if not np.isfinite(w_condition) or w_condition > max_condition:
        raise SolverError(
            f"Gramian condition number {w_condition:.3e} exceeds "
            f"{max_condition:.1e}; the inverse is numerically meaningless")
    P = np.linalg.solve(cert.W, np.eye(system.n))
    P = 0.5 * (P + P.T)
    return RiccatiSolution(
        P=P,
        variant="degenerate",
        residual_norm=are_residual(system, P, include_M=False),
        closed_loop_abscissa=spectral_abscissa(system.A - system.B @ system.B.T @ P),
        p_min_eigenvalue=float(np.min(np.linalg.eigvalsh(P))),
        w_condition=w_condition,
    )


def _newton_iterate(system: StateSpace, include_M: bool, K0: np.ndarray,
                    max_iter: int, rtol: float):
    """Kleinman iteration; returns (P, residual history)."""
    A, B = system.A, system.B
    Q = system.M.T @ system.M if include_M else np.zeros((system.n, system.n))
    q_norm = float(np.linalg.norm(Q))
    bbt_norm = float(np.linalg.norm(B @ B.T))
    K = np.atleast_2d(np.asarray(K0, dtype=float))
    history: list[float] = []
    for iteration in range(max_iter):
        closed = A - B @ K
        abscissa = spectral_abscissa(closed)
        if abscissa >= 0.0:
            if iteration == 0:
                raise SolverError(
                    f"initial gain is not stabilising: closed-loop abscissa "
                    f"{abscissa:.6e}")
            raise SolverError(
                f"stabilising property lost at iteration {iteration}: "
                f"closed-loop abscissa {abscissa:.6e}; residual history {history}")
        P = solve_lyapunov(closed.T, -(K.T @ K) - Q)
        P = 0.5 * (P + P.T)
        residual = are_residual(system, P, include_M)
        history.append(residual)
        p_norm = float(np.linalg.norm(P))
        if residual <= rtol * (1.0 + q_norm + p_norm * p_norm * bbt_norm):
            return P, history
        K = B.T @ P
    raise SolverError(
        f"Newton iteration did not converge within {max_iter} steps; "
        f"residual history {history}")


def newton_kleinman_oracle(system: StateSpace, include_M: bool, K0,
                           max_iter: int = DEFAULTS.newton_max_iter,
                           rtol: float = DEFAULTS.newton_rtol) -> np.ndarray:
    """Newton iteration from a caller-supplied stabilising gain.

    Exists as an independent route to the same fixed points: with
    ``include_M`` it is the production path of the standard equation, without
    it a cross-check of the inverse-Gramian solution, started from any
    stabilising ``K0`` rather than from the Gramian.
    """
    P, _ = _newton_iterate(system, include_M, K0, max_iter, rtol)
    return P


def solve_standard_are(system: StateSpace,
                       stability_margin: float = DEFAULTS.stability_margin,
                       rank_rtol: float = DEFAULTS.kalman_rank_rtol,
                       max_condition: float = DEFAULTS.gramian_max_condition,
                       max_iter: int = DEFAULTS.newton_max_iter,
                       rtol: float = DEFAULTS.newton_rtol) -> RiccatiSolution:
    """Stabilising solution of the output-weighted Riccati equation.

    Newton iteration seeded with the exact degenerate gain B^T W^{-1}, which
    is stabilising under the standing hypotheses.
    """
    seed = solve_degenerate_are(system, stability_margin=stability_margin,
                                rank_rtol=rank_rtol, max_condition=max_condition)
    K0 = system.B.T @ seed.P
    P, history = _newton_iterate(system, True, K0, max_iter, rtol)
    return RiccatiSolution(
        P=P,
        variant="standard",
        residual_norm=history[-1],
        closed_loop_abscissa=spectral_abscissa(system.A - system.B @ system.B.T @ P),
        p_min_eigenvalue=float(np.min(np.linalg.eigvalsh(P))),
        w_condition=None,
    )
