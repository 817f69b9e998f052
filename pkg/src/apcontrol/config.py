"""Numerical tolerances and iteration limits shared across the package.

Every threshold the solvers rely on lives in one frozen dataclass so a single
override object can be threaded through the CLI.  Library functions take the
handful of values they need as keyword arguments defaulting to ``DEFAULTS``.
"""

from __future__ import annotations

import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    #: two frequencies match when |w1 - w2| <= freq_match_rtol * max(1, w1, w2)
    freq_match_rtol: float = 1e-9
    #: strict-stability margin applied to spectral abscissae
    stability_margin: float = 1e-8
    #: minimum |Re(eigenvalue)| required of a hyperbolic generator
    hyperbolicity_margin: float = 1e-8
    #: singular values below kalman_rank_rtol * sigma_max count as zero
    kalman_rank_rtol: float = 1e-10
    #: the Kronecker Lyapunov path is used up to this state dimension
    lyapunov_kron_max_dim: int = 20
    #: Gramians above this condition number are rejected as numerically singular
    gramian_max_condition: float = 1e12
    #: Newton iteration on the Riccati equation: cap and residual factor
    newton_max_iter: int = 50
    newton_rtol: float = 1e-11
    #: matrix exponentials are refused above this ||t A||_2 (overflow guard)
    expm_max_norm: float = 700.0
    #: quadrature horizon T must satisfy exp(-delta T) <= quadrature_decay_target
    quadrature_decay_target: float = 1e-12
    #: RK4 step guard: dt * ||closed-loop matrix||_2 <= rk4_step_bound
    rk4_step_bound: float = 0.1

    def replace(self, **overrides) -> "Tolerances":
        return dataclasses.replace(self, **overrides)


DEFAULTS = Tolerances()
