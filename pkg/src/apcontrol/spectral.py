"""State-space containers, standing hypotheses, Gramians, and dichotomies.

The two standing hypotheses of the synthesis are

    (H-stability)        -A is exponentially stable, i.e. every eigenvalue
                         of A has real part > 0;
    (H-controllability)  (-A, B) is exactly controllable, i.e. the Kalman
                         matrix [B, AB, ..., A^{n-1}B] has full row rank.

Under them the anti-stable controllability Gramian

    W = int_0^oo exp(-tA) B B^T exp(-tA^T) dt

is the unique solution of A W + W A^T = B B^T and is positive definite; its
smallest eigenvalue is the controllability lower bound ``beta``.

Hyperbolic generators (no eigenvalue within ``hyperbolicity_margin`` of the
imaginary axis) admit the spectral splitting Pi_s + Pi_u = I used to build
bounded solutions of forced linear equations on the whole line.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg

from .config import DEFAULTS
from .errors import DimensionError, HypothesisError, SolverError

__all__ = [
    "StateSpace",
    "HypothesisReport",
    "GramianCertificate",
    "DichotomySplitting",
    "spectral_abscissa",
    "controllability_matrix",
    "check_hypotheses",
    "solve_lyapunov",
    "controllability_gramian",
    "matrix_exponential",
    "hyperbolic_splitting",
]


def _as_matrix(value, what: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(value, dtype=float))
    if arr.ndim != 2:
        raise DimensionError(f"{what} must be a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclasses.dataclass(frozen=True, eq=False)
class StateSpace:
    """System y' = A y + B u + f with output weight M (cost |M y|^2 + |u|^2).

    A is n-by-n, B is n-by-m, M is p-by-n.  Scalars and 1-D arrays are
    promoted to matrices, so ``StateSpace(3, 4, 1)`` is the scalar system.
    """

    A: np.ndarray
    B: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A, "A")
        B = _as_matrix(self.B, "B")
        M = _as_matrix(self.M, "M")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got shape {A.shape}")
        if B.shape[0] != n:
            raise DimensionError(
                f"B has {B.shape[0]} rows, expected {n} to match A")
        if M.shape[1] != n:
            raise DimensionError(
                f"M has {M.shape[1]} columns, expected {n} to match A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.M.shape[0]

    def __repr__(self):
        return f"StateSpace(n={self.n}, m={self.m}, p={self.p})"


@dataclasses.dataclass(frozen=True)
class HypothesisReport:
    """Result of the standing-hypothesis check."""

    minus_A_stable: bool
    exactly_controllable: bool
    minus_A_abscissa: float
    controllability_rank: int

    @property
    def satisfied(self) -> bool:
        return self.minus_A_stable and self.exactly_controllable


@dataclasses.dataclass(frozen=True, eq=False)
class GramianCertificate:
    """Gramian W with its smallest eigenvalue and Lyapunov residual."""

    W: np.ndarray
    beta: float
    lyapunov_residual: float

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        sym_defect = np.linalg.norm(W - W.T)
        if sym_defect > 1e-12 * max(1.0, np.linalg.norm(W)):
            raise SolverError(f"Gramian is not symmetric (defect {sym_defect:.3e})")
        if self.beta < 0.0:
            raise SolverError(f"Gramian has negative eigenvalue {self.beta:.3e}")


@dataclasses.dataclass(frozen=True, eq=False)
class DichotomySplitting:
    """Spectral projectors of a hyperbolic generator.

    ``Pi_s`` projects onto the stable invariant subspace (eigenvalues with
    negative real part) along the unstable one, ``Pi_u = I - Pi_s``, and
    ``delta`` is the spectral gap min |Re(eigenvalue)|.
    """

    Pi_s: np.ndarray
    Pi_u: np.ndarray
    delta: float
    stable_dim: int

    def __post_init__(self):
        eye = np.eye(self.Pi_s.shape[0])
        if np.linalg.norm(self.Pi_s + self.Pi_u - eye) > 1e-10 * max(
                1.0, np.linalg.norm(self.Pi_s)):
            raise SolverError("splitting projectors do not sum to the identity")
        if self.delta <= 0.0:
            raise SolverError(f"spectral gap must be positive, got {self.delta:.3e}")


# ---------------------------------------------------------------------------
# spectra and hypotheses


def spectral_abscissa(A) -> float:
    """Largest real part of the eigenvalues of ``A``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return float(np.max(np.linalg.eigvals(A).real))


def controllability_matrix(A, B) -> np.ndarray:
    """Kalman matrix [B, AB, ..., A^{n-1} B]."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def check_hypotheses(system: StateSpace,
                     stability_margin: float = DEFAULTS.stability_margin,
                     rank_rtol: float = DEFAULTS.kalman_rank_rtol) -> HypothesisReport:
    """Check the two standing hypotheses of the synthesis.

    Stability of -A is decided with a strict margin on the spectral
    abscissa; exact controllability via the singular values of the Kalman
    matrix, where values below ``rank_rtol * sigma_max`` count as zero.
    """
    abscissa = spectral_abscissa(-system.A)
    stable = abscissa < -float(stability_margin)
    kalman = controllability_matrix(system.A, system.B)
    sigma = np.linalg.svd(kalman, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sigma > rank_rtol * sigma[0]))
    return HypothesisReport(
        minus_A_stable=bool(stable),
        exactly_controllable=bool(rank == system.n),
        minus_A_abscissa=float(abscissa),
        controllability_rank=rank,
    )


# ---------------------------------------------------------------------------
# Lyapunov equations and Gramians


def _lyapunov_kron(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    # vectorised solve of A X + X A^T = Q; fine for small n, and trivially
    # auditable, which is why it is kept as the cross-check path
    n = A.shape[0]
    eye = np.eye(n)
    lhs = np.kron(eye, A) + np.kron(A, eye)
    try:
        x = np.linalg.solve(lhs, Q.reshape(-1, order="F"))
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            "Lyapunov equation is singular: the spectra of A and -A^T "
            "intersect") from exc
    return x.reshape((n, n), order="F")


def _lyapunov_schur(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.solve_continuous_lyapunov(A, Q)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"Lyapunov solve failed: {exc}") from exc


def solve_lyapunov(A, Q,
                   kron_max_dim: int = DEFAULTS.lyapunov_kron_max_dim) -> np.ndarray:
    """Solve A X + X A^T = Q.

    Dimensions up to ``kron_max_dim`` use Kronecker vectorisation, larger
    ones a Schur-based solver; the two agree to 1e-10 on their common range.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if A.shape[0] != A.shape[1] or A.shape != Q.shape:
        raise DimensionError(
            f"need square matrices of equal size, got A {A.shape} and Q {Q.shape}")
    if A.shape[0] <= kron_max_dim:
        return _lyapunov_kron(A, Q)
    return _lyapunov_schur(A, Q)


def controllability_gramian(system: StateSpace,
                            stability_margin: float = DEFAULTS.stability_margin
                            ) -> GramianCertificate:
    """Anti-stable controllability Gramian with certificate.

    Solves A W + W A^T = B B^T, which under stability of -A equals
    int_0^oo exp(-tA) B B^T exp(-tA^T) dt.  Returns W (symmetrised), its
    smallest eigenvalue ``beta`` and the achieved Lyapunov residual.
    """
    abscissa = spectral_abscissa(-system.A)
    if abscissa >= -float(stability_margin):
        raise HypothesisError(
            "stability hypothesis fails: -A has spectral abscissa "
            f"{abscissa:.6e} (needs < {-stability_margin:.1e})")
    BBt = system.B @ system.B.T
    W = solve_lyapunov(system.A, BBt)
    W = 0.5 * (W + W.T)
    residual = float(np.linalg.norm(system.A @ W + W @ system.A.T - BBt))
    # impossible when the solve succeeded, but guard against silent garbage
    if residual > 1e-8 * (1.0 + np.linalg.norm(BBt)):
        raise SolverError(f"Gramian residual {residual:.3e} is out of tolerance")
    beta = float(np.min(np.linalg.eigvalsh(W)))
    if beta < 0.0 and beta > -1e-12 * (1.0 + np.linalg.norm(W)):
        beta = 0.0  # roundoff on a positive semidefinite integral
    return GramianCertificate(W=W, beta=beta, lyapunov_residual=residual)


# ---------------------------------------------------------------------------
# matrix exponential


def matrix_exponential(A, t: float,
                       max_norm: float = DEFAULTS.expm_max_norm) -> np.ndarray:
    """exp(t A) by scaling-and-squaring, refused when ||t A||_2 > max_norm."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix exponential needs a square matrix, got {A.shape}")
    scaled = float(t) * A
    norm = float(np.linalg.norm(scaled, 2))
    if norm > max_norm:
        raise SolverError(
            f"||t A||_2 = {norm:.3e} exceeds the overflow guard {max_norm:.1f}")
    return scipy.linalg.expm(scaled)


# ---------------------------------------------------------------------------
# hyperbolic splitting


def hyperbolic_splitting(L, margin: float = DEFAULTS.hyperbolicity_margin
                         ) -> DichotomySplitting:
    """Spectral projectors of a generator with no eigenvalues near i*R.

    Uses an ordered real Schur form: with the stable block leading,

        Z^T L Z = [[T11, T12], [0, T22]],   T11 stable, T22 anti-stable,

    the stable spectral projector is Z [[I, -X], [0, 0]] Z^T where X solves
    the Sylvester equation T11 X - X T22 = -T12.
    """
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[0] != L.shape[1]:
        raise DimensionError(f"splitting needs a square matrix, got {L.shape}")
    n = L.shape[0]
    eigenvalues = np.linalg.eigvals(L)
    gaps = np.abs(eigenvalues.real)
    worst = int(np.argmin(gaps))
    if gaps[worst] <= margin:
        bad = eigenvalues[worst]
        raise SolverError(
            f"generator is not hyperbolic: eigenvalue {bad.real:.6e}{bad.imag:+.6e}j "
            f"lies within {margin:.1e} of the imaginary axis")
    T, Z, sdim = scipy.linalg.schur(L, output="real", sort="lhp")
    k = int(sdim)
    if k == 0:
        Pi_s = np.zeros((n, n))
    elif k == n:
        Pi_s = np.eye(n)
    else:
        T11 = T[:k, :k]
        T12 = T[:k, k:]
        T22 = T[k:, k:]
        X = scipy.linalg.solve_sylvester(T11, -T22, -T12)
        block = np.zeros((n, n))
        block[:k, :k] = np.eye(k)
        block[:k, k:] = -X
        Pi_s = Z @ block @ Z.T
    Pi_u = np.eye(n) - Pi_s
    return DichotomySplitting(Pi_s=Pi_s, Pi_u=Pi_u,
                              delta=float(np.min(gaps)), stable_dim=k)
