import math

import numpy as np
import pytest

from apcontrol import (
    HypothesisError,
    SolverError,
    StateSpace,
    controllability_gramian,
    hyperbolic_splitting,
    spectral_abscissa,
)
from apcontrol.riccati import (
    RiccatiSolution,
    are_residual,
    newton_kleinman_oracle,
    solve_degenerate_are,
    solve_standard_are,
)

SCALAR = StateSpace(3.0, 4.0, 1.0)


def random_antistable_system(rng, n_max=5, m_max=3):
    """Anti-stable A with spectrum in [0.5, 3], full-rank B, random weight M.

    To keep instance scales comparable, B is rescaled so the smallest Gramian
    eigenvalue is 0.05 (the Gramian is quadratic in B, so this is exact);
    draws whose Gramian stays badly conditioned are rejected.
    """
    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        eigs = rng.uniform(0.5, 3.0, size=n)
        S = rng.standard_normal((n, n)) + 2.0 * np.eye(n)
        if np.linalg.cond(S) > 50.0:
            continue
        A = S @ np.diag(eigs) @ np.linalg.inv(S)
        B = rng.standard_normal((n, m))
        sys = StateSpace(A, B, rng.standard_normal((n, n)))
        cert = controllability_gramian(sys)
        lo = float(np.min(np.linalg.eigvalsh(cert.W)))
        hi = float(np.max(np.linalg.eigvalsh(cert.W)))
        if lo <= 0.0 or hi / lo > 2e3:
            continue
        return StateSpace(A, B * math.sqrt(0.05 / lo), sys.M)


# ---------------------------------------------------------------------------
# degenerate (gain-only) equation


def test_scalar_degenerate_solution():
    sol = solve_degenerate_are(SCALAR)
    assert sol.variant == "degenerate"
    assert sol.P[0, 0] == pytest.approx(3.0 / 8.0, rel=1e-12)
    assert sol.closed_loop_abscissa == pytest.approx(-3.0, rel=1e-12)
    assert sol.residual_norm <= 1e-12
    assert sol.p_min_eigenvalue == pytest.approx(3.0 / 8.0, rel=1e-12)
    assert sol.w_condition == pytest.approx(1.0, rel=1e-12)


def test_identity_pair_degenerate_solution():
    sol = solve_degenerate_are(StateSpace(np.eye(2), np.eye(2), np.eye(2)))
    assert sol.P == pytest.approx(2.0 * np.eye(2), rel=1e-12)
    assert sol.closed_loop_abscissa == pytest.approx(-1.0, rel=1e-12)


def test_degenerate_requires_antistable_A():
    with pytest.raises(HypothesisError, match="stability hypothesis"):
        solve_degenerate_are(StateSpace(-1.0, 1.0, 1.0))


def test_degenerate_requires_controllability():
    sys2 = StateSpace(np.diag([1.0, 2.0]), np.array([[1.0], [0.0]]), np.eye(2))
    with pytest.raises(HypothesisError, match="rank 1 < 2"):
        solve_degenerate_are(sys2)


def test_singular_gramian_rejected():
    sys2 = StateSpace(np.eye(2), np.diag([1.0, 1e-7]), np.eye(2))
    with pytest.raises(SolverError, match="condition number"):
        solve_degenerate_are(sys2)


def test_condition_cap_is_adjustable():
    with pytest.raises(SolverError, match="condition number"):
        solve_degenerate_are(StateSpace(np.diag([1.0, 2.0]),
                                        np.diag([1.0, 0.05]), np.eye(2)),
                             max_condition=10.0)


def test_inverse_of_solution_is_the_gramian(rng):
    for _ in range(10):
        sys = random_antistable_system(rng)
        sol = solve_degenerate_are(sys)
        cert = controllability_gramian(sys)
        Winv_back = np.linalg.inv(sol.P)
        assert np.linalg.norm(Winv_back - cert.W) <= 1e-8 * (
            1.0 + np.linalg.norm(cert.W))
        assert np.min(np.linalg.eigvalsh(Winv_back)) == pytest.approx(
            cert.beta, rel=1e-8, abs=1e-10)


def test_degenerate_certificate_on_random_instances(rng):
    for _ in range(10):
        sys = random_antistable_system(rng)
        sol = solve_degenerate_are(sys)
        bbt = np.linalg.norm(sys.B @ sys.B.T)
        assert sol.residual_norm <= 1e-10 * (1.0 + np.linalg.norm(sol.P) * bbt)
        assert sol.p_min_eigenvalue > 0.0
        assert sol.closed_loop_abscissa < 0.0
        # the closed loop mirrors the spectrum of -A
        mirrored = sorted(np.linalg.eigvals(-sys.A).real)
        achieved = sorted(np.linalg.eigvals(
            sys.A - sys.B @ sys.B.T @ sol.P).real)
        assert achieved == pytest.approx(mirrored, rel=1e-7, abs=1e-7)


# ---------------------------------------------------------------------------
# standard (output-weighted) equation


def test_scalar_standard_solution():
    sol = solve_standard_are(SCALAR)
    assert sol.variant == "standard"
    assert sol.P[0, 0] == pytest.approx(0.5, rel=1e-12)
    assert sol.closed_loop_abscissa == pytest.approx(-5.0, rel=1e-12)
    assert sol.residual_norm <= 1e-11 * (1.0 + 1.0 + 0.25 * 16.0)
    assert sol.w_condition is None


def test_scalar_standard_heavier_weight():
    sol = solve_standard_are(StateSpace(3.0, 4.0, 2.0))
    assert sol.P[0, 0] == pytest.approx((3.0 + math.sqrt(73.0)) / 16.0, rel=1e-12)


def test_identity_pair_standard_solution():
    sol = solve_standard_are(StateSpace(np.eye(2), np.eye(2), np.eye(2)))
    assert sol.P == pytest.approx((1.0 + math.sqrt(2.0)) * np.eye(2), rel=1e-12)


def test_standard_with_zero_weight_matches_degenerate():
    sys = StateSpace(3.0, 4.0, 0.0)
    deg = solve_degenerate_are(sys)
    std = solve_standard_are(sys)
    assert std.P == pytest.approx(deg.P, abs=1e-8)


def test_weight_monotonicity():
    light = solve_standard_are(StateSpace(3.0, 4.0, 1.0))
    heavy = solve_standard_are(StateSpace(3.0, 4.0, 2.0))
    assert heavy.p_min_eigenvalue >= light.p_min_eigenvalue - 1e-12
    light2 = solve_standard_are(StateSpace(np.eye(2), np.eye(2), np.eye(2)))
    heavy2 = solve_standard_are(StateSpace(np.eye(2), np.eye(2), 2.0 * np.eye(2)))
    assert heavy2.p_min_eigenvalue >= light2.p_min_eigenvalue - 1e-12


def test_standard_residual_certificate_on_random_instances(rng):
    for _ in range(10):
        sys = random_antistable_system(rng)
        sol = solve_standard_are(sys)
        assert are_residual(sys, sol.P, include_M=True) == pytest.approx(
            sol.residual_norm, rel=1e-6, abs=1e-14)
        threshold = 1e-11 * (1.0 + np.linalg.norm(sys.M.T @ sys.M)
                             + np.linalg.norm(sol.P) ** 2
                             * np.linalg.norm(sys.B @ sys.B.T))
        assert sol.residual_norm <= threshold
        assert sol.closed_loop_abscissa < 0.0
        assert sol.p_min_eigenvalue >= -1e-10 * max(1.0, np.linalg.norm(sol.P))


def test_stable_subspace_is_the_graph_of_P(rng):
    # the block matrix [[A, -BB^T], [-M^T M, -A^T]] maps [I; P] to [I; P] L,
    # so its stable invariant subspace must be fixed by the stable projector
    for _ in range(10):
        sys = random_antistable_system(rng)
        n = sys.n
        for include_M in (True, False):
            sol = (solve_standard_are(sys) if include_M
                   else solve_degenerate_are(sys))
            MtM = sys.M.T @ sys.M if include_M else np.zeros((n, n))
            H = np.block([[sys.A, -sys.B @ sys.B.T], [-MtM, -sys.A.T]])
            split = hyperbolic_splitting(H)
            assert split.stable_dim == n
            V = np.vstack([np.eye(n), sol.P])
            misalignment = np.linalg.norm(split.Pi_s @ V - V)
            assert misalignment <= 1e-9 * (1.0 + np.linalg.norm(H)) * (
                np.linalg.norm(V))


# ---------------------------------------------------------------------------
# Newton oracle


def test_oracle_reproduces_standard_solution():
    P = newton_kleinman_oracle(SCALAR, include_M=True, K0=[[2.0]])
    assert P[0, 0] == pytest.approx(0.5, rel=1e-12)


def test_oracle_reproduces_degenerate_solution():
    P = newton_kleinman_oracle(SCALAR, include_M=False, K0=[[1.0]])
    assert P[0, 0] == pytest.approx(3.0 / 8.0, rel=1e-10)


def test_oracle_rejects_nonstabilising_seed():
    # closed loop 3 - 4*0.5 = 1 is unstable
    with pytest.raises(SolverError, match="not stabilising"):
        newton_kleinman_oracle(SCALAR, include_M=False, K0=[[0.5]])


def test_oracle_iteration_cap():
    # seed far from the fixed point so two iterations cannot reach tolerance
    with pytest.raises(SolverError, match="did not converge"):
        newton_kleinman_oracle(SCALAR, include_M=True, K0=[[1.0]], max_iter=2)


def test_gramian_path_agrees_with_newton_path(rng):
    for _ in range(10):
        sys = random_antistable_system(rng)
        deg = solve_degenerate_are(sys)
        seed = 1.25 * sys.B.T @ deg.P
        if spectral_abscissa(sys.A - sys.B @ seed) >= 0.0:
            seed = sys.B.T @ deg.P
        P_newton = newton_kleinman_oracle(sys, include_M=False, K0=seed)
        assert np.linalg.norm(deg.P - P_newton) <= 1e-8 * (
            1.0 + np.linalg.norm(deg.P))


def test_newton_residual_history_decreases():
    from apcontrol.riccati import _newton_iterate
    sys = StateSpace(np.diag([1.0, 2.0]), np.array([[1.0], [1.0]]),
                     np.array([[1.0, 0.5]]))
    deg = solve_degenerate_are(sys)
    _, history = _newton_iterate(sys, True, sys.B.T @ deg.P,
                                 max_iter=50, rtol=1e-11)
    assert len(history) >= 2
    # quadratic convergence: each recorded residual far below its predecessor
    for earlier, later in zip(history, history[1:]):
        assert later <= 0.5 * earlier + 1e-14


# ---------------------------------------------------------------------------
# certificate validation


def test_certificate_rejects_asymmetric_matrix():
    with pytest.raises(SolverError, match="symmetric"):
        RiccatiSolution(P=np.array([[1.0, 1.0], [0.0, 1.0]]), variant="standard",
                        residual_norm=0.0, closed_loop_abscissa=-1.0,
                        p_min_eigenvalue=0.5)


def test_certificate_rejects_unstable_closed_loop():
    with pytest.raises(SolverError, match="not stable"):
        RiccatiSolution(P=np.eye(2), variant="standard", residual_norm=0.0,
                        closed_loop_abscissa=0.0, p_min_eigenvalue=1.0)


def test_certificate_rejects_semidefinite_degenerate_solution():
    with pytest.raises(SolverError, match="positive definite"):
        RiccatiSolution(P=np.diag([1.0, 0.0]), variant="degenerate",
                        residual_norm=0.0, closed_loop_abscissa=-1.0,
                        p_min_eigenvalue=0.0)


def test_certificate_rejects_unknown_variant():
    with pytest.raises(ValueError, match="variant"):
        RiccatiSolution(P=np.eye(1), variant="exotic", residual_norm=0.0,
                        closed_loop_abscissa=-1.0, p_min_eigenvalue=1.0)
