import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualbasis.core.exceptions import DegenerateAlpha, DimensionMismatch, MissingDualData, Unresolvable
from dualbasis.core.types import PAIRS, GammaMatrix, geometry_from_metric, pair_label
from dualbasis.identities import (
    AngleProblem,
    Branch,
    all_residuals_3d,
    beta12_2d,
    beta_3d,
    beta_angle,
    orthonormal_beta,
    orthonormal_product_residual_2d,
    orthonormal_residual,
    residual_2d,
    residual_3d,
    solve_alpha_2d,
    swap_inverse,
)
from dualbasis.identities.problem import column_index, pair_indices
from dualbasis.metric import gram_from_basis
from dualbasis.verification import Stream, random_basis, random_degenerate_pair_2d, random_orthonormal_basis

# pytest tests/test_angle_identities.py -rP


def _random_problem(n: int, index: int, seed: int = 5) -> AngleProblem:
    A = random_basis(n, seed, 1e3, index, Stream.PRIMAL)
    Astar = random_basis(n, seed, 1e3, index, Stream.DUAL)
    return AngleProblem.from_bases(A, Astar)


def test_problem_validation():
    with pytest.raises(DimensionMismatch):
        AngleProblem(alpha=[1.0, 1.0], gamma=np.eye(2))
    with pytest.raises(DimensionMismatch):
        AngleProblem(alpha=[1.0], gamma=np.eye(4))
    with pytest.raises(DimensionMismatch):
        AngleProblem(alpha=[1.0], gamma=np.eye(2), primal_lengths=[1.0, 1.0, 1.0])

    problem = AngleProblem(alpha=[math.pi / 2], gamma=np.eye(2))
    assert problem.n == 2 and not problem.has_dual_data
    assert _random_problem(3, 0).has_dual_data

    assert column_index(3, 3) == 2
    assert pair_indices(3, "13") == pair_indices(3, (1, 3)) == (0, 2)
    with pytest.raises(DimensionMismatch):
        column_index(2, 3)
    with pytest.raises(DimensionMismatch):
        pair_indices(2, "13")


def test_residual_2d_examples():
    # a*_1 = a_1 on an orthonormal primal frame
    feasible = AngleProblem(alpha=[math.pi / 2], gamma=np.eye(2))
    assert residual_2d(feasible, 1) == 0.0
    assert residual_2d(feasible, 2) == 0.0

    # both primal vectors parallel to a*_1
    infeasible = AngleProblem(alpha=[math.pi / 2], gamma=[[1.0, 0.0], [1.0, 0.0]])
    assert residual_2d(infeasible, 1) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("index", range(20))
def test_identities_on_random_2d_pairs(index):
    problem = _random_problem(2, index)
    assert abs(residual_2d(problem, 1)) < 1e-10
    assert abs(residual_2d(problem, 2)) < 1e-10
    assert beta12_2d(problem) == pytest.approx(math.cos(problem.beta[0]), abs=1e-9)


@pytest.mark.parametrize("index", range(20))
def test_identities_on_random_3d_pairs(index):
    problem = _random_problem(3, index)
    assert np.max(np.abs(all_residuals_3d(problem))) < 1e-10
    for (i, j), beta in zip(PAIRS[3], problem.beta):
        assert beta_3d(problem, pair_label(i, j)) == pytest.approx(math.cos(beta), abs=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_identical_bases_give_beta_equal_alpha(n):
    A = random_basis(n, 3, 1e3)
    problem = AngleProblem.from_bases(A, A)
    if n == 2:
        assert beta12_2d(problem) == pytest.approx(math.cos(problem.alpha[0]), abs=1e-9)
    else:
        for (i, j), alpha in zip(PAIRS[3], problem.alpha):
            assert beta_3d(problem, (i + 1, j + 1)) == pytest.approx(math.cos(alpha), abs=1e-9)


def test_residual_3d_examples():
    same = AngleProblem(alpha=[math.pi / 2] * 3, gamma=np.eye(3))
    np.testing.assert_allclose(all_residuals_3d(same), 0, atol=1e-15)

    parallel = AngleProblem(alpha=[math.pi / 2] * 3, gamma=[[1, 0, 0], [1, 0, 0], [1, 0, 0]])
    assert residual_3d(parallel, 1) == pytest.approx(2.0, abs=1e-14)

    with pytest.raises(DimensionMismatch):
        residual_3d(AngleProblem(alpha=[1.0], gamma=np.eye(2)), 1)
    with pytest.raises(DimensionMismatch):
        residual_2d(same, 1)


def test_degenerate_alpha():
    nearly_collinear = AngleProblem(alpha=[1e-7], gamma=np.eye(2))
    with pytest.raises(DegenerateAlpha):
        beta12_2d(nearly_collinear)

    flat = AngleProblem(alpha=[0.01] * 3, gamma=np.eye(3))
    with pytest.raises(DegenerateAlpha):
        beta_3d(flat, "12", degenerate_tolerance=1e-6)


def test_solver_generic_branch():
    recovered = 0
    for index in range(100):
        problem = _random_problem(2, index, seed=17)
        solution = solve_alpha_2d(problem.gamma)
        if abs(solution.denominator) < 0.1:
            continue
        recovered += 1
        assert solution.branch is Branch.GENERIC
        assert solution.cos_alpha == pytest.approx(math.cos(problem.alpha[0]), abs=1e-9)
        assert solution.candidates == () and not solution.ambiguous
    assert recovered > 30


def _planar_gammas(directions):
    """γ_ij from the polar angles (radians) of a1, a2, a*1, a*2"""
    a, d = directions[:2], directions[2:]
    return GammaMatrix([[math.cos(d[j] - a[i]) for j in range(2)] for i in range(2)])


def test_solver_near_boundary_reports_candidates():
    delta = 3e-7
    gamma = _planar_gammas([0.0, math.pi / 2, 0.3, math.pi / 2 - 0.3 + delta])
    solution = solve_alpha_2d(gamma)

    assert solution.branch is Branch.GENERIC
    assert 1e-7 < abs(solution.denominator) <= 1e-6
    assert solution.cos_alpha == pytest.approx(0.0, abs=1e-8)
    assert len(solution.candidates) == 2 and len(solution.residuals) == 2
    assert solution.choice is None and not solution.ambiguous
    assert solution.candidates[0] == pytest.approx(0.0, abs=1e-15)
    assert max(abs(r) for r in solution.residuals[0]) < 1e-12
    # the other sign fits column 1 only
    assert abs(solution.residuals[1][1]) > 1e-8


@pytest.mark.parametrize("index", range(20))
def test_solver_degenerate_branch(index):
    A, Astar = random_degenerate_pair_2d(seed=3, index=index)
    problem = AngleProblem.from_bases(A, Astar)
    solution = solve_alpha_2d(problem.gamma)

    assert solution.branch is Branch.DEGENERATE
    assert abs(solution.denominator) <= 1e-7
    assert len(solution.candidates) == 2 and solution.choice in (0, 1)
    assert max(abs(r) for r in solution.residuals[solution.choice]) < 1e-8
    # the primal basis is orthonormal
    assert solution.cos_alpha == pytest.approx(0.0, abs=1e-8)


def test_solver_degenerate_exact_instance():
    t = 0.3
    gamma = GammaMatrix([[math.cos(t), math.sin(t)], [math.sin(t), math.cos(t)]])
    solution = solve_alpha_2d(gamma)
    assert solution.branch is Branch.DEGENERATE and solution.denominator == 0.0
    assert solution.candidates[1] == pytest.approx(math.sin(2 * t), abs=1e-15)
    # both signs satisfy the column identities, the smaller |cos| wins
    assert all(max(abs(r) for r in pair) < 1e-12 for pair in solution.residuals)
    assert solution.ambiguous and solution.choice == 0
    assert solution.cos_alpha == pytest.approx(0.0, abs=1e-15)
    assert solution.alpha == pytest.approx(math.pi / 2, abs=1e-15)


def test_solver_degenerate_both_signs_fit():
    # α12 = 30° with a*1 at 70° and a*2 at -40°; the mirrored pair with α12 = 110° has the same γ_ij
    gamma = _planar_gammas(np.radians([0, 30, 70, -40]).tolist())
    solution = solve_alpha_2d(gamma)

    assert solution.branch is Branch.DEGENERATE and abs(solution.denominator) < 1e-15
    assert solution.ambiguous
    assert sorted(solution.candidates) == pytest.approx(sorted([math.cos(math.radians(110)), math.cos(math.radians(30))]))
    assert all(max(abs(r) for r in pair) < 1e-14 for pair in solution.residuals)
    assert solution.cos_alpha == solution.candidates[solution.choice]
    assert abs(solution.cos_alpha) == pytest.approx(math.cos(math.radians(70)))


def test_solver_degenerate_picks_the_fitting_sign():
    # a*2 at -60°: γ12 = 60°, γ22 = 90°, so only α12 = 30° fits column 2
    gamma = _planar_gammas(np.radians([0, 30, 70, -60]).tolist())
    solution = solve_alpha_2d(gamma, denominator_tolerance=1.0)

    assert solution.branch is Branch.DEGENERATE and not solution.ambiguous
    assert solution.cos_alpha == pytest.approx(math.cos(math.radians(30)), abs=1e-14)


def test_solver_unresolvable():
    with pytest.raises(Unresolvable):
        solve_alpha_2d(GammaMatrix([[1.0, 0.5], [0.0, 0.0]]))
    with pytest.raises(DimensionMismatch):
        solve_alpha_2d(GammaMatrix(np.eye(3)))


def test_swap_inverse():
    problem = _random_problem(3, 7)
    swapped = swap_inverse(problem)
    assert swap_inverse(swapped) == problem
    np.testing.assert_array_equal(swapped.alpha, problem.beta)
    np.testing.assert_array_equal(swapped.gamma.cosines, problem.gamma.cosines.T)

    # the swapped identities are the ones of G = Q G*^-1 Q^T
    assert np.max(np.abs(all_residuals_3d(swapped))) < 1e-10
    for (i, j), alpha in zip(PAIRS[3], problem.alpha):
        assert beta_3d(swapped, pair_label(i, j)) == pytest.approx(math.cos(alpha), abs=1e-9)

    with pytest.raises(MissingDualData, match="beta"):
        swap_inverse(AngleProblem(alpha=[math.pi / 2], gamma=np.eye(2)))


@pytest.mark.parametrize("n", [2, 3])
def test_orthonormal_identities(n):
    for index in range(10):
        A = random_orthonormal_basis(n, seed=2, index=index)
        Astar = random_basis(n, 2, 1e3, index, Stream.DUAL)
        problem = AngleProblem.from_bases(A, Astar)
        dual = geometry_from_metric(gram_from_basis(Astar))
        for column in range(1, n + 1):
            assert abs(orthonormal_residual(problem.gamma, column)) < 1e-12
            if n == 2:
                assert abs(orthonormal_product_residual_2d(problem.gamma, column)) < 1e-11
        for (i, j), beta in zip(PAIRS[n], dual.angles):
            assert orthonormal_beta(problem.gamma, pair_label(i, j)) == pytest.approx(math.cos(beta), abs=1e-10)


def test_beta_angle():
    assert beta_angle(0.5) == pytest.approx(math.pi / 3)
    assert beta_angle(-1 - 1e-12) == math.pi


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), index=st.integers(0, 10**6))
def test_column_identities_hold_for_any_seed(seed, index):
    problem = _random_problem(3, index, seed)
    assert np.max(np.abs(all_residuals_3d(problem))) < 1e-10
    assert np.max(np.abs(all_residuals_3d(swap_inverse(problem)))) < 1e-10
