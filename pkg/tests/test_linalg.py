import math

import numpy as np
import pytest

from dualbasis.core.exceptions import NotPositiveDefinite, SingularBasis, SingularMatrix
from dualbasis.utils.linalg import (
    condition_number,
    hadamard_ratio,
    leading_minors,
    max_relative_deviation,
    small_det,
    small_inverse,
    solve,
    symmetric_eigenvalues,
)
from dualbasis.utils.math import orthonormal_columns

# pytest tests/test_linalg.py -rP


@pytest.mark.parametrize("n", [1, 2, 3])
def test_small_det_and_inverse(n, rng):
    for _ in range(20):
        m = rng.uniform(-1, 1, size=(n, n)) + 2 * np.eye(n)
        assert small_det(m) == pytest.approx(np.linalg.det(m), rel=1e-12)
        np.testing.assert_allclose(small_inverse(m), np.linalg.inv(m), rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(m @ small_inverse(m), np.eye(n), atol=1e-12)


def test_large_inverse_paths(rng):
    m = rng.uniform(-1, 1, size=(5, 5))
    spd = m @ m.T + 5 * np.eye(5)
    np.testing.assert_allclose(small_inverse(spd, symmetric_positive=True) @ spd, np.eye(5), atol=1e-12)
    np.testing.assert_allclose(small_inverse(m + 3 * np.eye(5)) @ (m + 3 * np.eye(5)), np.eye(5), atol=1e-12)
    np.testing.assert_allclose(solve(spd, spd[:, 0], symmetric_positive=True), np.eye(5)[:, 0], atol=1e-12)


def test_singular_matrices():
    with pytest.raises(SingularMatrix):
        small_inverse([[1, 2], [2, 4]])
    with pytest.raises(SingularBasis):
        small_inverse([[1, 2], [2, 4]], error=SingularBasis)
    with pytest.raises(SingularMatrix):
        small_inverse([[1, np.nan], [0, 1]])
    with pytest.raises(SingularMatrix):
        small_inverse(np.zeros((3, 3)))

    not_spd = np.diag([1.0, 1.0, 1.0, -1.0])
    with pytest.raises(NotPositiveDefinite):
        small_inverse(not_spd, symmetric_positive=True)


def test_hadamard_ratio():
    assert hadamard_ratio(np.diag([2.0, 3.0])) == 1.0
    assert hadamard_ratio([[1, 1], [0, 0]]) == 0.0
    assert hadamard_ratio(np.zeros((2, 2))) == 0.0
    theta = math.pi / 6
    assert hadamard_ratio([[1, math.cos(theta)], [0, math.sin(theta)]]) == pytest.approx(0.5)


def test_leading_minors():
    np.testing.assert_allclose(leading_minors([[2, 1, 0], [1, 2, 1], [0, 1, 2]]), [2, 3, 4])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetric_eigenvalues(n, rng):
    for _ in range(20):
        m = rng.uniform(-1, 1, size=(n, n))
        m = m + m.T
        np.testing.assert_allclose(symmetric_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-12)
    np.testing.assert_array_equal(symmetric_eigenvalues(np.diag([3.0, 1.0, 2.0][:n])), np.sort([3.0, 1.0, 2.0][:n]))


def test_condition_number(rng):
    for n in (2, 3):
        m = rng.uniform(-1, 1, size=(n, n))
        assert condition_number(m) == pytest.approx(np.linalg.cond(m), rel=1e-6)
    assert condition_number(np.eye(3)) == 1.0
    assert condition_number([[1, 1], [1, 1]]) == math.inf


def test_max_relative_deviation():
    assert max_relative_deviation([1, 2], [1, 2]) == 0.0
    assert max_relative_deviation([1, 2.2], [1, 2]) == pytest.approx(0.1)
    assert max_relative_deviation([1e-3, 0], [0, 0]) == 1e-3
    assert max_relative_deviation([], []) == 0.0


def test_orthonormal_columns(rng):
    m = rng.uniform(-1, 1, size=(3, 3))
    q = orthonormal_columns(m)
    np.testing.assert_allclose(q.T @ q, np.eye(3), atol=1e-14)
    # the first column keeps its direction
    np.testing.assert_allclose(q[:, 0], m[:, 0] / np.linalg.norm(m[:, 0]), atol=1e-14)
    assert m.dtype == np.float64 and not np.shares_memory(m, q)


def test_orthonormal_columns_rejects_dependent_columns():
    with pytest.raises(SingularBasis):
        orthonormal_columns(np.array([[1.0, 2.0], [0.0, 0.0]]))
