"""
Fixed-size linear algebra for the 2x2 / 3x3 matrices this package works with.

Determinants and inverses at n <= 3 use explicit cofactor formulas, larger symmetric positive definite
matrices go through a Cholesky solve and anything else through an LU solve.
"""

import math
from typing import Type

import numpy as np
import scipy.linalg

from dualbasis.core.exceptions import NotPositiveDefinite, SingularMatrix

# |det M| / prod(column norms) below this value counts as singular
SINGULAR_TOLERANCE = 1e-12


def small_det(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    assert m.shape == (n, n), f"expected a square matrix, got shape {m.shape}"
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if n == 3:
        return float(
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
    return float(np.linalg.det(m))


def small_adjugate(matrix: np.ndarray) -> np.ndarray:
    """Transposed cofactor matrix, so that M @ adj(M) = det(M) * I"""
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
    assert n == 3, "adjugate formulas are only provided up to 3x3"
    # rows of adj(M) are cross products of the columns of M
    c0, c1, c2 = m[:, 0], m[:, 1], m[:, 2]
    return np.stack([np.cross(c1, c2), np.cross(c2, c0), np.cross(c0, c1)])


def hadamard_ratio(matrix: np.ndarray) -> float:
    """|det M| divided by the product of column norms: 1 for orthogonal columns, 0 for dependent ones"""
    m = np.asarray(matrix, dtype=np.float64)
    norms = np.prod(np.linalg.norm(m, axis=0))
    if norms == 0:
        return 0.0
    return abs(small_det(m)) / norms


def check_invertible(
    matrix: np.ndarray,
    error: Type[SingularMatrix] = SingularMatrix,
    what: str = "matrix",
    tolerance: float = SINGULAR_TOLERANCE,
) -> None:
    m = np.asarray(matrix, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise error(f"{what} has non-finite entries")
    ratio = hadamard_ratio(m)
    if ratio <= tolerance:
        raise error(f"{what} is singular: |det| / prod(column norms) = {ratio:.3e} <= {tolerance:.1e}")


def small_inverse(
    matrix: np.ndarray,
    error: Type[SingularMatrix] = SingularMatrix,
    what: str = "matrix",
    tolerance: float = SINGULAR_TOLERANCE,
    symmetric_positive: bool = False,
) -> np.ndarray:
    """
    Invert a square matrix.

    :param error: exception type raised when the matrix is (numerically) singular
    :param what: name used in the error message
    :param symmetric_positive: for n > 3, solve with a Cholesky factorization instead of LU
    """
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    check_invertible(m, error, what, tolerance)
    if n <= 3:
        return small_adjugate(m) / small_det(m)
    if symmetric_positive:
        try:
            factor = scipy.linalg.cho_factor(m, lower=True)
        except np.linalg.LinAlgError as e:
            raise NotPositiveDefinite(f"{what} is not positive definite: {e}") from e
        return scipy.linalg.cho_solve(factor, np.eye(n))
    return np.linalg.solve(m, np.eye(n))


def solve(matrix: np.ndarray, rhs: np.ndarray, **kwargs) -> np.ndarray:
    return small_inverse(matrix, **kwargs) @ np.asarray(rhs, dtype=np.float64)


def leading_minors(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.float64)
    return np.array([small_det(m[:k, :k]) for k in range(1, m.shape[0] + 1)])


def symmetric_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a real symmetric 1x1, 2x2 or 3x3 matrix in ascending order, in closed form"""
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0]])
    if n == 2:
        half_trace = 0.5 * (m[0, 0] + m[1, 1])
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        spread = math.sqrt(max(half_trace**2 - det, 0.0))
        largest = half_trace + spread
        # det / largest avoids cancellation for the small eigenvalue
        smallest = det / largest if largest > 0 else half_trace - spread
        return np.array([smallest, largest])
    assert n == 3, "closed-form eigenvalues are only provided up to 3x3"

    off_diagonal = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    if off_diagonal == 0:
        return np.sort(np.diag(m))
    q = np.trace(m) / 3
    p = math.sqrt(((m[0, 0] - q) ** 2 + (m[1, 1] - q) ** 2 + (m[2, 2] - q) ** 2 + 2 * off_diagonal) / 6)
    r = min(max(small_det((m - q * np.eye(3)) / p) / 2, -1.0), 1.0)
    phi = math.acos(r) / 3
    largest = q + 2 * p * math.cos(phi)
    smallest = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    return np.array([smallest, 3 * q - largest - smallest, largest])


def condition_number(matrix: np.ndarray) -> float:
    """2-norm condition number from the singular values, i.e. square roots of the eigenvalues of M^T M"""
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape[0] > 3:
        return float(np.linalg.cond(m))
    eigenvalues = symmetric_eigenvalues(m.T @ m)
    if eigenvalues[0] <= 0:
        return math.inf
    return math.sqrt(eigenvalues[-1] / eigenvalues[0])


def max_relative_deviation(actual: np.ndarray, expected: np.ndarray) -> float:
    """max |actual - expected| / max |expected| (plain max-norm difference when expected is zero)"""
    actual, expected = np.asarray(actual, dtype=np.float64), np.asarray(expected, dtype=np.float64)
    scale = np.max(np.abs(expected)) if expected.size else 0.0
    difference = np.max(np.abs(actual - expected)) if expected.size else 0.0
    return float(difference / scale) if scale > 0 else float(difference)
