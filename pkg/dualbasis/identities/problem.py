from __future__ import annotations

import dataclasses
import math
from typing import Optional, Tuple, Union

import numpy as np

from dualbasis.core.exceptions import DimensionMismatch, NonPositiveLength
from dualbasis.core.types import (
    CLAMP_TOLERANCE,
    PAIRS,
    ArrayLike,
    BasisGeometry,
    GammaMatrix,
    MetricMatrix,
    MixedMatrix,
    clamp_cosine,
    gammas_from_mixed,
    geometry_from_metric,
    parse_pair_label,
    validate_geometry,
)

# sin²(α12) (2D) or Δ (3D) at or below this value cannot be divided by
DEGENERATE_ALPHA_TOLERANCE = 1e-12

Pair = Union[str, Tuple[int, int]]


def _optional_array(value) -> Optional[np.ndarray]:
    if value is None:
        return None
    array = np.array(value, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class AngleProblem:
    """
    Angles relating two basis sets: α between primal vectors, γ between primal and dual vectors,
    and optionally β between dual vectors plus both length sets (needed to swap the roles of the sets).
    """

    alpha: np.ndarray  # radians, ordered as PAIRS[n]
    gamma: GammaMatrix
    beta: Optional[np.ndarray] = None
    primal_lengths: Optional[np.ndarray] = None
    dual_lengths: Optional[np.ndarray] = None

    def __post_init__(self):
        gamma = self.gamma if isinstance(self.gamma, GammaMatrix) else GammaMatrix(self.gamma)
        object.__setattr__(self, "gamma", gamma.check())
        for name in ("alpha", "beta", "primal_lengths", "dual_lengths"):
            object.__setattr__(self, name, _optional_array(getattr(self, name)))

        n = gamma.n
        if n not in PAIRS:
            raise DimensionMismatch(f"Angle identities are defined for 2D and 3D, got {n}x{n} gamma")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if value is not None and len(value) != len(PAIRS[n]):
                raise DimensionMismatch(f"{name} needs {len(PAIRS[n])} angles in {n}D, got {len(value)}")
        for name in ("primal_lengths", "dual_lengths"):
            value = getattr(self, name)
            if value is None:
                continue
            if len(value) != n:
                raise DimensionMismatch(f"{name} needs {n} entries, got {len(value)}")
            if np.any(~np.isfinite(value)) or np.any(value <= 0):
                raise NonPositiveLength(f"{name} must be positive, got {value.tolist()}")

        validate_geometry(BasisGeometry(lengths=np.ones(n), angles=self.alpha))

    @property
    def n(self) -> int:
        return self.gamma.n

    @property
    def alpha_cosines(self) -> np.ndarray:
        return np.cos(self.alpha)

    @property
    def alpha_sines_squared(self) -> np.ndarray:
        return np.sin(self.alpha) ** 2

    @property
    def has_dual_data(self) -> bool:
        return self.beta is not None and self.primal_lengths is not None and self.dual_lengths is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, AngleProblem):
            return NotImplemented

        def same(a, b):
            return (a is None and b is None) or (a is not None and b is not None and np.array_equal(a, b))

        return self.gamma == other.gamma and all(
            same(getattr(self, name), getattr(other, name))
            for name in ("alpha", "beta", "primal_lengths", "dual_lengths")
        )

    @classmethod
    def from_metrics(
        cls,
        G: Union[MetricMatrix, ArrayLike],
        Gstar: Union[MetricMatrix, ArrayLike],
        Q: Union[MixedMatrix, ArrayLike],
        tolerance: float = CLAMP_TOLERANCE,
    ) -> AngleProblem:
        """Extract lengths, α, β and γ from the metric and mixed matrices of a pair of bases"""
        primal, dual = geometry_from_metric(G, tolerance), geometry_from_metric(Gstar, tolerance)
        return cls(
            alpha=primal.angles,
            beta=dual.angles,
            gamma=gammas_from_mixed(Q, primal.lengths, dual.lengths, tolerance),
            primal_lengths=primal.lengths,
            dual_lengths=dual.lengths,
        )

    @classmethod
    def from_bases(cls, A, Astar, tolerance: float = CLAMP_TOLERANCE) -> AngleProblem:
        from dualbasis.metric.ops import gram_from_basis, mixed_from_bases

        return cls.from_metrics(gram_from_basis(A), gram_from_basis(Astar), mixed_from_bases(A, Astar), tolerance)


def column_index(n: int, column: int) -> int:
    """1-based column number of the gamma matrix -> 0-based index"""
    if not (1 <= int(column) <= n):
        raise DimensionMismatch(f"Column must be between 1 and {n}, got {column}")
    return int(column) - 1


def pair_indices(n: int, pair: Pair) -> Tuple[int, int]:
    """ "13" or (1, 3) -> (0, 2)"""
    if isinstance(pair, str):
        i, j = parse_pair_label(pair)
    else:
        i, j = int(pair[0]) - 1, int(pair[1]) - 1
    if (i, j) not in PAIRS[n]:
        raise DimensionMismatch(f"Pair {pair!r} does not exist in {n}D")
    return i, j


def beta_angle(cosine: float, tolerance: float = CLAMP_TOLERANCE) -> float:
    """Angle in [0, pi] for a cosine returned by the β formulas"""
    return float(math.acos(clamp_cosine(cosine, tolerance, what="cos(beta)")))
