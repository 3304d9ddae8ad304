"""
Domain types for two sets of basis vectors and the conversions between matrix and length/angle form.

Indices are 0-based in code. Pairwise angles are stored in the order of :data:`PAIRS`, i.e. (1,2) in 2D
and (1,2), (1,3), (2,3) in 3D using the 1-based labels "12", "13", "23" of the usual crystallographic notation.
All angles are radians in [0, pi].
"""

from __future__ import annotations

import dataclasses
import math
from enum import Enum
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from dualbasis.core.exceptions import (
    AngleOutOfRange,
    CosineOutOfRange,
    DimensionMismatch,
    NonPositiveLength,
    NotPositiveDefinite,
    NotRealizable,
    NotSymmetric,
    SingularBasis,
    SingularMixed,
)
from dualbasis.utils.linalg import SINGULAR_TOLERANCE, check_invertible, leading_minors
from dualbasis.utils.logging import get_logger

logger = get_logger(__name__)

# arccos arguments this far outside [-1, 1] are clipped, anything beyond is an error
CLAMP_TOLERANCE = 1e-9
# relative max-norm tolerance for the matrix identities
DEFAULT_IDENTITY_TOLERANCE = 1e-9
# |denominator| of the closed-form 2D α solver at or below this value switches to the sign-candidate branch
DEGENERATE_DENOMINATOR = 1e-7
# random verification bases: lower bound on |det| and the number of redraws before giving up
MIN_RANDOM_DETERMINANT = 1e-3
MAX_REDRAWS = 10**4

SUPPORTED_DIMENSIONS = (2, 3)
PAIRS: Dict[int, Tuple[Tuple[int, int], ...]] = {2: ((0, 1),), 3: ((0, 1), (0, 2), (1, 2))}

ArrayLike = Union[np.ndarray, Sequence[float], Sequence[Sequence[float]]]


def pair_label(i: int, j: int) -> str:
    """(0, 1) -> "12" """
    i, j = min(i, j), max(i, j)
    return f"{i + 1}{j + 1}"


def parse_pair_label(label: Union[str, int]) -> Tuple[int, int]:
    """ "23" -> (1, 2) """
    text = str(label)
    if len(text) != 2 or not text.isdigit() or text[0] >= text[1] or text[0] == "0":
        raise AngleOutOfRange(f"Invalid angle index {label!r}, expected one of 12, 13, 23")
    return int(text[0]) - 1, int(text[1]) - 1


def pair_position(n: int, i: int, j: int) -> int:
    return PAIRS[n].index((min(i, j), max(i, j)))


def clamp_cosine(value, tolerance: float = CLAMP_TOLERANCE, what: str = "cosine"):
    """
    Clip ``value`` (a float or an array) into [-1, 1] if it lies at most ``tolerance`` outside of it.

    :raises CosineOutOfRange: if any entry is further outside or not finite
    """
    array = np.asarray(value, dtype=np.float64)
    excess = np.abs(array) - 1
    if not np.all(np.isfinite(array)) or np.any(excess > tolerance):
        worst = float(array.flat[int(np.nanargmax(np.where(np.isfinite(excess), excess, np.inf)))])
        raise CosineOutOfRange(f"{what} = {worst!r} is outside [-1, 1] beyond tolerance {tolerance:.1e}", worst)
    if np.any(excess > 0):
        logger.debug(f"Clamping {what}: max excess {float(np.max(excess)):.3e}")
        array = np.clip(array, -1.0, 1.0)
    return float(array) if array.ndim == 0 else array


def angle_determinant(alpha12: float, alpha13: float, alpha23: float) -> float:
    """
    Δ from the angles themselves: 4 sin(s) sin(s - α12) sin(s - α13) sin(s - α23) with s the half angle sum.

    Same value as the cosine form 1 - Σcos² + 2 cos12 cos13 cos23, without its cancellation, so nearly flat cells
    (Δ down to ~1e-12) keep their relative accuracy.
    """
    s = (alpha12 + alpha13 + alpha23) / 2
    return 4 * math.sin(s) * math.sin(s - alpha12) * math.sin(s - alpha13) * math.sin(s - alpha23)


def _readonly(array: ArrayLike, ndim: int) -> np.ndarray:
    result = np.array(array, dtype=np.float64)
    assert result.ndim == ndim, f"expected a {ndim}d array, got shape {result.shape}"
    result.setflags(write=False)
    return result


class Frame(Enum):
    """The basis a coordinate vector refers to"""

    ORTHONORMAL = "orthonormal"
    PRIMAL = "primal"
    DUAL = "dual"

    @property
    def opposite(self) -> Frame:
        assert self is not Frame.ORTHONORMAL, "the orthonormal frame has no counterpart"
        return Frame.DUAL if self is Frame.PRIMAL else Frame.PRIMAL


@dataclasses.dataclass(frozen=True, eq=False)
class BasisGeometry:
    """Lengths of one set of basis vectors and the angles between them (primal α data or dual β data)"""

    lengths: np.ndarray
    angles: np.ndarray  # radians, ordered as PAIRS[n]

    def __post_init__(self):
        object.__setattr__(self, "lengths", _readonly(self.lengths, 1))
        object.__setattr__(self, "angles", _readonly(self.angles, 1))

    @classmethod
    def from_angle_map(cls, lengths: Sequence[float], angles: Mapping[Union[str, int], float]) -> BasisGeometry:
        """Build from ``{"12": ..., "13": ..., "23": ...}`` (radians); the labels must match the dimension"""
        n = len(lengths)
        if n not in SUPPORTED_DIMENSIONS:
            raise DimensionMismatch(f"Expected 2 or 3 lengths, got {n}")
        parsed = {parse_pair_label(label): value for label, value in angles.items()}
        if set(parsed) != set(PAIRS[n]):
            expected = ", ".join(pair_label(i, j) for i, j in PAIRS[n])
            got = ", ".join(sorted(pair_label(i, j) for i, j in parsed))
            raise DimensionMismatch(f"A {n}D geometry needs angles {expected}, got {got or 'none'}")
        return cls(lengths=lengths, angles=[parsed[pair] for pair in PAIRS[n]])

    @property
    def n(self) -> int:
        return len(self.lengths)

    def angle(self, i: int, j: int) -> float:
        return float(self.angles[pair_position(self.n, i, j)])

    @property
    def angle_map(self) -> Dict[str, float]:
        return {pair_label(i, j): float(value) for (i, j), value in zip(PAIRS[self.n], self.angles)}

    @property
    def cosine_matrix(self) -> np.ndarray:
        """Unit-length metric: ones on the diagonal, cos(angle) off the diagonal"""
        result = np.eye(self.n)
        for (i, j), value in zip(PAIRS[self.n], self.angles):
            result[i, j] = result[j, i] = math.cos(value)
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasisGeometry):
            return NotImplemented
        return np.array_equal(self.lengths, other.lengths) and np.array_equal(self.angles, other.angles)

    def __repr__(self) -> str:
        angles = ", ".join(f"{label}={value:.6g}" for label, value in self.angle_map.items())
        return f"{self.__class__.__name__}(lengths={self.lengths.tolist()}, angles=({angles}))"


@dataclasses.dataclass(frozen=True, eq=False)
class _SquareMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = _readonly(self.entries, 2)
        if entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"{self.__class__.__name__} must be square, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.entries.tolist()})"


class BasisMatrix(_SquareMatrix):
    """Columns are the coordinates of the basis vectors on the orthonormal frame (A or A*)"""

    def check(self, tolerance: float = SINGULAR_TOLERANCE) -> BasisMatrix:
        check_invertible(self.entries, SingularBasis, "basis matrix", tolerance)
        return self

    @property
    def columns(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.entries[:, j] for j in range(self.n))


class MetricMatrix(_SquareMatrix):
    """Symmetric positive definite Gram matrix of one basis set (G or G*)"""

    def check(self) -> MetricMatrix:
        self.check_structure()
        minors = leading_minors(self.entries)
        if np.any(minors <= 0):
            k = int(np.argmax(minors <= 0)) + 1
            raise NotPositiveDefinite(f"Leading principal minor of order {k} is {minors[k - 1]:.6g} <= 0")
        return self

    def check_structure(self) -> MetricMatrix:
        """Symmetry and a positive diagonal, the part of the invariants that does not need determinants"""
        if not np.array_equal(self.entries, self.entries.T):
            raise NotSymmetric("Metric matrix is not symmetric")
        if np.any(np.diag(self.entries) <= 0):
            raise NotPositiveDefinite(f"Metric matrix diagonal must be positive, got {np.diag(self.entries).tolist()}")
        return self

    @classmethod
    def symmetrized(cls, entries: ArrayLike) -> MetricMatrix:
        """Store (M + M^T) / 2 so that products like A^T A are symmetric bit for bit"""
        m = np.asarray(entries, dtype=np.float64)
        return cls(0.5 * (m + m.T))


class MixedMatrix(_SquareMatrix):
    """Q_ij = a_i . a*_j"""

    def check(self, tolerance: float = SINGULAR_TOLERANCE) -> MixedMatrix:
        check_invertible(self.entries, SingularMixed, "mixed matrix", tolerance)
        return self


class GammaMatrix(_SquareMatrix):
    """cos(γ_ij), γ_ij being the angle between a_i and a*_j"""

    @property
    def cosines(self) -> np.ndarray:
        return self.entries

    def check(self) -> GammaMatrix:
        clamp_cosine(self.entries, tolerance=0.0, what="gamma cosine")
        return self

    @property
    def T(self) -> GammaMatrix:
        return GammaMatrix(self.entries.T)


@dataclasses.dataclass(frozen=True, eq=False)
class CoordinateVector:
    coords: np.ndarray
    frame: Frame = Frame.PRIMAL

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(self.coords, 1))
        object.__setattr__(self, "frame", Frame(self.frame))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoordinateVector):
            return NotImplemented
        return self.frame is other.frame and np.array_equal(self.coords, other.coords)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.coords.tolist()}, frame={self.frame.value})"


def validate_geometry(g: BasisGeometry) -> BasisGeometry:
    """
    Check that ``g`` describes a realizable basis: positive lengths, angles strictly inside (0, pi)
    and linearly independent vectors (|cos α₁₂| < 1 in 2D, Δ > 0 in 3D). Returns ``g`` unchanged.
    """
    if g.n not in SUPPORTED_DIMENSIONS:
        raise DimensionMismatch(f"Geometry dimension must be 2 or 3, got {g.n}")
    if len(g.angles) != len(PAIRS[g.n]):
        raise DimensionMismatch(f"A {g.n}D geometry needs {len(PAIRS[g.n])} angles, got {len(g.angles)}")
    if not np.all(np.isfinite(g.lengths)) or np.any(g.lengths <= 0):
        raise NonPositiveLength(f"Basis vector lengths must be positive and finite, got {g.lengths.tolist()}")
    for (i, j), value in zip(PAIRS[g.n], g.angles):
        if not (0 < value < math.pi):
            raise AngleOutOfRange(f"Angle {pair_label(i, j)} = {value!r} rad is outside (0, pi)")

    if g.n == 2:
        cosine = math.cos(g.angles[0])
        if abs(cosine) >= 1:
            raise NotRealizable(f"|cos(alpha12)| = {abs(cosine)!r} >= 1, the vectors are collinear", 1 - cosine**2)
    else:
        delta = angle_determinant(*(float(value) for value in g.angles))
        if delta <= 0:
            raise NotRealizable(f"Delta = {delta!r} <= 0, the vectors are linearly dependent", delta)
    return g


def geometry_from_metric(G: Union[MetricMatrix, ArrayLike], tolerance: float = CLAMP_TOLERANCE) -> BasisGeometry:
    """Lengths sqrt(G_ii) and angles arccos(G_ij / (|a_i| |a_j|)) of the basis a metric describes"""
    G = G if isinstance(G, MetricMatrix) else MetricMatrix(G)
    if G.n not in SUPPORTED_DIMENSIONS:
        raise DimensionMismatch(f"Angle decomposition is only defined for 2D and 3D metrics, got {G.n}x{G.n}")
    G.check_structure()

    lengths = np.sqrt(np.diag(G.entries))
    cosines = [
        clamp_cosine(G.entries[i, j] / (lengths[i] * lengths[j]), tolerance, what=f"cos(angle {pair_label(i, j)})")
        for i, j in PAIRS[G.n]
    ]
    return validate_geometry(BasisGeometry(lengths=lengths, angles=np.arccos(cosines)))


def gammas_from_mixed(
    Q: Union[MixedMatrix, ArrayLike],
    primal_lengths: Iterable[float],
    dual_lengths: Iterable[float],
    tolerance: float = CLAMP_TOLERANCE,
) -> GammaMatrix:
    """cos(γ_ij) = Q_ij / (|a_i| |a*_j|)"""
    q = np.asarray(Q, dtype=np.float64)
    primal_lengths = np.asarray(list(primal_lengths), dtype=np.float64)
    dual_lengths = np.asarray(list(dual_lengths), dtype=np.float64)
    if q.shape != (len(primal_lengths), len(dual_lengths)):
        raise DimensionMismatch(
            f"Mixed matrix of shape {q.shape} does not match {len(primal_lengths)} primal "
            f"and {len(dual_lengths)} dual lengths"
        )
    for name, lengths in (("primal", primal_lengths), ("dual", dual_lengths)):
        if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
            raise NonPositiveLength(f"{name} lengths must be positive and finite, got {lengths.tolist()}")
    return GammaMatrix(clamp_cosine(q / np.outer(primal_lengths, dual_lengths), tolerance, what="gamma cosine"))
