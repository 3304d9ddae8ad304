"""
Metric (Gram) and mixed matrices of two basis sets A and A*, and the identities connecting them:

    G = A^T A,   G* = A*^T A*,   Q = A^T A*
    G* = Q^T G^-1 Q,   G = Q G*^-1 Q^T
    x* = A*^-1 A x = Q^-1 G x = G*^-1 Q^T x
"""

from __future__ import annotations

import dataclasses
import math
from enum import Enum
from typing import Dict, NamedTuple, Optional, Union

import numpy as np
import scipy.linalg

from dualbasis.core.exceptions import DimensionMismatch, FrameMismatch, NotPositiveDefinite, SingularBasis, SingularMixed
from dualbasis.core.types import (
    ArrayLike,
    BasisGeometry,
    BasisMatrix,
    CoordinateVector,
    Frame,
    MetricMatrix,
    MixedMatrix,
    PAIRS,
    validate_geometry,
)
from dualbasis.utils.linalg import max_relative_deviation, small_inverse
from dualbasis.utils.logging import get_logger

logger = get_logger(__name__)

# a Cholesky pivot U_ii^2 at or below this fraction of the largest diagonal entry means "not positive definite"
CHOLESKY_PIVOT_TOLERANCE = 1e-14

MetricLike = Union[MetricMatrix, ArrayLike]
MixedLike = Union[MixedMatrix, ArrayLike]
BasisLike = Union[BasisMatrix, ArrayLike]


def _as(cls, value):
    return value if isinstance(value, cls) else cls(value)


def _same_dimension(*matrices) -> int:
    sizes = {m.n for m in matrices}
    if len(sizes) != 1:
        raise DimensionMismatch(f"Matrices have different dimensions: {sorted(sizes)}")
    return sizes.pop()


def build_metric(g: BasisGeometry) -> MetricMatrix:
    """G_ii = |a_i|^2, G_ij = |a_i| |a_j| cos(α_ij)"""
    validate_geometry(g)
    entries = np.diag(g.lengths**2)
    for (i, j), angle in zip(PAIRS[g.n], g.angles):
        entries[i, j] = entries[j, i] = g.lengths[i] * g.lengths[j] * math.cos(angle)
    return MetricMatrix(entries).check()


def gram_from_basis(A: BasisLike) -> MetricMatrix:
    A = _as(BasisMatrix, A).check()
    return MetricMatrix.symmetrized(A.entries.T @ A.entries)


def mixed_from_bases(A: BasisLike, Astar: BasisLike) -> MixedMatrix:
    A, Astar = _as(BasisMatrix, A).check(), _as(BasisMatrix, Astar).check()
    _same_dimension(A, Astar)
    return MixedMatrix(A.entries.T @ Astar.entries)


def cholesky_factor(G: MetricLike, tolerance: float = CHOLESKY_PIVOT_TOLERANCE) -> BasisMatrix:
    """
    Realize a metric as explicit basis vectors: the returned B is upper triangular with a positive diagonal
    and B^T B = G, so its columns are basis vectors (the first one along the first frame axis).
    """
    G = _as(MetricMatrix, G).check_structure()
    try:
        upper = scipy.linalg.cholesky(G.entries, lower=False)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(f"Cholesky factorization failed: {e}") from e

    pivots = np.diag(upper) ** 2
    threshold = tolerance * float(np.max(np.diag(G.entries)))
    if np.any(pivots <= threshold):
        raise NotPositiveDefinite(f"Cholesky pivot {float(np.min(pivots)):.3e} <= {threshold:.3e}")
    return BasisMatrix(upper)


def dual_metric(G: MetricLike, Q: MixedLike) -> MetricMatrix:
    """G* = Q^T G^-1 Q"""
    G, Q = _as(MetricMatrix, G).check(), _as(MixedMatrix, Q).check()
    _same_dimension(G, Q)
    inverse = small_inverse(G.entries, what="metric matrix", symmetric_positive=True)
    return MetricMatrix.symmetrized(Q.entries.T @ inverse @ Q.entries).check()


def primal_metric(Gstar: MetricLike, Q: MixedLike) -> MetricMatrix:
    """G = Q G*^-1 Q^T"""
    Gstar, Q = _as(MetricMatrix, Gstar).check(), _as(MixedMatrix, Q).check()
    _same_dimension(Gstar, Q)
    inverse = small_inverse(Gstar.entries, what="dual metric matrix", symmetric_positive=True)
    return MetricMatrix.symmetrized(Q.entries @ inverse @ Q.entries.T).check()


def dual_basis_from_mixed(A: BasisLike, Q: MixedLike) -> BasisMatrix:
    """A* = (A^-1)^T Q, the dual basis that has mixed matrix Q with A"""
    A, Q = _as(BasisMatrix, A), _as(MixedMatrix, Q)
    _same_dimension(A, Q)
    inverse = small_inverse(A.entries, error=SingularBasis, what="basis matrix")
    return BasisMatrix(inverse.T @ Q.entries).check()


def primal_basis_from_mixed(Astar: BasisLike, Q: MixedLike) -> BasisMatrix:
    """A = (A*^-1)^T Q^T"""
    Astar, Q = _as(BasisMatrix, Astar), _as(MixedMatrix, Q)
    _same_dimension(Astar, Q)
    inverse = small_inverse(Astar.entries, error=SingularBasis, what="dual basis matrix")
    return BasisMatrix(inverse.T @ Q.entries.T).check()


class Route(Enum):
    """Which matrices a coordinate transform between the two bases is computed from"""

    BASES = "bases"  # A, A*
    METRIC = "metric"  # G, Q
    DUAL_METRIC = "dual_metric"  # G*, Q


@dataclasses.dataclass(frozen=True)
class TransformContext:
    """Whatever is known about the two bases; each route needs only part of it"""

    A: Optional[BasisMatrix] = None
    Astar: Optional[BasisMatrix] = None
    G: Optional[MetricMatrix] = None
    Gstar: Optional[MetricMatrix] = None
    Q: Optional[MixedMatrix] = None

    def __post_init__(self):
        for name, cls in (("A", BasisMatrix), ("Astar", BasisMatrix), ("G", MetricMatrix), ("Gstar", MetricMatrix)):
            value = getattr(self, name)
            if value is not None and not isinstance(value, cls):
                object.__setattr__(self, name, cls(value))
        if self.Q is not None and not isinstance(self.Q, MixedMatrix):
            object.__setattr__(self, "Q", MixedMatrix(self.Q))

    @classmethod
    def from_bases(cls, A: BasisLike, Astar: BasisLike) -> TransformContext:
        """Full context derived from an explicit pair of bases"""
        return cls(
            A=_as(BasisMatrix, A),
            Astar=_as(BasisMatrix, Astar),
            G=gram_from_basis(A),
            Gstar=gram_from_basis(Astar),
            Q=mixed_from_bases(A, Astar),
        )

    def available_routes(self):
        routes = []
        if self.A is not None and self.Astar is not None:
            routes.append(Route.BASES)
        if self.G is not None and self.Q is not None:
            routes.append(Route.METRIC)
        if self.Gstar is not None and self.Q is not None:
            routes.append(Route.DUAL_METRIC)
        return routes


def _route_operator(context: TransformContext, route: Route, to_dual: bool) -> np.ndarray:
    if route is Route.BASES:
        source, target = (context.A, context.Astar) if to_dual else (context.Astar, context.A)
        return small_inverse(target.entries, error=SingularBasis, what="target basis") @ source.entries
    Q = context.Q.check().entries
    if route is Route.METRIC:
        G = context.G.entries
        if to_dual:
            return small_inverse(Q, error=SingularMixed, what="mixed matrix") @ G
        return small_inverse(G, what="metric matrix", symmetric_positive=True) @ Q
    Gstar = context.Gstar.entries
    if to_dual:
        return small_inverse(Gstar, what="dual metric matrix", symmetric_positive=True) @ Q.T
    return small_inverse(Q.T, error=SingularMixed, what="transposed mixed matrix") @ Gstar


def transform_coords(
    x: CoordinateVector, context: TransformContext, route: Optional[Route] = None
) -> CoordinateVector:
    """
    Coordinates of the same vector on the other basis. ``route`` defaults to the first one the context supports,
    in the order bases, (G, Q), (G*, Q).

    :raises FrameMismatch: for orthonormal-frame coordinates or a route the context cannot serve
    """
    if x.frame is Frame.ORTHONORMAL:
        raise FrameMismatch("transform_coords converts between the primal and dual bases, got orthonormal coordinates")
    routes = context.available_routes()
    if route is None:
        if not routes:
            raise FrameMismatch("Transform context needs (A, A*), (G, Q) or (G*, Q)")
        route = routes[0]
    elif route not in routes:
        raise FrameMismatch(f"Route {route.value!r} is not available from the given context")

    operator = _route_operator(context, route, to_dual=x.frame is Frame.PRIMAL)
    if operator.shape[1] != x.n:
        raise DimensionMismatch(f"{x.n}-dimensional coordinates with {operator.shape[1]}-dimensional context")
    return CoordinateVector(operator @ x.coords, frame=x.frame.opposite)


def transform_all_routes(x: CoordinateVector, context: TransformContext) -> Dict[Route, CoordinateVector]:
    return {route: transform_coords(x, context, route) for route in context.available_routes()}


def orthonormal_coordinates(x: CoordinateVector, basis: BasisLike) -> CoordinateVector:
    """r = A x (or r = A* x*), the vector on the orthonormal frame"""
    if x.frame is Frame.ORTHONORMAL:
        return x
    return CoordinateVector(np.asarray(basis, dtype=np.float64) @ x.coords, frame=Frame.ORTHONORMAL)


class QuadraticForms(NamedTuple):
    """The four expressions of r . r"""

    primal: float  # x G x
    dual: float  # x* G* x*
    mixed: float  # x Q x*
    mixed_transposed: float  # x* Q^T x

    def max_relative_spread(self) -> float:
        values = np.array(self, dtype=np.float64)
        return max_relative_deviation(values, np.full_like(values, values[0]))


def quadratic_norm(
    x: Union[CoordinateVector, ArrayLike],
    xstar: Union[CoordinateVector, ArrayLike],
    G: MetricLike,
    Gstar: MetricLike,
    Q: MixedLike,
) -> QuadraticForms:
    if isinstance(x, CoordinateVector) and x.frame is not Frame.PRIMAL:
        raise FrameMismatch(f"x must hold primal-basis coordinates, got {x.frame.value}")
    if isinstance(xstar, CoordinateVector) and xstar.frame is not Frame.DUAL:
        raise FrameMismatch(f"xstar must hold dual-basis coordinates, got {xstar.frame.value}")
    x = np.asarray(x.coords if isinstance(x, CoordinateVector) else x, dtype=np.float64)
    xstar = np.asarray(xstar.coords if isinstance(xstar, CoordinateVector) else xstar, dtype=np.float64)
    G, Gstar, Q = np.asarray(G, dtype=np.float64), np.asarray(Gstar, dtype=np.float64), np.asarray(Q, dtype=np.float64)

    n = len(x)
    if len(xstar) != n or any(m.shape != (n, n) for m in (G, Gstar, Q)):
        raise DimensionMismatch(
            f"Coordinates of sizes {len(x)}, {len(xstar)} with matrices {G.shape}, {Gstar.shape}, {Q.shape}"
        )
    return QuadraticForms(
        primal=float(x @ G @ x),
        dual=float(xstar @ Gstar @ xstar),
        mixed=float(x @ Q @ xstar),
        mixed_transposed=float(xstar @ Q.T @ x),
    )
