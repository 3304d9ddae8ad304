"""
Reciprocal (mutually dual) bases, the Q = I case: a_i . a*_j = δ_ij and A* = (A^-1)^T.

In closed form, from the primal lengths and angles:
  2D  |a*_i| = 1 / (|a_i| sin α12),  cos γ_ii = sin α12,  β12 = pi - α12
  3D  |a*_i| = sin α_jk / (|a_i| sqrt(Δ)),  cos γ_ii = sqrt(Δ) / sin α_jk,
      cos β_ij = (cos α_ik cos α_jk - cos α_ij) / (sin α_ik sin α_jk)
where (j, k) are the two indices other than i.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Dict, Tuple, Union

import numpy as np

from dualbasis.core.exceptions import DegenerateAlpha, DimensionMismatch, SingularBasis
from dualbasis.core.types import (
    CLAMP_TOLERANCE,
    PAIRS,
    ArrayLike,
    BasisGeometry,
    BasisMatrix,
    clamp_cosine,
    pair_label,
    validate_geometry,
)
from dualbasis.metric.volume import delta_omega
from dualbasis.utils.linalg import small_inverse
from dualbasis.utils.logging import get_logger

logger = get_logger(__name__)

# sin of an angle at or below this value cannot be divided by
DEGENERATE_SINE_TOLERANCE = 1e-12

# dual vector i is perpendicular to the two primal vectors j, k: its length involves the angle between them
OPPOSITE_PAIR: Dict[int, Tuple[int, int]] = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
# dual angle (i, j) -> the two primal angles that meet the third vector k
ADJACENT_PAIRS: Dict[Tuple[int, int], Tuple[Tuple[int, int], Tuple[int, int]]] = {
    (0, 1): ((0, 2), (1, 2)),
    (0, 2): ((0, 1), (1, 2)),
    (1, 2): ((0, 1), (0, 2)),
}


@dataclasses.dataclass(frozen=True, eq=False)
class ReciprocalPair:
    """A primal geometry, its reciprocal geometry, and cos γ_ii (the angle between a_i and a*_i)"""

    primal: BasisGeometry
    dual: BasisGeometry
    gamma_diag: np.ndarray
    beta_cosines: np.ndarray  # cos β in PAIRS order, before arccos

    def __post_init__(self):
        for name in ("gamma_diag", "beta_cosines"):
            array = np.array(getattr(self, name), dtype=np.float64)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        assert self.primal.n == self.dual.n == len(self.gamma_diag), "dimensions of the pair disagree"
        assert np.all(self.gamma_diag > 0), f"cos(gamma_ii) must be positive, got {self.gamma_diag.tolist()}"

    @property
    def n(self) -> int:
        return self.primal.n

    def normalization(self) -> np.ndarray:
        """|a_i| |a*_i| cos γ_ii, identically 1 for reciprocal bases"""
        return self.primal.lengths * self.dual.lengths * self.gamma_diag


def reciprocal_basis(A: Union[BasisMatrix, ArrayLike]) -> BasisMatrix:
    """A* = (A^-1)^T, so that A^T A* = I"""
    A = A if isinstance(A, BasisMatrix) else BasisMatrix(A)
    return BasisMatrix(small_inverse(A.entries, error=SingularBasis, what="basis matrix").T)


def _sine(angle: float, label: str, tolerance: float) -> float:
    value = math.sin(angle)
    if value <= tolerance:
        raise DegenerateAlpha(f"sin(alpha{label}) = {value:.3e} is too small")
    return value


def reciprocal_geometry_2d(
    g: BasisGeometry, degenerate_tolerance: float = DEGENERATE_SINE_TOLERANCE
) -> ReciprocalPair:
    validate_geometry(g)
    if g.n != 2:
        raise DimensionMismatch(f"reciprocal_geometry_2d needs a 2D geometry, got {g.n}D")
    alpha = float(g.angles[0])
    sine = _sine(alpha, "12", degenerate_tolerance)
    dual = BasisGeometry(lengths=1 / (g.lengths * sine), angles=[math.pi - alpha])
    return ReciprocalPair(primal=g, dual=dual, gamma_diag=[sine, sine], beta_cosines=[-math.cos(alpha)])


def reciprocal_geometry_3d(
    g: BasisGeometry,
    degenerate_tolerance: float = DEGENERATE_SINE_TOLERANCE,
    tolerance: float = CLAMP_TOLERANCE,
) -> ReciprocalPair:
    validate_geometry(g)
    if g.n != 3:
        raise DimensionMismatch(f"reciprocal_geometry_3d needs a 3D geometry, got {g.n}D")
    root_delta = math.sqrt(delta_omega(g).delta)
    sines = {pair: _sine(g.angle(*pair), pair_label(*pair), degenerate_tolerance) for pair in PAIRS[3]}
    cosines = {pair: math.cos(g.angle(*pair)) for pair in PAIRS[3]}

    lengths = [sines[OPPOSITE_PAIR[i]] / (g.lengths[i] * root_delta) for i in range(3)]
    gamma_diag = [root_delta / sines[OPPOSITE_PAIR[i]] for i in range(3)]
    beta_cosines = []
    for pair in PAIRS[3]:
        first, second = ADJACENT_PAIRS[pair]
        value = (cosines[first] * cosines[second] - cosines[pair]) / (sines[first] * sines[second])
        beta_cosines.append(clamp_cosine(value, tolerance, what=f"cos(beta{pair_label(*pair)})"))

    dual = BasisGeometry(lengths=lengths, angles=np.arccos(beta_cosines))
    return ReciprocalPair(primal=g, dual=dual, gamma_diag=gamma_diag, beta_cosines=beta_cosines)


def reciprocal_geometry(
    g: BasisGeometry, degenerate_tolerance: float = DEGENERATE_SINE_TOLERANCE
) -> ReciprocalPair:
    if g.n == 2:
        return reciprocal_geometry_2d(g, degenerate_tolerance)
    if g.n == 3:
        return reciprocal_geometry_3d(g, degenerate_tolerance)
    raise DimensionMismatch(f"Reciprocal geometry is defined for 2D and 3D, got {g.n}D")
