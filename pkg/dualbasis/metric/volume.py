from __future__ import annotations

import dataclasses
import math
from typing import Sequence, Tuple, Union

from dualbasis.core.exceptions import AngleOutOfRange, DimensionMismatch
from dualbasis.core.types import BasisGeometry, angle_determinant, validate_geometry


@dataclasses.dataclass(frozen=True)
class DeltaOmega:
    """
    Angle combinations of a 3D basis:
      delta = det of the unit-length metric (the squared volume of the unit-edge parallelepiped)
      omega = (cos12 cos13 - cos23, cos12 cos23 - cos13, cos13 cos23 - cos12), the off-diagonal cofactors
    """

    delta: float
    omega: Tuple[float, float, float]


def delta_omega(angles: Union[BasisGeometry, Sequence[float]]) -> DeltaOmega:
    """:param angles: a 3D geometry or the angles (α12, α13, α23) in radians"""
    values = tuple(float(a) for a in (angles.angles if isinstance(angles, BasisGeometry) else angles))
    if len(values) != 3:
        raise DimensionMismatch(f"Delta and Omega need the three angles of a 3D basis, got {len(values)}")
    for label, value in zip(("12", "13", "23"), values):
        if not (0 < value < math.pi):
            raise AngleOutOfRange(f"Angle {label} = {value!r} rad is outside (0, pi)")

    c12, c13, c23 = (math.cos(value) for value in values)
    return DeltaOmega(
        delta=angle_determinant(*values),
        omega=(c12 * c13 - c23, c12 * c23 - c13, c13 * c23 - c12),
    )


def cell_volume(g: BasisGeometry) -> float:
    """Area (2D) or volume (3D) spanned by the basis: |a1||a2| sin α12, or |a1||a2||a3| sqrt(Δ)"""
    validate_geometry(g)
    if g.n == 2:
        return float(g.lengths[0] * g.lengths[1] * math.sin(g.angles[0]))
    return float(g.lengths[0] * g.lengths[1] * g.lengths[2] * math.sqrt(delta_omega(g).delta))
