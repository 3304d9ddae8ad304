"""
2D identities obtained from G* = Q^T G^-1 Q, written in terms of α12 and the four γ_ij:

    cos²γ1c + cos²γ2c - 2 cos α12 cos γ1c cos γ2c = sin²α12          (c = 1, 2)
    cos β12 = [cos γ11 cos γ12 + cos γ21 cos γ22 - cos α12 (cos γ11 cos γ22 + cos γ12 cos γ21)] / sin²α12
"""

from __future__ import annotations

import dataclasses
import math
from enum import Enum
from typing import Optional, Tuple

from dualbasis.core.exceptions import DegenerateAlpha, DimensionMismatch, Unresolvable
from dualbasis.core.types import CLAMP_TOLERANCE, DEGENERATE_DENOMINATOR, GammaMatrix, clamp_cosine
from dualbasis.identities.problem import DEGENERATE_ALPHA_TOLERANCE, AngleProblem, column_index
from dualbasis.utils.logging import get_logger

logger = get_logger(__name__)

# a sign candidate is accepted when both column residuals are within this bound
CANDIDATE_RESIDUAL_TOLERANCE = 1e-8
# candidate residuals closer than this are rounding noise and do not pick a sign
RESIDUAL_NOISE = 1e-14
# the generic branch also reports the sign candidates while |denominator| is within this factor of the threshold
BOUNDARY_FACTOR = 10


def _require_2d(n: int) -> None:
    if n != 2:
        raise DimensionMismatch(f"This identity is defined for 2D bases, got {n}D")


def _column_residual(cos_alpha: float, sin2_alpha: float, g1: float, g2: float) -> float:
    return g1**2 + g2**2 - 2 * cos_alpha * g1 * g2 - sin2_alpha


def residual_2d(p: AngleProblem, column: int) -> float:
    """LHS - RHS of the column identity; zero iff the γ of that column fit a real dual vector"""
    _require_2d(p.n)
    c = column_index(2, column)
    g = p.gamma.cosines
    return _column_residual(float(p.alpha_cosines[0]), float(p.alpha_sines_squared[0]), g[0, c], g[1, c])


def beta12_2d(
    p: AngleProblem, degenerate_tolerance: float = DEGENERATE_ALPHA_TOLERANCE, tolerance: float = CLAMP_TOLERANCE
) -> float:
    """cos β12 from α12 and the γ_ij"""
    _require_2d(p.n)
    cos_alpha, sin2_alpha = float(p.alpha_cosines[0]), float(p.alpha_sines_squared[0])
    if sin2_alpha <= degenerate_tolerance:
        raise DegenerateAlpha(f"sin^2(alpha12) = {sin2_alpha:.3e} is too small")
    g = p.gamma.cosines
    bracket = g[0, 0] * g[0, 1] + g[1, 0] * g[1, 1] - cos_alpha * (g[0, 0] * g[1, 1] + g[0, 1] * g[1, 0])
    return clamp_cosine(bracket / sin2_alpha, tolerance, what="cos(beta12)")


class Branch(Enum):
    GENERIC = "generic"
    DEGENERATE = "degenerate"


@dataclasses.dataclass(frozen=True)
class AlphaSolution:
    """
    Result of :func:`solve_alpha_2d`. Whenever the denominator is small enough for the sign to matter (always on
    the degenerate branch, and on the generic branch within ``BOUNDARY_FACTOR`` of the threshold), ``candidates``
    holds (cos(γ11 + γ21), cos(γ11 - γ21)) and ``residuals`` the (column 1, column 2) residuals of each.
    """

    cos_alpha: float
    branch: Branch
    numerator: float
    denominator: float
    candidates: Tuple[float, ...] = ()
    residuals: Tuple[Tuple[float, float], ...] = ()
    choice: Optional[int] = None  # index into candidates on the degenerate branch
    ambiguous: bool = False  # both signs satisfy both column identities

    @property
    def alpha(self) -> float:
        return math.acos(self.cos_alpha)


def _sum_difference_cosines(c1: float, c2: float) -> Tuple[float, float]:
    """(cos(γ1 + γ2), cos(γ1 - γ2)) for γ = arccos(c) in [0, pi], expanded to avoid arccos round-off"""
    s1, s2 = math.sqrt(max(1 - c1**2, 0.0)), math.sqrt(max(1 - c2**2, 0.0))
    return c1 * c2 - s1 * s2, c1 * c2 + s1 * s2


def _sign_candidates(g) -> Tuple[Tuple[float, float], Tuple[Tuple[float, float], ...]]:
    candidates = _sum_difference_cosines(g[0, 0], g[1, 0])
    residuals = tuple(
        (_column_residual(x, 1 - x**2, g[0, 0], g[1, 0]), _column_residual(x, 1 - x**2, g[0, 1], g[1, 1]))
        for x in candidates
    )
    return candidates, residuals


def solve_alpha_2d(
    gamma: GammaMatrix,
    denominator_tolerance: float = DEGENERATE_DENOMINATOR,
    residual_tolerance: float = CANDIDATE_RESIDUAL_TOLERANCE,
    tolerance: float = CLAMP_TOLERANCE,
) -> AlphaSolution:
    """
    Recover cos α12 from the four γ_ij by subtracting the two column identities.

    When the denominator vanishes the two column identities coincide and only tell that
    cos α12 = cos(γ11 ± γ21). The sign whose candidate has the smaller worst-column residual is chosen.
    Residuals that differ by less than ``RESIDUAL_NOISE`` do not discriminate: the smaller |cos α12| is taken
    and the solution is flagged ``ambiguous`` (both signs then describe a valid pair of bases).

    :raises Unresolvable: if neither sign satisfies both column identities within ``residual_tolerance``
    """
    gamma = gamma if isinstance(gamma, GammaMatrix) else GammaMatrix(gamma)
    _require_2d(gamma.n)
    g = gamma.check().cosines
    numerator = g[0, 0] ** 2 + g[1, 0] ** 2 - g[0, 1] ** 2 - g[1, 1] ** 2
    denominator = 2 * (g[0, 0] * g[1, 0] - g[0, 1] * g[1, 1])

    if abs(denominator) > denominator_tolerance:
        cos_alpha = clamp_cosine(numerator / denominator, tolerance, what="cos(alpha12)")
        if abs(denominator) > BOUNDARY_FACTOR * denominator_tolerance:
            return AlphaSolution(cos_alpha, Branch.GENERIC, numerator, denominator)
        candidates, residuals = _sign_candidates(g)
        logger.debug(f"Denominator {denominator:.3e} is close to the sign-candidate branch, candidates {candidates}")
        return AlphaSolution(cos_alpha, Branch.GENERIC, numerator, denominator, candidates, residuals)

    candidates, residuals = _sign_candidates(g)
    scores = [max(abs(r1), abs(r2)) for r1, r2 in residuals]
    feasible = [index for index, score in enumerate(scores) if score <= residual_tolerance]
    if not feasible:
        raise Unresolvable(
            f"No sign candidate of cos(gamma11 +- gamma21) = {candidates} satisfies both column identities, "
            f"residuals {residuals}"
        )

    ambiguous = len(feasible) == 2
    if ambiguous and abs(scores[0] - scores[1]) <= RESIDUAL_NOISE:
        best = min(feasible, key=lambda index: (abs(candidates[index]), index))
    else:
        best = min(feasible, key=lambda index: (scores[index], index))
    logger.debug(
        f"Denominator {denominator:.3e}: candidates {candidates}, residuals {residuals}, chose {candidates[best]}"
        + (" (both signs fit)" if ambiguous else "")
    )
    return AlphaSolution(
        cos_alpha=clamp_cosine(candidates[best], tolerance, what="cos(alpha12)"),
        branch=Branch.DEGENERATE,
        numerator=numerator,
        denominator=denominator,
        candidates=candidates,
        residuals=residuals,
        choice=best,
        ambiguous=ambiguous,
    )
