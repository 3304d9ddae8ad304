"""
3D identities obtained from G* = Q^T G^-1 Q. With g_ic = cos γ_ic and the Δ, Ω of the primal angles:

    2 [g2c g3c Ω1 + g1c g3c Ω2 + g1c g2c Ω3] + g3c² sin²α12 + g2c² sin²α13 + g1c² sin²α23 = Δ

    cos β_kl = [(g2k g3l + g2l g3k) Ω1 + (g1k g3l + g1l g3k) Ω2 + (g1k g2l + g1l g2k) Ω3
                + g3k g3l sin²α12 + g2k g2l sin²α13 + g1k g1l sin²α23] / Δ

The column identity is the k = l case of the β numerator (times Δ, since |a*| cancels).
"""

from __future__ import annotations

import numpy as np

from dualbasis.core.exceptions import DegenerateAlpha, DimensionMismatch
from dualbasis.core.types import CLAMP_TOLERANCE, clamp_cosine
from dualbasis.identities.problem import (
    DEGENERATE_ALPHA_TOLERANCE,
    AngleProblem,
    Pair,
    column_index,
    pair_indices,
)
from dualbasis.metric.volume import DeltaOmega, delta_omega


def _require_3d(n: int) -> None:
    if n != 3:
        raise DimensionMismatch(f"This identity is defined for 3D bases, got {n}D")


def _bilinear(p: AngleProblem, invariants: DeltaOmega, k: int, l: int) -> float:
    g = p.gamma.cosines
    omega1, omega2, omega3 = invariants.omega
    sin2_12, sin2_13, sin2_23 = (float(value) for value in p.alpha_sines_squared)
    return (
        (g[1, k] * g[2, l] + g[1, l] * g[2, k]) * omega1
        + (g[0, k] * g[2, l] + g[0, l] * g[2, k]) * omega2
        + (g[0, k] * g[1, l] + g[0, l] * g[1, k]) * omega3
        + g[2, k] * g[2, l] * sin2_12
        + g[1, k] * g[1, l] * sin2_13
        + g[0, k] * g[0, l] * sin2_23
    )


def residual_3d(p: AngleProblem, column: int) -> float:
    """LHS - Δ of the column identity"""
    _require_3d(p.n)
    c = column_index(3, column)
    invariants = delta_omega(p.alpha)
    return _bilinear(p, invariants, c, c) - invariants.delta


def beta_3d(
    p: AngleProblem,
    pair: Pair,
    degenerate_tolerance: float = DEGENERATE_ALPHA_TOLERANCE,
    tolerance: float = CLAMP_TOLERANCE,
) -> float:
    """cos β for the pair ("12", "13", "23" or the matching 1-based tuple)"""
    _require_3d(p.n)
    k, l = pair_indices(3, pair)
    invariants = delta_omega(p.alpha)
    if invariants.delta <= degenerate_tolerance:
        raise DegenerateAlpha(f"Delta = {invariants.delta:.3e} is too small")
    return clamp_cosine(_bilinear(p, invariants, k, l) / invariants.delta, tolerance, what=f"cos(beta{k + 1}{l + 1})")


def all_residuals_3d(p: AngleProblem) -> np.ndarray:
    return np.array([residual_3d(p, column) for column in (1, 2, 3)])
