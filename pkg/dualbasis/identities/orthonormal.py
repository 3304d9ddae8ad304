"""Direction-cosine identities for an orthonormal primal basis (G = I), in 2D and 3D"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from dualbasis.core.types import GammaMatrix
from dualbasis.identities.problem import Pair, column_index, pair_indices


def _gamma(gamma: Union[GammaMatrix, np.ndarray]) -> GammaMatrix:
    return gamma if isinstance(gamma, GammaMatrix) else GammaMatrix(gamma)


def orthonormal_residual(gamma: Union[GammaMatrix, np.ndarray], column: int) -> float:
    """Σ_i cos²γ_ic - 1: the direction cosines of a*_c on an orthonormal frame have unit square sum"""
    gamma = _gamma(gamma)
    c = column_index(gamma.n, column)
    return float(np.sum(gamma.cosines[:, c] ** 2)) - 1


def orthonormal_beta(gamma: Union[GammaMatrix, np.ndarray], pair: Pair) -> float:
    """cos β_kl = Σ_i cos γ_ik cos γ_il"""
    gamma = _gamma(gamma)
    k, l = pair_indices(gamma.n, pair)
    g = gamma.cosines
    if gamma.n == 2:
        return g[0, k] * g[0, l] + g[1, k] * g[1, l]
    return g[0, k] * g[0, l] + g[1, k] * g[1, l] + g[2, k] * g[2, l]


def orthonormal_product_residual_2d(gamma: Union[GammaMatrix, np.ndarray], column: int) -> float:
    """
    cos(γ1c + γ2c) cos(γ1c - γ2c), which equals cos²γ1c + cos²γ2c - 1 and so vanishes when the primal
    basis is orthonormal (γ1c ± γ2c is an odd multiple of pi/2 for one of the signs).
    """
    gamma = _gamma(gamma)
    assert gamma.n == 2, "the product form is a 2D identity"
    c = column_index(2, column)
    first, second = (math.acos(min(1.0, max(-1.0, float(value)))) for value in gamma.cosines[:, c])
    return math.cos(first + second) * math.cos(first - second)
