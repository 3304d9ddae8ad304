"""
Reproducible random bases for the verification harness.

Every draw comes from its own ``numpy.random.Philox`` stream: the key is the run seed and the 256-bit counter
holds (stream, draw index, attempt) in its three upper words, so a basis depends only on those numbers and not
on which thread or in which order it was produced.
"""

from __future__ import annotations

import math
from enum import IntEnum
from typing import Tuple

import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from dualbasis.core.exceptions import GenerationExhausted
from dualbasis.core.types import MAX_REDRAWS, MIN_RANDOM_DETERMINANT, BasisMatrix
from dualbasis.utils.linalg import condition_number, small_det
from dualbasis.utils.logging import get_logger
from dualbasis.utils.math import orthonormal_columns

logger = get_logger(__name__)

GENERATOR_NAME = "philox4x64"
_WORD = 64
_MASK = (1 << _WORD) - 1


class Stream(IntEnum):
    """Independent random streams of one trial"""

    PRIMAL = 0
    DUAL = 1
    ORTHONORMAL = 2
    DEGENERATE = 3
    VECTOR = 4


class Rejected(Exception):
    """A candidate basis failed the determinant or conditioning guard"""


def philox_generator(seed: int, stream: int, index: int, attempt: int = 0) -> np.random.Generator:
    assert 0 <= seed <= _MASK, f"seed must be an unsigned 64-bit integer, got {seed}"
    counter = ((stream & _MASK) << 3 * _WORD) | ((index & _MASK) << 2 * _WORD) | ((attempt & _MASK) << _WORD)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def _draw_candidate(
    dimension: int,
    seed: int,
    stream: int,
    index: int,
    attempt: int,
    condition_limit: float,
    min_determinant: float,
) -> np.ndarray:
    entries = philox_generator(seed, stream, index, attempt).uniform(-1.0, 1.0, size=(dimension, dimension))
    determinant = small_det(entries)
    if abs(determinant) < min_determinant:
        raise Rejected(f"|det| = {abs(determinant):.3e} < {min_determinant:.1e}")
    condition = condition_number(entries)
    if not condition <= condition_limit:
        raise Rejected(f"condition {condition:.3e} > {condition_limit:.3e}")
    return entries


def random_basis(
    dimension: int,
    seed: int,
    condition_limit: float,
    index: int = 0,
    stream: int = Stream.PRIMAL,
    min_determinant: float = MIN_RANDOM_DETERMINANT,
    max_redraws: int = MAX_REDRAWS,
) -> BasisMatrix:
    """
    Draw a basis with entries uniform in [-1, 1], redrawing until |det| >= ``min_determinant`` and the
    2-norm condition number is at most ``condition_limit``. Deterministic given (seed, stream, index).

    :raises GenerationExhausted: if ``max_redraws`` candidates in a row are rejected
    """
    entries = None
    try:
        for attempt in Retrying(stop=stop_after_attempt(max_redraws), retry=retry_if_exception_type(Rejected)):
            with attempt:
                number = attempt.retry_state.attempt_number - 1
                entries = _draw_candidate(dimension, seed, stream, index, number, condition_limit, min_determinant)
    except RetryError as e:
        raise GenerationExhausted(
            f"No acceptable {dimension}x{dimension} basis after {max_redraws} draws "
            f"(seed={seed}, stream={int(stream)}, index={index}): {e.last_attempt.exception()}"
        ) from e
    return BasisMatrix(entries)


def random_orthonormal_basis(dimension: int, seed: int, index: int = 0, **kwargs) -> BasisMatrix:
    """Gram-Schmidt of a random basis, a random rotation or reflection of the frame"""
    kwargs.setdefault("condition_limit", 1e3)
    basis = random_basis(dimension, seed, index=index, stream=Stream.ORTHONORMAL, **kwargs)
    return BasisMatrix(orthonormal_columns(basis.entries))


def random_degenerate_pair_2d(seed: int, index: int = 0) -> Tuple[BasisMatrix, BasisMatrix]:
    """
    An orthonormal 2D primal basis R and a dual basis with a*_1 = s1 R (cos t, sin t), a*_2 = ±s2 R (sin t, cos t).
    Then cos γ11 cos γ21 = cos γ12 cos γ22, so the closed-form α12 solver has a vanishing denominator.
    """
    rotation = random_orthonormal_basis(2, seed, index)
    rng = philox_generator(seed, Stream.DEGENERATE, index)
    # keep t away from pi/4 where the two dual vectors become parallel
    t = rng.uniform(0.05, math.pi / 4 - 0.15)
    s1, s2 = rng.uniform(0.5, 2.0, size=2)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    directions = np.array([[math.cos(t), sign * math.sin(t)], [math.sin(t), sign * math.cos(t)]])
    dual = rotation.entries @ (directions * np.array([s1, s2]))
    return rotation, BasisMatrix(dual).check()
