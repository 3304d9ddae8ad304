import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dualbasis.core.exceptions import (
    AngleOutOfRange,
    CosineOutOfRange,
    DimensionMismatch,
    NonPositiveLength,
    NotPositiveDefinite,
    NotRealizable,
    NotSymmetric,
    SingularBasis,
)
from dualbasis.core.types import (
    BasisGeometry,
    BasisMatrix,
    CoordinateVector,
    Frame,
    GammaMatrix,
    MetricMatrix,
    MixedMatrix,
    clamp_cosine,
    gammas_from_mixed,
    geometry_from_metric,
    pair_label,
    parse_pair_label,
    validate_geometry,
)
from dualbasis.metric import build_metric, delta_omega
from dualbasis.utils.linalg import max_relative_deviation

# pytest tests/test_core_types.py -rP


def test_pair_labels():
    assert pair_label(0, 1) == "12"
    assert pair_label(2, 0) == "13"
    assert parse_pair_label("23") == (1, 2)
    assert parse_pair_label(13) == (0, 2)

    for bad in ("21", "11", "03", "123", "ab"):
        with pytest.raises(AngleOutOfRange):
            parse_pair_label(bad)


def test_validate_geometry_accepts_realizable_cells():
    square = BasisGeometry(lengths=[1, 1], angles=[math.pi / 2])
    assert validate_geometry(square) is square

    rhombohedral = BasisGeometry.from_angle_map([1, 1, 1], {"12": math.pi / 3, "13": math.pi / 3, "23": math.pi / 3})
    validate_geometry(rhombohedral)
    assert delta_omega(rhombohedral).delta == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize(
    "lengths, angles, error",
    [
        ([1, -1], [math.pi / 2], NonPositiveLength),
        ([0, 1], [math.pi / 2], NonPositiveLength),
        ([1, 1], [0.0], AngleOutOfRange),
        ([1, 1], [math.pi], AngleOutOfRange),
        ([1, 1, 1], [math.pi / 6, math.pi / 2, math.pi / 6], NotRealizable),
        ([1, 1, 1], [math.pi / 2], DimensionMismatch),
        ([1, 1, 1, 1], [1.0] * 6, DimensionMismatch),
    ],
)
def test_validate_geometry_rejects(lengths, angles, error):
    with pytest.raises(error):
        validate_geometry(BasisGeometry(lengths=lengths, angles=angles))


def test_not_realizable_carries_determinant():
    with pytest.raises(NotRealizable) as info:
        validate_geometry(BasisGeometry(lengths=[1, 1, 1], angles=[math.pi / 6, math.pi / 2, math.pi / 6]))
    assert info.value.determinant == pytest.approx(-0.5, abs=1e-12)
    assert info.value.code == "NotRealizable"


def test_from_angle_map_needs_matching_labels():
    with pytest.raises(DimensionMismatch):
        BasisGeometry.from_angle_map([1, 1], {"13": 1.0})
    with pytest.raises(DimensionMismatch):
        BasisGeometry.from_angle_map([1, 1, 1], {"12": 1.0, "13": 1.0})

    g = BasisGeometry.from_angle_map([1, 2, 3], {"23": 1.3, "12": 1.1, "13": 1.2})
    assert g.angles.tolist() == [1.1, 1.2, 1.3]
    assert g.angle(2, 1) == 1.3
    assert g.angle_map == {"12": 1.1, "13": 1.2, "23": 1.3}


def test_geometry_from_metric():
    g = geometry_from_metric(np.eye(3))
    np.testing.assert_array_equal(g.lengths, [1, 1, 1])
    np.testing.assert_allclose(g.angles, [math.pi / 2] * 3, rtol=0, atol=1e-15)

    g = geometry_from_metric([[4, 3], [3, 9]])
    np.testing.assert_array_equal(g.lengths, [2, 3])
    assert g.angles[0] == pytest.approx(math.pi / 3, abs=1e-15)

    with pytest.raises(CosineOutOfRange):
        geometry_from_metric([[1, 1.01], [1.01, 1]])
    with pytest.raises(NotSymmetric):
        geometry_from_metric([[1, 0.2], [0.3, 1]])
    with pytest.raises(DimensionMismatch):
        geometry_from_metric(np.eye(4))


def test_gammas_from_mixed():
    np.testing.assert_array_equal(gammas_from_mixed(np.eye(2), [1, 1], [1, 1]).cosines, np.eye(2))
    np.testing.assert_array_equal(gammas_from_mixed(np.eye(2), [2, 1], [0.5, 1]).cosines, np.eye(2))

    with pytest.raises(DimensionMismatch):
        gammas_from_mixed(np.eye(3), [1, 1], [1, 1])
    with pytest.raises(NonPositiveLength):
        gammas_from_mixed(np.eye(2), [1, 0], [1, 1])
    with pytest.raises(CosineOutOfRange):
        gammas_from_mixed([[2, 0], [0, 1]], [1, 1], [1, 1])


def test_gammas_match_normalized_dot_products(rng):
    A, Astar = rng.uniform(-1, 1, size=(3, 3)), rng.uniform(-1, 1, size=(3, 3))
    gamma = gammas_from_mixed(A.T @ Astar, np.linalg.norm(A, axis=0), np.linalg.norm(Astar, axis=0))
    for i in range(3):
        for j in range(3):
            expected = A[:, i] @ Astar[:, j] / (np.linalg.norm(A[:, i]) * np.linalg.norm(Astar[:, j]))
            assert gamma.cosines[i, j] == pytest.approx(expected, abs=1e-12)


def test_clamp_cosine():
    assert clamp_cosine(1 + 1e-12) == 1.0
    assert clamp_cosine(-1 - 1e-12) == -1.0
    assert clamp_cosine(0.25) == 0.25
    np.testing.assert_array_equal(clamp_cosine(np.array([0.5, 1 + 1e-10])), [0.5, 1.0])

    with pytest.raises(CosineOutOfRange) as info:
        clamp_cosine(1 + 1e-6)
    assert info.value.value == 1 + 1e-6
    with pytest.raises(CosineOutOfRange):
        clamp_cosine(float("nan"))


def test_matrix_checks():
    with pytest.raises(DimensionMismatch):
        MetricMatrix(np.ones((2, 3)))
    with pytest.raises(NotSymmetric):
        MetricMatrix([[1, 0.5], [0.4, 1]]).check()
    with pytest.raises(NotPositiveDefinite):
        MetricMatrix([[1, 2], [2, 1]]).check()
    with pytest.raises(NotPositiveDefinite):
        MetricMatrix([[0, 0], [0, 1]]).check()
    with pytest.raises(SingularBasis):
        BasisMatrix([[1, 2], [2, 4]]).check()

    assert MetricMatrix(np.eye(2)).check() == MetricMatrix(np.eye(2))
    assert MixedMatrix(np.eye(2)) != MetricMatrix(np.eye(2))
    assert GammaMatrix([[1, 0.5], [0, 1]]).T == GammaMatrix([[1, 0], [0.5, 1]])

    entries = MetricMatrix(np.eye(2)).entries
    with pytest.raises(ValueError):
        entries[0, 0] = 2.0


def test_frames():
    assert Frame.PRIMAL.opposite is Frame.DUAL
    assert Frame.DUAL.opposite is Frame.PRIMAL
    x = CoordinateVector([1, 2], "dual")
    assert x.frame is Frame.DUAL and x.n == 2


@settings(max_examples=100, deadline=None)
@given(
    lengths=st.lists(st.floats(0.1, 10.0), min_size=2, max_size=2),
    angle=st.floats(0.05, math.pi - 0.05),
)
def test_metric_geometry_round_trip_2d(lengths, angle):
    g = BasisGeometry(lengths=lengths, angles=[angle])
    back = geometry_from_metric(build_metric(g))
    np.testing.assert_allclose(back.lengths, lengths, rtol=1e-14)
    assert back.angles[0] == pytest.approx(angle, abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(
    data=st.data(),
    n=st.sampled_from([2, 3]),
)
def test_geometry_metric_round_trip(data, n):
    A = data.draw(arrays(np.float64, (n, n), elements=st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)))
    assume(abs(np.linalg.det(A)) >= 0.05)
    G = MetricMatrix.symmetrized(A.T @ A)
    back = build_metric(geometry_from_metric(G))
    assert max_relative_deviation(back.entries, G.entries) <= 1e-14
