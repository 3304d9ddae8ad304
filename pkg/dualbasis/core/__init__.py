from dualbasis.core.exceptions import *
from dualbasis.core.types import (
    CLAMP_TOLERANCE,
    DEFAULT_IDENTITY_TOLERANCE,
    DEGENERATE_DENOMINATOR,
    MAX_REDRAWS,
    MIN_RANDOM_DETERMINANT,
    PAIRS,
    SUPPORTED_DIMENSIONS,
    BasisGeometry,
    BasisMatrix,
    CoordinateVector,
    Frame,
    GammaMatrix,
    MetricMatrix,
    MixedMatrix,
    angle_determinant,
    clamp_cosine,
    gammas_from_mixed,
    geometry_from_metric,
    pair_label,
    parse_pair_label,
    validate_geometry,
)
