from dualbasis.reciprocal.reciprocal import (
    ReciprocalPair,
    reciprocal_basis,
    reciprocal_geometry,
    reciprocal_geometry_2d,
    reciprocal_geometry_3d,
)
