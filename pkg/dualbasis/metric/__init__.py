from dualbasis.metric.ops import (
    QuadraticForms,
    Route,
    TransformContext,
    build_metric,
    cholesky_factor,
    dual_basis_from_mixed,
    dual_metric,
    gram_from_basis,
    mixed_from_bases,
    orthonormal_coordinates,
    primal_basis_from_mixed,
    primal_metric,
    quadratic_norm,
    transform_all_routes,
    transform_coords,
)
from dualbasis.metric.volume import DeltaOmega, cell_volume, delta_omega
