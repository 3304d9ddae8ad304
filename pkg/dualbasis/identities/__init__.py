from dualbasis.identities.inverse import swap_inverse
from dualbasis.identities.orthonormal import orthonormal_beta, orthonormal_product_residual_2d, orthonormal_residual
from dualbasis.identities.planar import AlphaSolution, Branch, beta12_2d, residual_2d, solve_alpha_2d
from dualbasis.identities.problem import AngleProblem, beta_angle
from dualbasis.identities.spatial import all_residuals_3d, beta_3d, residual_3d
