import numpy as np
import torch
import torch.nn.functional as F

from dualbasis.core.exceptions import SingularBasis


@torch.jit.script
def orthogonalize_(basis, eps: float = 1e-12) -> float:
    """
    Orthonormalize the columns of a square float64 tensor in-place (modified Gram-Schmidt, left to right).
    Returns the smallest column norm seen just before normalization; a value near zero means the columns
    were linearly dependent and the result is not a basis.
    """
    n, m = basis.shape
    smallest = float("inf")
    for i in range(m):
        column = basis[:, i]
        smallest = min(smallest, float(column.norm()))
        F.normalize(column, dim=0, eps=eps, out=column)
        if i + 1 < m:
            remaining = basis[:, i + 1 :]
            remaining.addmm_(column[:, None], (column @ remaining)[None, :], alpha=-1)
    return smallest


def orthonormal_columns(matrix: np.ndarray, passes: int = 2, eps: float = 1e-12) -> np.ndarray:
    """
    Return a copy of ``matrix`` whose columns are orthonormalized in float64.

    :param passes: number of Gram-Schmidt sweeps; a second sweep brings the columns
      back to orthogonality at machine precision for moderately conditioned inputs
    :raises SingularBasis: if a column collapses during the first sweep
    """
    tensor = torch.tensor(np.asarray(matrix, dtype=np.float64), dtype=torch.float64)
    assert tensor.dim() == 2 and tensor.shape[0] == tensor.shape[1], f"expected a square basis, got {tuple(tensor.shape)}"
    smallest = orthogonalize_(tensor, eps)
    if smallest <= eps:
        raise SingularBasis(f"Column norm {smallest:.3e} during Gram-Schmidt; the columns are linearly dependent")
    for _ in range(passes - 1):
        orthogonalize_(tensor, eps)
    return tensor.numpy()
