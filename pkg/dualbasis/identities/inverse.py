from __future__ import annotations

from dualbasis.core.exceptions import MissingDualData
from dualbasis.identities.problem import AngleProblem


def swap_inverse(p: AngleProblem) -> AngleProblem:
    """
    Exchange the roles of the two basis sets: primal and dual lengths swap, α and β swap and γ is transposed.
    Every identity evaluated on the result is the corresponding identity of G = Q G*^-1 Q^T on ``p``.
    Applying it twice gives back ``p`` exactly.

    :raises MissingDualData: unless ``p`` carries β and both length sets
    """
    if not p.has_dual_data:
        missing = [name for name in ("beta", "primal_lengths", "dual_lengths") if getattr(p, name) is None]
        raise MissingDualData(f"Swapping the basis sets needs {', '.join(missing)}")
    return AngleProblem(
        alpha=p.beta,
        beta=p.alpha,
        gamma=p.gamma.T,
        primal_lengths=p.dual_lengths,
        dual_lengths=p.primal_lengths,
    )
