"""
Randomized numeric verification of the basis identities.

Each trial draws its bases from counter-based random streams (see :mod:`dualbasis.verification.random`) and
evaluates four families of checks:

* general pairs (A, A*): the metric identities, coordinate transforms, quadratic norms, the angle identities
  on the extracted angles and on the swapped problem, and in 2D the closed-form α12 solver
* G = I pairs: direction-cosine identities of an orthonormal primal basis
* Q = I pairs: reciprocal lengths and angles against A* = (A^-1)^T
* 2D only: constructed pairs on which the α12 solver has to use its sign-candidate branch

A run may be limited to some of the families (:class:`Family`). Each family depends only on the seed and the trial
index, so such a run reproduces its part of the full run.

Every check yields a non-negative residual. The report keeps the maximum per check and the lowest trial
index that reached it, so the result does not depend on how trials are scheduled.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
import pydantic.v1 as pydantic

from dualbasis.core.exceptions import DimensionMismatch
from dualbasis.core.types import (
    DEFAULT_IDENTITY_TOLERANCE,
    PAIRS,
    ArrayLike,
    BasisMatrix,
    CoordinateVector,
    MetricMatrix,
    MixedMatrix,
    gammas_from_mixed,
    geometry_from_metric,
    pair_label,
)
from dualbasis.identities import (
    AngleProblem,
    Branch,
    all_residuals_3d,
    beta12_2d,
    beta_3d,
    orthonormal_beta,
    orthonormal_product_residual_2d,
    orthonormal_residual,
    residual_2d,
    solve_alpha_2d,
    swap_inverse,
)
from dualbasis.metric import (
    Route,
    TransformContext,
    cell_volume,
    cholesky_factor,
    dual_basis_from_mixed,
    dual_metric,
    gram_from_basis,
    mixed_from_bases,
    orthonormal_coordinates,
    primal_metric,
    quadratic_norm,
    transform_all_routes,
)
from dualbasis.reciprocal import reciprocal_basis, reciprocal_geometry
from dualbasis.utils.linalg import max_relative_deviation, small_inverse
from dualbasis.utils.logging import get_logger, log_context
from dualbasis.verification.random import (
    GENERATOR_NAME,
    Stream,
    philox_generator,
    random_basis,
    random_degenerate_pair_2d,
    random_orthonormal_basis,
)
from dualbasis.verification.report import VerificationReport

logger = get_logger(__name__)

# 2D solver instances with a smaller |denominator| are not counted as generic
GENERIC_DENOMINATOR = 0.1

Residuals = Dict[str, float]
PairSource = Callable[[int], Tuple[BasisMatrix, BasisMatrix]]


class Family(Enum):
    GENERAL = "general"
    ORTHONORMAL = "orthonormal"
    RECIPROCAL = "reciprocal"
    DEGENERATE = "degenerate"  # 2D only


class TrialConfig(pydantic.BaseModel):
    dimension: pydantic.conint(ge=2, le=3) = 3
    trials: pydantic.conint(ge=1) = 1000
    seed: pydantic.conint(ge=0, le=2**64 - 1) = 0
    tolerance: pydantic.confloat(gt=0) = 1e-8
    condition_limit: pydantic.confloat(gt=1) = 1e3
    families: Tuple[Family, ...] = tuple(Family)
    workers: pydantic.conint(ge=1) = 1

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False

    @pydantic.validator("families")
    def _canonical_order(cls, value: Tuple[Family, ...]) -> Tuple[Family, ...]:
        return tuple(family for family in Family if family in value)

    @pydantic.root_validator(skip_on_failure=True)
    def _check_families(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        usable = [f for f in values["families"] if f is not Family.DEGENERATE or values["dimension"] == 2]
        if not usable:
            raise ValueError(f"No trial family of {values['families']} runs in {values['dimension']}D")
        return values

    def metadata(self) -> Dict[str, Any]:
        """Everything that determines the report; ``workers`` does not"""
        return dict(
            kind="verify",
            dimension=self.dimension,
            trials=self.trials,
            seed=self.seed,
            condition_limit=self.condition_limit,
            families=[family.value for family in self.families],
            generator=GENERATOR_NAME,
        )


def _pair_cosines(metric: MetricMatrix) -> np.ndarray:
    """cos of the angles between basis vectors, straight from the metric entries"""
    lengths = np.sqrt(np.diag(metric.entries))
    unit = metric.entries / np.outer(lengths, lengths)
    return np.array([unit[i, j] for i, j in PAIRS[metric.n]])


def _max_abs(values) -> float:
    return float(np.max(np.abs(np.asarray(list(values), dtype=np.float64))))


def _matrix_identities(G: MetricMatrix, Gstar: MetricMatrix, Q: MixedMatrix) -> Residuals:
    return {
        "central_identity": max_relative_deviation(dual_metric(G, Q).entries, Gstar.entries),
        "inverse_identity": max_relative_deviation(primal_metric(Gstar, Q).entries, G.entries),
    }


def _transform_identities(
    cfg: TrialConfig, index: int, A: BasisMatrix, Astar: BasisMatrix, G, Gstar, Q
) -> Residuals:
    x = CoordinateVector(philox_generator(cfg.seed, Stream.VECTOR, index).uniform(-1.0, 1.0, cfg.dimension))
    context = TransformContext(A=A, Astar=Astar, G=G, Gstar=Gstar, Q=Q)

    forward = transform_all_routes(x, context)
    xstar = forward[Route.BASES]
    routes = max(max_relative_deviation(value.coords, xstar.coords) for value in forward.values())
    backward = transform_all_routes(xstar, context)
    routes = max(routes, *(max_relative_deviation(value.coords, x.coords) for value in backward.values()))

    r = orthonormal_coordinates(x, A).coords
    forms = np.array(quadratic_norm(x, xstar, G, Gstar, Q))
    return {
        "coordinate_routes": routes,
        "quadratic_norm": max_relative_deviation(forms, np.full(4, float(r @ r))),
    }


def _angle_identities(problem: AngleProblem, dual: MetricMatrix) -> Residuals:
    """Column identities and β formulas of ``problem``, β checked against the angles of ``dual``"""
    expected = _pair_cosines(dual)
    if problem.n == 2:
        return {
            "residual_2d": _max_abs(residual_2d(problem, column) for column in (1, 2)),
            "beta_2d": abs(beta12_2d(problem) - expected[0]),
        }
    return {
        "residual_3d": _max_abs(all_residuals_3d(problem)),
        "beta_3d": _max_abs(
            beta_3d(problem, pair_label(i, j)) - value for (i, j), value in zip(PAIRS[3], expected)
        ),
    }


def _general_family(
    cfg: TrialConfig, index: int, primal: BasisMatrix, pair_source: Optional[PairSource]
) -> Residuals:
    if pair_source is not None:
        A, Astar = pair_source(index)
    else:
        A = primal
        Astar = random_basis(cfg.dimension, cfg.seed, cfg.condition_limit, index, Stream.DUAL)
    G, Gstar, Q = gram_from_basis(A), gram_from_basis(Astar), mixed_from_bases(A, Astar)

    results = _matrix_identities(G, Gstar, Q)
    results["metric_round_trip"] = max_relative_deviation(primal_metric(dual_metric(G, Q), Q).entries, G.entries)
    results["dual_basis_from_mixed"] = max_relative_deviation(dual_basis_from_mixed(A, Q).entries, Astar.entries)
    results.update(_transform_identities(cfg, index, A, Astar, G, Gstar, Q))

    problem = AngleProblem.from_metrics(G, Gstar, Q)
    results.update(_angle_identities(problem, Gstar))
    swapped = swap_inverse(problem)
    results.update({f"swap_{name}": value for name, value in _angle_identities(swapped, G).items()})
    results["swap_involution"] = 0.0 if swap_inverse(swapped) == problem else 1.0

    if cfg.dimension == 2:
        solution = solve_alpha_2d(problem.gamma)
        if abs(solution.denominator) >= GENERIC_DENOMINATOR:
            results["solver_generic"] = abs(solution.cos_alpha - _pair_cosines(G)[0])
    return results


def _orthonormal_family(cfg: TrialConfig, index: int) -> Residuals:
    n = cfg.dimension
    A = random_orthonormal_basis(n, cfg.seed, index, condition_limit=cfg.condition_limit)
    Astar = random_basis(n, cfg.seed, cfg.condition_limit, index, Stream.DUAL)
    G, Gstar, Q = gram_from_basis(A), gram_from_basis(Astar), mixed_from_bases(A, Astar)
    gamma = AngleProblem.from_metrics(G, Gstar, Q).gamma
    columns, labels = range(1, n + 1), [pair_label(i, j) for i, j in PAIRS[n]]

    # the general formulas with every cos α = 0 must collapse to the direction-cosine ones
    right_angled = AngleProblem(alpha=np.full(len(PAIRS[n]), math.pi / 2), gamma=gamma)
    if n == 2:
        general_betas, general_residuals = [beta12_2d(right_angled)], [residual_2d(right_angled, c) for c in columns]
    else:
        general_betas = [beta_3d(right_angled, label) for label in labels]
        general_residuals = list(all_residuals_3d(right_angled))
    betas = [orthonormal_beta(gamma, label) for label in labels]
    residuals = [orthonormal_residual(gamma, column) for column in columns]

    results = {
        "orthonormal_residual": _max_abs(residuals),
        "orthonormal_beta": _max_abs(np.array(betas) - _pair_cosines(Gstar)),
        "orthonormal_specialization": max(
            _max_abs(np.array(betas) - general_betas), _max_abs(np.array(residuals) - general_residuals)
        ),
        "orthonormal_dual_metric": max_relative_deviation(dual_metric(G, Q).entries, Q.entries.T @ Q.entries),
    }
    if n == 2:
        results["orthonormal_product_2d"] = _max_abs(orthonormal_product_residual_2d(gamma, c) for c in columns)
    return results


def _reciprocal_family(cfg: TrialConfig, index: int, A: BasisMatrix) -> Residuals:
    n = cfg.dimension
    Astar = reciprocal_basis(A)
    G, Gstar, Q = gram_from_basis(A), gram_from_basis(Astar), mixed_from_bases(A, Astar)
    primal, dual = geometry_from_metric(G), geometry_from_metric(Gstar)
    pair = reciprocal_geometry(primal)
    gamma = gammas_from_mixed(Q, primal.lengths, dual.lengths).cosines

    results = {
        "reciprocal_mixed": _max_abs((Q.entries - np.eye(n)).ravel()),
        "reciprocal_geometry": max(
            max_relative_deviation(pair.dual.lengths, dual.lengths),
            _max_abs(pair.beta_cosines - _pair_cosines(Gstar)),
        ),
        "reciprocal_normalization": _max_abs(pair.normalization() - 1),
        "reciprocal_gamma": _max_abs((gamma - np.diag(pair.gamma_diag)).ravel()),
        "reciprocal_volume": abs(cell_volume(primal) * cell_volume(dual) - 1),
        "cell_volume": max(
            max_relative_deviation(cell_volume(g), np.prod(np.diag(cholesky_factor(metric).entries)))
            for g, metric in ((primal, G), (dual, Gstar))
        ),
        "reciprocal_dual_metric": max_relative_deviation(
            dual_metric(G, Q).entries, small_inverse(G.entries, symmetric_positive=True)
        ),
    }
    if n == 2:
        problem = AngleProblem.from_metrics(G, Gstar, Q)
        results["reciprocal_beta_2d"] = abs(beta12_2d(problem) + float(problem.alpha_cosines[0]))
    return results


def _degenerate_family(cfg: TrialConfig, index: int) -> Residuals:
    A, Astar = random_degenerate_pair_2d(cfg.seed, index)
    G = gram_from_basis(A)
    problem = AngleProblem.from_bases(A, Astar)
    solution = solve_alpha_2d(problem.gamma)
    if solution.branch is not Branch.DEGENERATE:
        logger.warning(f"Constructed degenerate pair took the generic branch, denominator {solution.denominator:.3e}")
        return {"solver_degenerate": 1.0}
    chosen = solution.residuals[solution.choice]
    return {"solver_degenerate": max(_max_abs(chosen), abs(solution.cos_alpha - _pair_cosines(G)[0]))}


def evaluate_trial(cfg: TrialConfig, index: int, pair_source: Optional[PairSource] = None) -> Residuals:
    """All residuals of one trial; depends only on (cfg, index)"""
    results: Residuals = {}
    with log_context(trial=index):
        if Family.GENERAL in cfg.families or Family.RECIPROCAL in cfg.families:
            primal = random_basis(cfg.dimension, cfg.seed, cfg.condition_limit, index, Stream.PRIMAL)
        if Family.GENERAL in cfg.families:
            results.update(_general_family(cfg, index, primal, pair_source))
        if Family.ORTHONORMAL in cfg.families:
            results.update(_orthonormal_family(cfg, index))
        if Family.RECIPROCAL in cfg.families:
            results.update(_reciprocal_family(cfg, index, primal))
        if Family.DEGENERATE in cfg.families and cfg.dimension == 2:
            results.update(_degenerate_family(cfg, index))
        logger.debug(f"Worst residual {max(results.values()):.3e}")
    return results


def _accumulate(maxima: Dict[str, Tuple[float, int, int]], index: int, residuals: Residuals) -> None:
    for name, value in residuals.items():
        value = float(value) if math.isfinite(value) else math.inf
        if name not in maxima:
            maxima[name] = (value, index, 1)
            continue
        best, best_index, count = maxima[name]
        if value > best:
            best, best_index = value, index
        maxima[name] = (best, best_index, count + 1)


def verify_identities(cfg: TrialConfig, pair_source: Optional[PairSource] = None) -> VerificationReport:
    """
    Run ``cfg.trials`` trials and report the per-identity maximum residuals.

    :param pair_source: replaces the random general pairs, ``index -> (A, A*)``
    """
    logger.info(
        f"Verifying {cfg.dimension}D identities: {cfg.trials} trials, seed {cfg.seed}, "
        f"condition limit {cfg.condition_limit:g}, tolerance {cfg.tolerance:g}"
    )
    maxima: Dict[str, Tuple[float, int, int]] = {}

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            # map yields in submission order, which keeps the argmax tie-break deterministic
            results = executor.map(lambda index: evaluate_trial(cfg, index, pair_source), range(cfg.trials))
            for index, residuals in enumerate(results):
                _accumulate(maxima, index, residuals)
    else:
        for index in range(cfg.trials):
            _accumulate(maxima, index, evaluate_trial(cfg, index, pair_source))

    report = VerificationReport.from_maxima(maxima, cfg.tolerance, cfg.metadata())
    if report.passed:
        logger.info(f"All {len(report.records)} identities hold within {cfg.tolerance:g}")
    else:
        names = ", ".join(record.name for record in report.failures)
        logger.warning(f"{len(report.failures)} identities exceed {cfg.tolerance:g}: {names}")
    return report


def replay_trial(
    cfg: TrialConfig, identity: str, trial_index: int, pair_source: Optional[PairSource] = None
) -> float:
    """Re-evaluate one identity on one trial in isolation"""
    residuals = evaluate_trial(cfg, trial_index, pair_source)
    if identity not in residuals:
        raise KeyError(f"Identity {identity!r} is not evaluated on trial {trial_index} of a {cfg.dimension}D run")
    return residuals[identity]


def check_configuration(
    G: Union[MetricMatrix, ArrayLike],
    Gstar: Union[MetricMatrix, ArrayLike],
    Q: Union[MixedMatrix, ArrayLike],
    tolerance: float = DEFAULT_IDENTITY_TOLERANCE,
) -> VerificationReport:
    """
    Check whether user-supplied G, G* and Q belong to one pair of bases, i.e. G* = Q^T G^-1 Q and G = Q G*^-1 Q^T.

    :raises DimensionMismatch: if the matrices have different sizes
    :raises SingularMixed: if Q is not invertible
    """
    G = G if isinstance(G, MetricMatrix) else MetricMatrix(G)
    Gstar = Gstar if isinstance(Gstar, MetricMatrix) else MetricMatrix(Gstar)
    Q = Q if isinstance(Q, MixedMatrix) else MixedMatrix(Q)
    if len({G.n, Gstar.n, Q.n}) != 1:
        raise DimensionMismatch(f"G, G* and Q must have the same size, got {G.n}, {Gstar.n} and {Q.n}")
    Q.check()

    residuals = _matrix_identities(G, Gstar, Q)
    return VerificationReport.from_maxima(
        {name: (value, 0, 1) for name, value in residuals.items()},
        tolerance,
        dict(kind="check", dimension=G.n),
    )
