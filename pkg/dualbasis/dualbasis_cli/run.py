"""
Geometry of two sets of basis vectors from JSON documents.

    dualbasis metric cell.json --factor
    dualbasis --json reciprocal hexagonal.json
    dualbasis --radians dual-metric pair.json
    dualbasis verify --dim 3 --trials 10000 --seed 42 --tol 1e-8
"""

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, Optional, Sequence

import configargparse
import numpy as np
import pydantic.v1 as pydantic
from dotenv import load_dotenv

from dualbasis.core.exceptions import DualBasisError, IncompleteDocument
from dualbasis.core.types import (
    DEFAULT_IDENTITY_TOLERANCE,
    PAIRS,
    Frame,
    MetricMatrix,
    MixedMatrix,
    geometry_from_metric,
    pair_label,
)
from dualbasis.dualbasis_cli.documents import (
    GeometryDocument,
    InputDocument,
    basis_columns,
    from_radians,
    load_document,
)
from dualbasis.identities import AngleProblem, Branch, beta12_2d, beta_angle, solve_alpha_2d
from dualbasis.metric import (
    TransformContext,
    build_metric,
    cell_volume,
    cholesky_factor,
    delta_omega,
    dual_metric,
    gram_from_basis,
    mixed_from_bases,
    quadratic_norm,
    transform_all_routes,
)
from dualbasis.reciprocal import reciprocal_basis, reciprocal_geometry
from dualbasis.utils.logging import get_logger, set_loglevel, use_dualbasis_log_handler
from dualbasis.verification import Family, TrialConfig, check_configuration, verify_identities

load_dotenv(os.path.join(Path.cwd(), ".env"))

use_dualbasis_log_handler("in_root_logger")

logger = get_logger(__name__)

EXIT_SUCCESS = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARN", "WARNING", "ERROR", "CRITICAL")


@dataclasses.dataclass
class CommandResult:
    data: Dict[str, Any]
    exit_code: int = EXIT_SUCCESS
    lines: Optional[Iterable[str]] = None  # text rendering, when the generic one does not fit


def _matrix(value) -> list:
    return np.asarray(value, dtype=np.float64).tolist()


def _geometry(g, unit: str) -> Dict[str, Any]:
    return GeometryDocument.from_geometry(g, unit).dict()


def _primal_metric(document: InputDocument) -> Optional[MetricMatrix]:
    if document.metric is not None:
        return document.metric_matrix()
    if document.geometry is not None:
        return build_metric(document.primal_geometry())
    if document.basis is not None:
        return gram_from_basis(document.basis_matrix())
    return None


def _dual_metric(document: InputDocument) -> Optional[MetricMatrix]:
    if document.dual_metric is not None:
        return document.dual_metric_matrix()
    if document.dual_geometry is not None:
        return build_metric(document.dual_geometry_value())
    if document.dual_basis is not None:
        return gram_from_basis(document.dual_basis_matrix())
    return None


def _mixed(document: InputDocument, G: Optional[MetricMatrix]) -> Optional[MixedMatrix]:
    """Q from the document, or Q_ij = |a_i| |a*_j| cos γ_ij from gammas and both length sets"""
    if document.mixed is not None:
        return document.mixed_matrix()
    if document.basis is not None and document.dual_basis is not None:
        return mixed_from_bases(document.basis_matrix(), document.dual_basis_matrix())
    if document.gammas is None or G is None:
        return None
    document.require("dual_lengths")
    primal_lengths = np.sqrt(np.diag(G.entries))
    return MixedMatrix(document.gamma_matrix().check().cosines * np.outer(primal_lengths, document.dual_lengths))


def run_metric(document: InputDocument, args) -> CommandResult:
    if document.geometry is not None:
        geometry = document.primal_geometry()
        G = build_metric(geometry)
    elif document.basis is not None:
        G = gram_from_basis(document.basis_matrix())
        geometry = geometry_from_metric(G)
    else:
        raise IncompleteDocument("metric needs 'geometry' or 'basis'")

    data = dict(dimension=G.n, angle_unit=args.angle_unit, geometry=_geometry(geometry, args.angle_unit))
    data["metric"] = _matrix(G)
    if args.factor:
        data["cholesky_factor"] = basis_columns(cholesky_factor(G))
    return CommandResult(data)


def run_dual_metric(document: InputDocument, args) -> CommandResult:
    G = _primal_metric(document)
    Q = _mixed(document, G)
    if G is None or Q is None:
        raise IncompleteDocument("dual-metric needs 'metric' or 'geometry', and 'mixed' or 'gammas' + 'dual_lengths'")

    Gstar = dual_metric(G, Q)
    data = dict(dimension=G.n, angle_unit=args.angle_unit, metric=_matrix(G), mixed=_matrix(Q))
    data["dual_metric"] = _matrix(Gstar)
    data["dual_geometry"] = _geometry(geometry_from_metric(Gstar), args.angle_unit)
    return CommandResult(data)


def run_reciprocal(document: InputDocument, args) -> CommandResult:
    if document.basis is not None:
        A = document.basis_matrix()
        Astar = reciprocal_basis(A)
        data = dict(dimension=A.n, basis=basis_columns(A), dual_basis=basis_columns(Astar))
        data["mixed"] = _matrix(mixed_from_bases(A, Astar))
        return CommandResult(data)

    document.require("geometry")
    pair = reciprocal_geometry(document.primal_geometry())
    labels = [pair_label(i, j) for i, j in PAIRS[pair.n]]
    data = dict(dimension=pair.n, angle_unit=args.angle_unit, geometry=_geometry(pair.primal, args.angle_unit))
    data["dual_geometry"] = _geometry(pair.dual, args.angle_unit)
    data["gamma_diag"] = _matrix(pair.gamma_diag)
    data["beta_cosines"] = dict(zip(labels, _matrix(pair.beta_cosines)))
    return CommandResult(data)


def run_solve_angles(document: InputDocument, args) -> CommandResult:
    document.require("gammas")
    gamma = document.gamma_matrix()
    solution = solve_alpha_2d(gamma)

    data = dict(angle_unit=args.angle_unit, branch=solution.branch.value, cos_alpha12=solution.cos_alpha)
    data["alpha12"] = from_radians(solution.alpha, args.angle_unit)
    data["numerator"], data["denominator"] = solution.numerator, solution.denominator
    if solution.branch is Branch.DEGENERATE:
        logger.warning(
            f"Denominator {solution.denominator:.3e} vanishes, cos(alpha12) chosen from {solution.candidates}"
            + (", both of which fit the gammas" if solution.ambiguous else "")
        )
        data["ambiguous"] = solution.ambiguous
    if solution.candidates:
        data["candidates"] = list(solution.candidates)
        data["residuals"] = [list(pair) for pair in solution.residuals]

    if abs(solution.cos_alpha) < 1:
        cos_beta = beta12_2d(AngleProblem(alpha=[solution.alpha], gamma=gamma))
        data["cos_beta12"] = cos_beta
        data["beta12"] = from_radians(beta_angle(cos_beta), args.angle_unit)
    else:
        logger.warning("The recovered primal vectors are collinear, beta12 is undefined")
    return CommandResult(data)


def run_volume(document: InputDocument, args) -> CommandResult:
    if document.geometry is not None:
        geometry = document.primal_geometry()
    else:
        G = _primal_metric(document)
        if G is None:
            raise IncompleteDocument("volume needs 'geometry', 'metric' or 'basis'")
        geometry = geometry_from_metric(G)

    data = dict(dimension=geometry.n, volume=cell_volume(geometry))
    if geometry.n == 2:
        # the 2D counterpart of Δ, the determinant of the unit-length metric
        data["delta"] = math.sin(geometry.angles[0]) ** 2
    else:
        invariants = delta_omega(geometry)
        data["delta"], data["omega"] = invariants.delta, list(invariants.omega)
    return CommandResult(data)


def run_check(document: InputDocument, args) -> CommandResult:
    document.require("metric", "dual_metric", "mixed")
    tolerance = args.tol if args.tol is not None else DEFAULT_IDENTITY_TOLERANCE
    report = check_configuration(
        document.metric_matrix(), document.dual_metric_matrix(), document.mixed_matrix(), tolerance
    )
    return CommandResult(
        report.to_dict(), EXIT_SUCCESS if report.passed else EXIT_CHECK_FAILED, lines=report.format_table()
    )


def run_transform(document: InputDocument, args) -> CommandResult:
    document.require("coords")
    x = document.coordinate_vector()
    if document.basis is not None and document.dual_basis is not None:
        context = TransformContext.from_bases(document.basis_matrix(), document.dual_basis_matrix())
    else:
        G = _primal_metric(document)
        context = TransformContext(G=G, Gstar=_dual_metric(document), Q=_mixed(document, G))
    if not context.available_routes():
        raise IncompleteDocument("transform needs 'basis' + 'dual_basis', or 'mixed' with a primal or dual metric")

    results = transform_all_routes(x, context)
    data = dict(dimension=x.n, frame=x.frame.opposite.value)
    data["routes"] = {route.value: _matrix(value.coords) for route, value in results.items()}
    if context.G is not None and context.Gstar is not None and context.Q is not None:
        other = next(iter(results.values()))
        primal, dual = (x, other) if x.frame is Frame.PRIMAL else (other, x)
        data["quadratic_norm"] = quadratic_norm(primal, dual, context.G, context.Gstar, context.Q)._asdict()
    return CommandResult(data)


def run_verify(document: Optional[InputDocument], args) -> CommandResult:
    options = dict(dimension=args.dim, trials=args.trials, seed=args.seed, condition_limit=args.cond)
    options["workers"] = args.workers
    if args.families:
        options["families"] = args.families
    tolerance = args.verify_tol if args.verify_tol is not None else args.tol
    if tolerance is not None:
        options["tolerance"] = tolerance
    report = verify_identities(TrialConfig(**options))
    return CommandResult(
        report.to_dict(), EXIT_SUCCESS if report.passed else EXIT_CHECK_FAILED, lines=report.format_table()
    )


COMMANDS: Dict[str, Callable[[Optional[InputDocument], Any], CommandResult]] = {
    "metric": run_metric,
    "dual-metric": run_dual_metric,
    "reciprocal": run_reciprocal,
    "solve-angles": run_solve_angles,
    "volume": run_volume,
    "check": run_check,
    "transform": run_transform,
    "verify": run_verify,
}


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _format_lines(data: Dict[str, Any], indent: int = 0) -> Iterator[str]:
    pad = " " * indent
    width = max((len(key) for key in data), default=0)
    for key, value in data.items():
        if isinstance(value, dict):
            yield f"{pad}{key}:"
            yield from _format_lines(value, indent + 2)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            yield f"{pad}{key}:"
            for row in value:
                yield pad + "  " + "  ".join(f"{entry:>16.10g}" for entry in row)
        elif isinstance(value, list):
            yield f"{pad}{key:<{width}}  " + "  ".join(_format_value(entry) for entry in value)
        else:
            yield f"{pad}{key:<{width}}  {_format_value(value)}"


def _emit(result: CommandResult, as_json: bool) -> None:
    if as_json:
        print(json.dumps(result.data, indent=2, sort_keys=True))
        return
    for line in result.lines if result.lines is not None else _format_lines(result.data):
        print(line)


def _emit_error(code: str, message: str, as_json: bool) -> None:
    message = " ".join(message.split())
    if as_json:
        print(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True))
    else:
        print(f"error {code}: {message}")


def _global_options(parser: argparse.ArgumentParser, tolerance: bool, default=None) -> None:
    """
    Options accepted both before and after the command name. Config file values are appended after the command,
    so every subcommand repeats them with suppressed defaults that leave the top-level values in place.
    """
    suppress = {} if default is None else dict(default=default)
    # fmt:off
    parser.add_argument('--json', action='store_true', **suppress,
                        help='Print results as JSON instead of aligned text')
    unit = parser.add_mutually_exclusive_group()
    unit.add_argument('--degrees', dest='angle_unit', action='store_const', const='deg', **suppress,
                      help='Angles in input files without an angle_unit, and in the output, are degrees')
    unit.add_argument('--radians', dest='angle_unit', action='store_const', const='rad', **suppress,
                      help='Angles in input files without an angle_unit, and in the output, are radians')
    parser.add_argument('--loglevel', type=str.upper, choices=LOG_LEVELS, **suppress,
                        help='Level of the log on stderr. Default: DUALBASIS_LOGLEVEL or INFO')
    if tolerance:
        parser.add_argument('--tol', type=float, **suppress,
                            help=f'Identity tolerance. Default: {DEFAULT_IDENTITY_TOLERANCE:g} for check, '
                                 f'1e-8 for verify')
    # fmt:on


def build_parser() -> configargparse.ArgParser:
    # fmt:off
    parser = configargparse.ArgParser(prog="dualbasis", default_config_files=["config.yml"],
                                      config_file_parser_class=configargparse.YAMLConfigFileParser,
                                      formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add('-c', '--config', required=False, is_config_file=True, help='config file path')
    _global_options(parser, tolerance=True)
    parser.set_defaults(json=False, angle_unit='deg', tol=None, loglevel=None)

    subparsers = parser.add_subparsers(dest='command', required=True)

    metric = subparsers.add_parser('metric', help='Metric (Gram) matrix of a geometry or basis')
    metric.add_argument('input', help='JSON document with geometry or basis')
    metric.add_argument('--factor', action='store_true', help='Also realize the metric as a Cholesky basis')
    _global_options(metric, tolerance=True, default=argparse.SUPPRESS)

    for name, help_text in (
        ('dual-metric', "Dual metric G* = Q^T G^-1 Q and the dual basis' lengths and angles"),
        ('reciprocal', 'Reciprocal basis or reciprocal lengths and angles'),
        ('solve-angles', 'Recover cos(alpha12) and cos(beta12) from the four 2D gamma cosines'),
        ('volume', 'Cell area or volume and Delta'),
        ('check', 'Check that a G, G*, Q triple belongs to one pair of bases'),
        ('transform', 'Coordinates of a vector on the other basis by every available route'),
    ):
        command = subparsers.add_parser(name, help=help_text)
        command.add_argument('input', help='JSON input document')
        _global_options(command, tolerance=True, default=argparse.SUPPRESS)

    verify = subparsers.add_parser('verify', help='Randomized verification of every identity')
    verify.add_argument('--dim', type=int, choices=(2, 3), default=3, help='Dimension of the random bases')
    verify.add_argument('--trials', type=int, default=1000, help='Number of random trials')
    verify.add_argument('--seed', type=int, default=0, help='Unsigned 64-bit seed of the random streams')
    verify.add_argument('--tol', dest='verify_tol', type=float, default=None,
                        help='Identity tolerance (overrides the global --tol)')
    verify.add_argument('--cond', type=float, default=1e3, help='Condition number limit of random bases')
    verify.add_argument('--workers', type=int, default=1, help='Threads evaluating trials')
    verify.add_argument('--family', dest='families', action='append', choices=[family.value for family in Family],
                        default=None, help='Run only this trial family (repeatable). Default: all of them')
    _global_options(verify, tolerance=False, default=argparse.SUPPRESS)
    # fmt:on
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.loglevel is not None:
        set_loglevel(args.loglevel)

    try:
        document = None if args.command == "verify" else load_document(args.input, args.angle_unit)
        result = COMMANDS[args.command](document, args)
    except DualBasisError as e:
        code, message = e.code, str(e)
    except pydantic.ValidationError as e:
        code, message = "InvalidInput", str(e)
    except json.JSONDecodeError as e:
        code, message = "InvalidJson", str(e)
    except OSError as e:
        code, message = "UnreadableInput", str(e)
    else:
        _emit(result, args.json)
        return result.exit_code

    logger.debug(f"{args.command} failed with {code}")
    _emit_error(code, message, args.json)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
