"""
JSON input documents of the command line front-end.

Basis matrices are written column by column (a list of basis vectors), all other matrices row by row.
Angles are keyed by the 1-based pair labels "12", "13", "23" and are converted to radians while parsing.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import pydantic.v1 as pydantic

from dualbasis.core.exceptions import IncompleteDocument
from dualbasis.core.types import (
    BasisGeometry,
    BasisMatrix,
    CoordinateVector,
    Frame,
    GammaMatrix,
    MetricMatrix,
    MixedMatrix,
)

AngleUnit = Literal["rad", "deg"]
Matrix = List[List[float]]


def to_radians(value: float, unit: str) -> float:
    return math.radians(value) if unit == "deg" else float(value)


def from_radians(value: float, unit: str) -> float:
    return math.degrees(value) if unit == "deg" else float(value)


class GeometryDocument(pydantic.BaseModel):
    lengths: List[float]
    angles: Dict[str, float]

    class Config:
        extra = pydantic.Extra.forbid

    def to_geometry(self) -> BasisGeometry:
        return BasisGeometry.from_angle_map(self.lengths, self.angles)

    @classmethod
    def from_geometry(cls, g: BasisGeometry, unit: str) -> "GeometryDocument":
        return cls(
            lengths=[float(value) for value in g.lengths],
            angles={label: from_radians(value, unit) for label, value in g.angle_map.items()},
        )


class InputDocument(pydantic.BaseModel):
    """
    Whatever a command reads from its input file. Only the fields the command needs have to be present;
    keys written by other commands (e.g. result fields of a ``--json`` output) are ignored.
    """

    dimension: Optional[pydantic.conint(ge=2, le=3)] = None
    angle_unit: Optional[AngleUnit] = None  # unit in the file; parsed angles are always radians

    basis: Optional[Matrix] = None
    geometry: Optional[GeometryDocument] = None
    dual_basis: Optional[Matrix] = None
    dual_geometry: Optional[GeometryDocument] = None

    metric: Optional[Matrix] = None
    dual_metric: Optional[Matrix] = None
    mixed: Optional[Matrix] = None
    gammas: Optional[Matrix] = None
    dual_lengths: Optional[List[float]] = None

    coords: Optional[List[float]] = None
    frame: Literal["primal", "dual"] = "primal"

    class Config:
        extra = pydantic.Extra.ignore

    @pydantic.root_validator(skip_on_failure=True)
    def _check_and_convert(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        for primary, alternative in (("basis", "geometry"), ("dual_basis", "dual_geometry")):
            if values.get(primary) is not None and values.get(alternative) is not None:
                raise ValueError(f"Give at most one of {primary!r} and {alternative!r}")

        sizes = {}
        for name in ("basis", "dual_basis", "metric", "dual_metric", "mixed", "gammas"):
            matrix = values.get(name)
            if matrix is None:
                continue
            if not matrix or any(len(row) != len(matrix) for row in matrix):
                raise ValueError(f"{name!r} must be a non-empty square matrix")
            sizes[name] = len(matrix)
        for name in ("geometry", "dual_geometry"):
            if values.get(name) is not None:
                sizes[name] = len(values[name].lengths)
        for name in ("coords", "dual_lengths"):
            if values.get(name) is not None:
                sizes[name] = len(values[name])

        if values.get("dimension") is not None:
            sizes["dimension"] = values["dimension"]
        if len(set(sizes.values())) > 1:
            raise ValueError(f"Inconsistent dimensions: {sizes}")
        if values.get("dimension") is None and sizes:
            values["dimension"] = next(iter(sizes.values()))

        unit = values.get("angle_unit") or "deg"
        for name in ("geometry", "dual_geometry"):
            document = values.get(name)
            if document is not None:
                values[name] = GeometryDocument(
                    lengths=document.lengths,
                    angles={label: to_radians(value, unit) for label, value in document.angles.items()},
                )
        return values

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise IncompleteDocument(f"Input document needs {', '.join(repr(name) for name in missing)}")

    def primal_geometry(self) -> Optional[BasisGeometry]:
        return None if self.geometry is None else self.geometry.to_geometry()

    def dual_geometry_value(self) -> Optional[BasisGeometry]:
        return None if self.dual_geometry is None else self.dual_geometry.to_geometry()

    def basis_matrix(self) -> Optional[BasisMatrix]:
        return None if self.basis is None else BasisMatrix(np.array(self.basis, dtype=np.float64).T)

    def dual_basis_matrix(self) -> Optional[BasisMatrix]:
        return None if self.dual_basis is None else BasisMatrix(np.array(self.dual_basis, dtype=np.float64).T)

    def metric_matrix(self) -> Optional[MetricMatrix]:
        return None if self.metric is None else MetricMatrix(self.metric)

    def dual_metric_matrix(self) -> Optional[MetricMatrix]:
        return None if self.dual_metric is None else MetricMatrix(self.dual_metric)

    def mixed_matrix(self) -> Optional[MixedMatrix]:
        return None if self.mixed is None else MixedMatrix(self.mixed)

    def gamma_matrix(self) -> Optional[GammaMatrix]:
        return None if self.gammas is None else GammaMatrix(self.gammas)

    def coordinate_vector(self) -> Optional[CoordinateVector]:
        return None if self.coords is None else CoordinateVector(self.coords, Frame(self.frame))


def parse_document(data: Union[str, Dict[str, Any]], default_unit: str = "deg") -> InputDocument:
    """
    :param data: JSON text or an already decoded object
    :param default_unit: angle unit assumed when the document has no ``angle_unit``
    """
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise IncompleteDocument(f"Input document must be a JSON object, got {type(data).__name__}")
    return InputDocument.parse_obj({**data, "angle_unit": data.get("angle_unit") or default_unit})


def load_document(path: Union[str, Path], default_unit: str = "deg") -> InputDocument:
    return parse_document(Path(path).read_text(), default_unit)


def basis_columns(matrix: BasisMatrix) -> Matrix:
    """Column-major form used in documents"""
    return matrix.entries.T.tolist()
