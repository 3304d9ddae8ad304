from __future__ import annotations

import dataclasses
import json
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple


@dataclasses.dataclass(frozen=True)
class IdentityRecord:
    name: str
    trials: int  # trials the identity was evaluated on
    max_residual: float
    trial_index: int  # lowest trial index reaching max_residual
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_residual": self.max_residual,
            "trial_index": self.trial_index,
            "pass": self.passed,
            "trials": self.trials,
        }

    @classmethod
    def from_dict(cls, name: str, data: Mapping[str, Any]) -> IdentityRecord:
        return cls(
            name=name,
            trials=int(data["trials"]),
            max_residual=float(data["max_residual"]),
            trial_index=int(data["trial_index"]),
            passed=bool(data["pass"]),
        )


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    """Per-identity maximum residuals of a verification run; passes iff every identity does"""

    records: Tuple[IdentityRecord, ...]
    tolerance: float
    metadata: Mapping[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(sorted(self.records, key=lambda record: record.name)))
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> Tuple[IdentityRecord, ...]:
        return tuple(record for record in self.records if not record.passed)

    def __getitem__(self, name: str) -> IdentityRecord:
        for record in self.records:
            if record.name == name:
                return record
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(record.name == name for record in self.records)

    @classmethod
    def from_maxima(
        cls,
        maxima: Mapping[str, Tuple[float, int, int]],
        tolerance: float,
        metadata: Optional[Mapping[str, Any]] = None,
    ) -> VerificationReport:
        """:param maxima: identity name -> (max residual, argmax trial index, evaluated trials)"""
        records = [
            IdentityRecord(name, trials, residual, index, passed=residual <= tolerance)
            for name, (residual, index, trials) in maxima.items()
        ]
        return cls(records=tuple(records), tolerance=tolerance, metadata=metadata or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.metadata,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "identities": {record.name: record.to_dict() for record in self.records},
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        # repr-based float formatting is the shortest string that parses back to the same double
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> VerificationReport:
        data = dict(data)
        identities = data.pop("identities")
        tolerance = float(data.pop("tolerance"))
        data.pop("passed", None)
        records = [IdentityRecord.from_dict(name, values) for name, values in identities.items()]
        return cls(records=tuple(records), tolerance=tolerance, metadata=data)

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))

    def format_table(self) -> Iterable[str]:
        """Aligned human-readable lines"""
        width = max((len(record.name) for record in self.records), default=8)
        yield f"{'identity':<{width}}  {'max residual':>12}  {'trial':>6}  {'trials':>6}  status"
        for record in self.records:
            status = "pass" if record.passed else "FAIL"
            yield (
                f"{record.name:<{width}}  {record.max_residual:>12.3e}  {record.trial_index:>6}  "
                f"{record.trials:>6}  {status}"
            )
        yield f"overall: {'pass' if self.passed else 'FAIL'} at tolerance {self.tolerance:g}"
