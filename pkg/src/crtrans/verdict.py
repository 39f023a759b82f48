"""Three-valued certification results.

Nonvanishing beyond the truncation degree can never be refuted from truncated
data, so every classifier answers CertifiedTrue, CertifiedFalse, or
UnknownAtTruncation. Certified answers always carry a witness that can be
reproduced by re-evaluation (a coefficient, a minor, an exact scalar) plus the
truncation degree that was actually used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional


class Status(str, enum.Enum):
    CERTIFIED_TRUE = "certified_true"
    CERTIFIED_FALSE = "certified_false"
    UNKNOWN_AT_TRUNCATION = "unknown_at_truncation"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Optional[Mapping[str, Any]] = None
    degree_used: Optional[int] = None

    @property
    def is_true(self) -> bool:
        return self.status is Status.CERTIFIED_TRUE

    @property
    def is_false(self) -> bool:
        return self.status is Status.CERTIFIED_FALSE

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN_AT_TRUNCATION

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness": _jsonable(self.witness),
            "degree_used": self.degree_used,
        }


def certified_true(witness: Optional[Mapping[str, Any]] = None, degree: Optional[int] = None) -> Verdict:
    return Verdict(Status.CERTIFIED_TRUE, witness, degree)


def certified_false(witness: Optional[Mapping[str, Any]] = None, degree: Optional[int] = None) -> Verdict:
    return Verdict(Status.CERTIFIED_FALSE, witness, degree)


def unknown(witness: Optional[Mapping[str, Any]] = None, degree: Optional[int] = None) -> Verdict:
    return Verdict(Status.UNKNOWN_AT_TRUNCATION, witness, degree)


def _jsonable(value: Any) -> Any:
    """Render witnesses with exact scalars as strings, containers recursively."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)
