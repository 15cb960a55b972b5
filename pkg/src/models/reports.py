"""
Pydantic models for verification reports, profile files and sweep results.
"""

import math
from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

from .geometry import FamilyParams, FamilyTag


class ResidualEntry(BaseModel):
    """One named residual compared against its tolerance."""
    name: str = Field(..., min_length=1, description="Condition being checked")
    value: float = Field(..., description="Residual, or the quantity bounded from below")
    tolerance: float = Field(..., ge=0.0)
    comparison: Literal["le", "gt"] = Field(
        default="le", description="le: pass iff value <= tolerance; gt: pass iff value > tolerance"
    )
    informational: bool = Field(default=False, description="Reported but excluded from the verdict")

    @computed_field
    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.comparison == "le":
            return self.value <= self.tolerance
        return self.value > self.tolerance


class VerificationReport(BaseModel):
    """Named residuals with an overall verdict."""
    title: str
    entries: List[ResidualEntry] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries if not entry.informational)

    def add(self, name: str, value: float, tolerance: float, **kwargs: Any) -> ResidualEntry:
        entry = ResidualEntry(name=name, value=float(value), tolerance=tolerance, **kwargs)
        self.entries.append(entry)
        return entry

    def entry(self, name: str) -> ResidualEntry:
        for item in self.entries:
            if item.name == name:
                return item
        raise KeyError(name)

    @property
    def worst(self) -> Optional[ResidualEntry]:
        failing = [e for e in self.entries if not e.passed and not e.informational]
        return failing[0] if failing else None

    @classmethod
    def merge(cls, title: str, reports: List["VerificationReport"], **metadata: Any) -> "VerificationReport":
        """Combine reports; entry names are prefixed with their report title."""
        merged = cls(title=title, metadata=dict(metadata))
        for report in reports:
            for item in report.entries:
                merged.entries.append(item.model_copy(update={"name": f"{report.title}.{item.name}"}))
            merged.metadata[report.title] = report.metadata
        return merged


class ProfileFile(BaseModel):
    """On-disk representation of a MetricProfile (format version 1)."""
    format_version: Literal[1] = 1
    family_tag: FamilyTag
    params: Optional[FamilyParams] = Field(None, description="Genus/Chern data when the family has them")
    a: float = Field(..., gt=0.0)
    s: float = Field(..., ge=0.0)
    K: Literal[-4, 0, 4]
    coefficients: Dict[str, float] = Field(default_factory=dict, description="Family-specific block")
    t_grid: List[float]
    f: List[float]
    g: List[float]
    h: Optional[List[float]] = None
    df: Optional[List[float]] = None
    d2f: Optional[List[float]] = None
    dg: Optional[List[float]] = None
    d2g: Optional[List[float]] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("t_grid")
    @classmethod
    def validate_increasing(cls, v: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("t_grid must be strictly increasing")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "ProfileFile":
        n = len(self.t_grid)
        for name in ("f", "g", "h", "df", "d2f", "dg", "d2g"):
            arr = getattr(self, name)
            if arr is not None and len(arr) != n:
                raise ValueError(f"Array {name} has length {len(arr)}, expected {n}")
        return self


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


SweepValue = Union[float, int, bool, str, None]


class SweepResult(BaseModel):
    """Per-point records of a parameter sweep plus summary statistics."""
    kind: Literal[
        "einstein-count",
        "eta",
        "eps-s",
        "kahler-window",
        "asymmetric-count",
        "kahler-count",
        "product-constants",
    ]
    axes: Dict[str, str] = Field(default_factory=dict, description="Axis name -> description")
    columns: List[str]
    records: List[Dict[str, SweepValue]] = Field(default_factory=list)
    summary: Dict[str, SweepValue] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_records(self) -> "SweepResult":
        for record in self.records:
            if list(record) != self.columns:
                raise ValueError("Every record must carry exactly the declared columns, in order")
        return self


__all__ = [
    "ProfileFile",
    "ResidualEntry",
    "SweepResult",
    "VerificationReport",
    "utc_now",
]
