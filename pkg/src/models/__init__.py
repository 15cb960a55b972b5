"""Pydantic models for profile construction, verification and persistence."""

from .geometry import (
    AsymmetricSearch,
    BoundaryPair,
    Coefficients,
    EinsteinSpec,
    EtaEstimate,
    FamilyParams,
    KahlerSpec,
    MetricProfile,
    PeriodicSolution,
    ProductSpec,
    ProfilePolynomial,
    RicciField,
    TurningPointProblem,
)
from .reports import (
    ProfileFile,
    ResidualEntry,
    SweepResult,
    VerificationReport,
)

__all__ = [
    "AsymmetricSearch",
    "BoundaryPair",
    "Coefficients",
    "EinsteinSpec",
    "EtaEstimate",
    "FamilyParams",
    "KahlerSpec",
    "MetricProfile",
    "PeriodicSolution",
    "ProductSpec",
    "ProfilePolynomial",
    "RicciField",
    "TurningPointProblem",
    "ProfileFile",
    "ResidualEntry",
    "SweepResult",
    "VerificationReport",
]
