"""
Profile persistence: JSON files (format version 1), schema validation and CSV export.

Floats are written with Python's shortest round-trip representation, so
write -> read -> write reproduces a file byte for byte.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd
from jsonschema import Draft202012Validator

from src.models.geometry import FamilyParams, MetricProfile
from src.models.reports import ProfileFile, SweepResult, VerificationReport
from src.utils.logging_util import setup_logging

from src.functions.curvature_oracle import ricci_eigenvalues


logger = setup_logging("profile-io")

PathLike = Union[str, Path]

_NUMBER_ARRAY = {"type": "array", "items": {"type": "number"}, "minItems": 11}
_OPTIONAL_ARRAY = {"oneOf": [_NUMBER_ARRAY, {"type": "null"}]}

PROFILE_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "grayforge profile",
    "type": "object",
    "required": ["format_version", "family_tag", "a", "s", "K", "t_grid", "f", "g"],
    "properties": {
        "format_version": {"const": 1},
        "family_tag": {
            "enum": ["gray-symmetric", "gray-asymmetric", "einstein", "kahler", "product", "custom"]
        },
        "params": {"oneOf": [{"type": "object"}, {"type": "null"}]},
        "a": {"type": "number", "exclusiveMinimum": 0},
        "s": {"type": "number", "minimum": 0},
        "K": {"enum": [-4, 0, 4]},
        "coefficients": {"type": "object", "additionalProperties": {"type": "number"}},
        "t_grid": _NUMBER_ARRAY,
        "f": _NUMBER_ARRAY,
        "g": _NUMBER_ARRAY,
        "h": _OPTIONAL_ARRAY,
        "df": _OPTIONAL_ARRAY,
        "d2f": _OPTIONAL_ARRAY,
        "dg": _OPTIONAL_ARRAY,
        "d2g": _OPTIONAL_ARRAY,
        "metadata": {"type": "object"},
    },
    "additionalProperties": False,
}

_VALIDATOR = Draft202012Validator(PROFILE_SCHEMA)

_ARRAYS = ("t_grid", "f", "g", "h", "df", "d2f", "dg", "d2g")


def _as_list(array):
    return None if array is None else [float(v) for v in array]


def to_profile_file(profile: MetricProfile) -> ProfileFile:
    """Split a profile's metadata into the params, coefficients and free-form blocks."""
    metadata = dict(profile.metadata)
    params = metadata.pop("params", None)
    coefficients = metadata.pop("coefficients", {})
    return ProfileFile(
        family_tag=profile.family_tag,
        params=FamilyParams(**params) if isinstance(params, dict) else params,
        a=profile.a,
        s=profile.s,
        K=profile.K,
        coefficients={name: float(value) for name, value in coefficients.items()},
        metadata=metadata,
        **{name: _as_list(getattr(profile, name)) for name in _ARRAYS},
    )


def from_profile_file(document: ProfileFile) -> MetricProfile:
    metadata = dict(document.metadata)
    if document.coefficients:
        metadata["coefficients"] = dict(document.coefficients)
    if document.params is not None:
        metadata["params"] = document.params.model_dump()
    return MetricProfile(
        a=document.a,
        s=document.s,
        K=document.K,
        family_tag=document.family_tag,
        metadata=metadata,
        **{name: getattr(document, name) for name in _ARRAYS},
    )


def dumps_profile(document: ProfileFile) -> str:
    """Serialize with shortest round-trip floats; NaN and infinities are rejected."""
    for name in _ARRAYS:
        values = getattr(document, name)
        if values is not None and not all(math.isfinite(v) for v in values):
            raise ValueError(f"Array {name} contains non-finite values")
    return json.dumps(document.model_dump(mode="json"), indent=2, allow_nan=False) + "\n"


def loads_profile(text: str) -> ProfileFile:
    """
    Parse and validate a profile document.

    Raises:
        json.JSONDecodeError: Not JSON
        jsonschema.ValidationError: Violates PROFILE_SCHEMA
        pydantic.ValidationError: Violates the ProfileFile invariants
    """
    data = json.loads(text)
    _VALIDATOR.validate(data)
    return ProfileFile.model_validate(data)


def write_profile(profile: Union[MetricProfile, ProfileFile], path: PathLike) -> Path:
    document = profile if isinstance(profile, ProfileFile) else to_profile_file(profile)
    path = Path(path)
    path.write_text(dumps_profile(document), encoding="utf-8")
    logger.info("Profile written", path=str(path), family=document.family_tag, samples=len(document.t_grid))
    return path


def read_profile(path: PathLike) -> MetricProfile:
    document = loads_profile(Path(path).read_text(encoding="utf-8"))
    logger.debug("Profile read", path=str(path), family=document.family_tag)
    return from_profile_file(document)


def profile_params(profile: MetricProfile) -> Union[FamilyParams, None]:
    params = profile.metadata.get("params")
    return FamilyParams(**params) if isinstance(params, dict) else None


def profile_frame(profile: MetricProfile) -> pd.DataFrame:
    """Columns t, f, g, h, lambda0, lambda1, lambda2; h is empty when the profile has none."""
    field = ricci_eigenvalues(profile)
    return pd.DataFrame({
        "t": profile.t_grid,
        "f": profile.f,
        "g": profile.g,
        "h": profile.h if profile.h is not None else [None] * len(profile.t_grid),
        "lambda0": field.lambda0,
        "lambda1": field.lambda1,
        "lambda2": field.lambda2,
    })


def export_csv(profile: MetricProfile, path: PathLike) -> Path:
    path = Path(path)
    profile_frame(profile).to_csv(path, index=False)
    logger.info("Profile exported", path=str(path), rows=len(profile.t_grid))
    return path


def write_report(report: VerificationReport, path: PathLike) -> Path:
    path = Path(path)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    return pd.DataFrame(result.records, columns=result.columns)


def write_sweep(result: SweepResult, path: PathLike) -> Path:
    """CSV for a .csv suffix, the model's JSON otherwise."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        sweep_frame(result).to_csv(path, index=False)
    else:
        path.write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Sweep written", path=str(path), kind=result.kind, records=len(result.records))
    return path
