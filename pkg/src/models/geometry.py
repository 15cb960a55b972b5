"""
Pydantic models for the cohomogeneity-one construction.

Value types are frozen; numerical arrays are converted to read-only float
numpy arrays on validation so a constructed profile can be shared freely.
"""

import math
from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Sign = Literal[-1, 0, 1]
Branch = Literal[-1, 1]
FamilyTag = Literal[
    "gray-symmetric",
    "gray-asymmetric",
    "einstein",
    "kahler",
    "product",
    "custom",
]

SYMMETRIC_FAMILIES = frozenset({"gray-symmetric", "einstein"})


def _frozen_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != 1:
        raise ValueError("Profile arrays must be one-dimensional")
    array.setflags(write=False)
    return array


def curvature_for_genus(genus: int) -> int:
    """Constant curvature of the normalized base surface of a given genus."""
    if genus == 0:
        return 4
    if genus == 1:
        return 0
    return -4


class FamilyParams(BaseModel):
    """Discrete and derived parameters shared by every family."""
    model_config = ConfigDict(frozen=True)

    genus: int = Field(..., ge=0, description="Genus of the base curve")
    chern_k: int = Field(..., ge=0, description="Chern number k of the circle bundle")
    K: Literal[-4, 0, 4] = Field(..., description="Constant curvature of the base surface")
    s: float = Field(..., ge=0.0, description="Bundle twist s = 2k/|chi| (or k on a torus)")
    s_numerator: int = Field(..., ge=0, description="Numerator of s in lowest terms")
    s_denominator: int = Field(..., ge=1, description="Denominator of s in lowest terms")
    A: Sign = Field(..., description="Branch of the f-normalization")
    eps: Sign = Field(..., description="Sign epsilon = -sgn(K A)")
    euler_chi: int = Field(..., description="Euler characteristic 2 - 2 genus")
    product: bool = Field(default=False, description="k = 0 product-surface family")

    @property
    def s_exact(self) -> Fraction:
        return Fraction(self.s_numerator, self.s_denominator)

    @model_validator(mode="after")
    def validate_invariants(self) -> "FamilyParams":
        if self.K != curvature_for_genus(self.genus):
            raise ValueError(f"K={self.K} does not match genus {self.genus}")
        if self.euler_chi != 2 - 2 * self.genus:
            raise ValueError("euler_chi must equal 2 - 2 genus")

        expected = Fraction(self.chern_k) if self.genus == 1 else Fraction(
            2 * self.chern_k, abs(self.euler_chi)
        )
        if self.s_exact != expected:
            raise ValueError(f"s must equal {expected} for genus={self.genus}, k={self.chern_k}")
        if not math.isclose(self.s, float(expected), rel_tol=1e-15, abs_tol=0.0):
            raise ValueError("Real value of s disagrees with its exact value")

        if self.eps != -int(np.sign(self.K * self.A)):
            raise ValueError("eps must equal -sgn(K A)")
        if self.chern_k == 0 and not self.product:
            raise ValueError("chern_k = 0 is only valid for the product family")
        return self


class Coefficients(BaseModel):
    """The coefficient triple (C, D, E) in the raw and the normalized scale."""
    model_config = ConfigDict(frozen=True)

    C_norm: float
    D_norm: float
    E_norm: float
    C_raw: float
    D_raw: float
    E_raw: float
    s: float = Field(..., gt=0.0)

    @classmethod
    def from_normalized(cls, C: float, D: float, E: float, s: float) -> "Coefficients":
        return cls(C_norm=C, D_norm=D, E_norm=E,
                   C_raw=C / s**2, D_raw=D / s**4, E_raw=E * s, s=s)

    @classmethod
    def from_raw(cls, C: float, D: float, E: float, s: float) -> "Coefficients":
        return cls(C_norm=C * s**2, D_norm=D * s**4, E_norm=E / s,
                   C_raw=C, D_raw=D, E_raw=E, s=s)

    @model_validator(mode="after")
    def validate_scales(self) -> "Coefficients":
        s = self.s
        pairs = (
            (self.C_norm, self.C_raw * s**2),
            (self.D_norm, self.D_raw * s**4),
            (self.E_norm, self.E_raw / s),
        )
        for norm, converted in pairs:
            if not math.isclose(norm, converted, rel_tol=1e-12, abs_tol=1e-300):
                raise ValueError("Normalized and raw coefficients are inconsistent")
        return self


class ProfilePolynomial(BaseModel):
    """The degree-6 numerator P of z0(t) = P(t) / (1 - t^2)."""
    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[float, ...] = Field(..., description="Ascending power coefficients of P")
    eps: Sign
    provenance: str = Field(default="p_poly", description="Construction that produced P")
    source: Optional[Coefficients] = Field(default=None, description="(C, D, E) used to build P")

    @field_validator("coefficients")
    @classmethod
    def validate_degree(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(v) != 7:
            raise ValueError("P must be stored with exactly 7 coefficients (degree <= 6)")
        if not all(math.isfinite(c) for c in v):
            raise ValueError("P coefficients must be finite")
        return tuple(float(c) for c in v)

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def __call__(self, t):
        return self.polynomial(t)

    def z0(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(np.isclose(np.abs(t), 1.0, rtol=0.0, atol=1e-14)):
            raise ValueError("z0 has a pole at t = +-1")
        return self.polynomial(t) / (1.0 - t * t)

    def z0_prime(self, t):
        t = np.asarray(t, dtype=float)
        p = self.polynomial
        w = 1.0 - t * t
        return (p.deriv()(t) * w + 2.0 * t * p(t)) / w**2

    def z0_second(self, t):
        t = np.asarray(t, dtype=float)
        p = self.polynomial
        w = 1.0 - t * t
        first = p.deriv()(t) * w + 2.0 * t * p(t)
        return (p.deriv(2)(t) * w + 2.0 * p(t)) / w**2 + 4.0 * t * first / w**3

    @property
    def odd_part(self) -> float:
        return max(abs(c) for c in self.coefficients[1::2])


class BoundaryPair(BaseModel):
    """Endpoint pair (x, y) of the profile polynomial's positivity interval."""
    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    branch: Branch = -1

    @model_validator(mode="after")
    def validate_region(self) -> "BoundaryPair":
        if not self.y < self.x:
            raise ValueError("Boundary pair requires y < x")
        if self.branch == -1 and not (-1.0 < self.y and self.x < 1.0):
            raise ValueError("Branch A=-1 requires -1 < y < x < 1")
        if self.branch == 1 and not self.y > 1.0:
            raise ValueError("Branch A=+1 requires 1 < y < x")
        return self

    @property
    def symmetric(self) -> bool:
        return math.isclose(self.x, -self.y, rel_tol=0.0, abs_tol=1e-12)


class TurningPointProblem(BaseModel):
    """Autonomous problem phi'' = Q'(phi)/2 between two simple roots of Q."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: Callable[[Any], Any] = Field(..., description="Q on [x0, x1]")
    dq: Callable[[Any], Any] = Field(..., description="Q'")
    d2q: Optional[Callable[[Any], Any]] = Field(default=None, description="Q'' (for exact jets)")
    x0: float = Field(..., description="Lower simple root")
    x1: float = Field(..., description="Upper simple root")
    root_slope_floor: float = Field(default=1e-8, gt=0.0)

    @model_validator(mode="after")
    def validate_roots(self) -> "TurningPointProblem":
        if not self.x0 < self.x1:
            raise ValueError("Turning-point problem requires x0 < x1")

        interior = self.x0 + (self.x1 - self.x0) * (0.5 - 0.5 * np.cos(np.linspace(0, np.pi, 203)[1:-1]))
        values = np.asarray(self.q(interior), dtype=float)
        if not np.all(values > 0):
            raise ValueError("Q must be positive between its roots")

        scale = float(np.max(values))
        for root in (self.x0, self.x1):
            if abs(float(self.q(root))) > 1e-8 * max(scale, 1.0):
                raise ValueError(f"Q does not vanish at {root}")
        if not float(self.dq(self.x0)) > self.root_slope_floor:
            raise ValueError("Root x0 is not simple (Q'(x0) must be positive)")
        if not float(self.dq(self.x1)) < -self.root_slope_floor:
            raise ValueError("Root x1 is not simple (Q'(x1) must be negative)")
        return self


class PeriodicSolution(BaseModel):
    """One turning-point-to-turning-point sweep of a turning-point solution."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: np.ndarray = Field(..., description="Uniform sample times on [0, l]")
    phi: np.ndarray
    dphi: np.ndarray
    l: float = Field(..., gt=0.0, description="Time from the upper to the lower turning point")
    x0: float
    x1: float
    ddphi_start: float = Field(..., description="phi'' at tau = 0")
    ddphi_end: float = Field(..., description="phi'' at tau = l")
    dense: Callable[[Any], Any] = Field(..., description="(phi, phi') for tau in [0, l + overshoot]")
    overshoot: float = Field(default=0.0, ge=0.0)

    @field_validator("tau", "phi", "dphi", mode="before")
    @classmethod
    def convert(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_samples(self) -> "PeriodicSolution":
        if not (len(self.tau) == len(self.phi) == len(self.dphi)):
            raise ValueError("Solution arrays must have equal length")
        return self


class MetricProfile(BaseModel):
    """Sampled warping functions f, g (and h) of dt^2 + f^2 theta^2 - g^2 g_base."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: float = Field(..., gt=0.0, description="Half-domain length; the domain is [-a, a]")
    t_grid: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: Optional[np.ndarray] = None
    s: float = Field(..., ge=0.0)
    K: Literal[-4, 0, 4]
    family_tag: FamilyTag = "custom"
    df: Optional[np.ndarray] = None
    d2f: Optional[np.ndarray] = None
    dg: Optional[np.ndarray] = None
    d2g: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("t_grid", "f", "g", mode="before")
    @classmethod
    def convert_required(cls, v):
        return _frozen_array(v)

    @field_validator("h", "df", "d2f", "dg", "d2g", mode="before")
    @classmethod
    def convert_optional(cls, v):
        return None if v is None else _frozen_array(v)

    @model_validator(mode="after")
    def validate_grid(self) -> "MetricProfile":
        n = len(self.t_grid)
        if n < 11:
            raise ValueError("Profile needs at least 11 samples")
        for name in ("f", "g", "h", "df", "d2f", "dg", "d2g"):
            arr = getattr(self, name)
            if arr is not None and len(arr) != n:
                raise ValueError(f"Array {name} must match t_grid length")
        if not np.all(np.diff(self.t_grid) > 0):
            raise ValueError("t_grid must be strictly increasing")
        if not (math.isclose(self.t_grid[0], -self.a, rel_tol=1e-12)
                and math.isclose(self.t_grid[-1], self.a, rel_tol=1e-12)):
            raise ValueError("t_grid must start at -a and end at a")
        return self

    @property
    def spacing(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @property
    def has_jets(self) -> bool:
        return all(getattr(self, n) is not None for n in ("df", "d2f", "dg", "d2g"))

    @property
    def symmetric(self) -> bool:
        return self.family_tag in SYMMETRIC_FAMILIES

    def interior_mask(self, margin: float) -> np.ndarray:
        return np.abs(self.t_grid) <= (1.0 - margin) * self.a

    def replace(self, **arrays: Any) -> "MetricProfile":
        """Copy with some arrays replaced; jets are dropped unless given."""
        data = self.model_dump()
        for jet in ("df", "d2f", "dg", "d2g"):
            data[jet] = arrays.pop(jet, None)
        data.update(arrays)
        return MetricProfile(**data)


class RicciField(BaseModel):
    """Ricci eigenvalues of the ansatz metric sampled on a profile grid."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: np.ndarray
    lambda0: np.ndarray = Field(..., description="Eigenvalue on d/dt")
    lambda1: np.ndarray = Field(..., description="Eigenvalue on the fibre direction")
    lambda2: np.ndarray = Field(..., description="Double eigenvalue on the horizontal plane")
    tau: np.ndarray = Field(..., description="Scalar curvature")
    interior: np.ndarray = Field(..., description="Mask of samples away from the endpoints")

    @field_validator("t", "lambda0", "lambda1", "lambda2", "tau", mode="before")
    @classmethod
    def convert(cls, v):
        return _frozen_array(v)

    @field_validator("interior", mode="before")
    @classmethod
    def convert_mask(cls, v):
        mask = np.array(v, dtype=bool, copy=True)
        mask.setflags(write=False)
        return mask

    @model_validator(mode="after")
    def validate_trace(self) -> "RicciField":
        total = self.lambda0 + self.lambda1 + 2.0 * self.lambda2
        finite = np.isfinite(total)
        if not np.allclose(self.tau[finite], total[finite], rtol=1e-12, atol=1e-12):
            raise ValueError("tau must equal lambda0 + lambda1 + 2 lambda2")
        return self

    @property
    def lam(self) -> np.ndarray:
        return self.lambda0

    @property
    def mu(self) -> np.ndarray:
        return self.lambda2


class EinsteinSpec(BaseModel):
    """One member of the Einstein enumeration on a surface of genus >= 2."""
    model_config = ConfigDict(frozen=True)

    genus: int = Field(..., ge=2)
    k: int = Field(..., ge=1)
    s: float = Field(..., gt=0.0, lt=2.0)
    eps: Literal[-1] = -1
    x_star: float = Field(..., gt=0.0, lt=1.0)
    coeffs: Coefficients

    @model_validator(mode="after")
    def validate_spec(self) -> "EinsteinSpec":
        if not math.isclose(self.s, self.k / (self.genus - 1), rel_tol=1e-15):
            raise ValueError("Einstein spec requires s = k / (genus - 1)")
        if self.coeffs.D_norm != 0.0 or self.coeffs.E_norm != 0.0:
            raise ValueError("Einstein coefficients must have D = E = 0")
        return self


class KahlerSpec(BaseModel):
    """Kahler-branch data; y, x and E are derived from (s, D) when omitted."""
    model_config = ConfigDict(frozen=True)

    s: float = Field(..., gt=0.0, lt=2.0, description="Twist; the branch exists iff 0 < s < 2")
    D: float = Field(..., gt=0.0)
    C: float = 0.0
    E: Optional[float] = Field(default=None, description="(s^2 - 4) / (2 D)")
    y: Optional[float] = Field(default=None, description="(2(2 - s)/D)^(1/4)")
    x: Optional[float] = Field(default=None, description="(2(2 + s)/D)^(1/4)")
    K: Literal[-4] = -4

    @model_validator(mode="before")
    @classmethod
    def derive_endpoints(cls, data: Any) -> Any:
        if isinstance(data, dict):
            s, D = data.get("s"), data.get("D")
            if isinstance(s, (int, float)) and isinstance(D, (int, float)) and 0 < s < 2 and D > 0:
                data = dict(data)
                data.setdefault("E", (s * s - 4.0) / (2.0 * D))
                data.setdefault("y", (2.0 * (2.0 - s) / D) ** 0.25)
                data.setdefault("x", (2.0 * (2.0 + s) / D) ** 0.25)
        return data

    @model_validator(mode="after")
    def validate_identities(self) -> "KahlerSpec":
        if self.E is None or self.y is None or self.x is None:
            raise ValueError("E, y and x could not be derived from (s, D)")
        if self.C != 0.0:
            raise ValueError("The Kahler branch has C = 0")
        if not self.E < 0:
            raise ValueError("E must be negative")
        lhs = (self.s + 2.0) * self.y**4 + (self.s - 2.0) * self.x**4
        if abs(lhs) > 1e-12 * max(1.0, self.x**4):
            raise ValueError("Endpoints violate (s+2) y^4 + (s-2) x^4 = 0")
        if not 0 < self.y < self.x:
            raise ValueError("Kahler endpoints require 0 < y < x")
        return self


class ProductSpec(BaseModel):
    """Coefficient data of the k = 0 family on CP^1 x Sigma_g."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., gt=1.0, description="Endpoint ratio x / y")
    y: float = Field(..., gt=0.0)
    x: float = Field(..., gt=0.0)
    A3: float
    B3: float
    C3: float
    K: Literal[-4] = -4
    s: Literal[0] = 0

    @model_validator(mode="after")
    def validate_signs(self) -> "ProductSpec":
        if not math.isclose(self.x, self.alpha * self.y, rel_tol=1e-12):
            raise ValueError("Product endpoints require x = alpha y")
        if not (self.C3 > 0 and self.A3 < 0 and self.B3 < 0):
            raise ValueError("Product coefficients require C > 0 and A, B < 0")
        return self

    @property
    def gray_constant(self) -> float:
        """lambda - 2 mu = 3 C3."""
        return 3.0 * self.C3


class AsymmetricSearch(BaseModel):
    """Outcome of the search for an x != -y solution at fixed s."""
    model_config = ConfigDict(frozen=True)

    s: float
    status: Literal["found", "none", "inconclusive"]
    pair: Optional[BoundaryPair] = None
    min_g: float = Field(..., description="Smallest G value located on the region")
    candidates_tried: int = 0


class EtaEstimate(BaseModel):
    """Bracketed supremum of s admitting asymmetric epsilon = -1 solutions."""
    model_config = ConfigDict(frozen=True)

    value: float
    bracket: Tuple[float, float]
    iterations: int
    witness: Optional[BoundaryPair] = None

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


__all__: List[str] = [
    "AsymmetricSearch",
    "BoundaryPair",
    "Coefficients",
    "EinsteinSpec",
    "EtaEstimate",
    "FamilyParams",
    "FamilyTag",
    "KahlerSpec",
    "MetricProfile",
    "PeriodicSolution",
    "ProductSpec",
    "ProfilePolynomial",
    "RicciField",
    "SYMMETRIC_FAMILIES",
    "TurningPointProblem",
    "curvature_for_genus",
]
