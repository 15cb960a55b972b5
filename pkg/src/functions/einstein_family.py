"""
Einstein members of the Gray family.

Setting D = 0 in the symmetric closed form leaves the quartic
Q(x) = -6s - 24 eps x - 12 s x^2 - 8 eps x^3 + 2 s x^4; for eps = -1 it has
exactly one root in (0, 1) precisely when 0 < s < 2, which yields one Einstein
metric for every k in {1, ..., 2 genus - 3}.
"""

import math
from typing import List, Optional, Tuple

from numpy.polynomial import Polynomial
from scipy.optimize import bisect, newton

from src.models.geometry import BoundaryPair, Coefficients, EinsteinSpec, MetricProfile
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError
from src.utils.logging_util import construction_context, setup_logging

from src.functions.family_params import derive_params
from src.functions.gray_solver import p_poly, positivity_check, solve_CD
from src.functions.ode_profile import profile_from_coefficients


logger = setup_logging("einstein-family")

# Q'(alpha_s) > 0 iff s < sqrt(3 + 2 sqrt(3))
MONOTONICITY_THRESHOLD = math.sqrt(3.0 + 2.0 * math.sqrt(3.0))


def q_poly(s: float, eps: int) -> Polynomial:
    """Q(x) = -6s - 24 eps x - 12 s x^2 - 8 eps x^3 + 2 s x^4."""
    return Polynomial([-6.0 * s, -24.0 * eps, -12.0 * s, -8.0 * eps, 2.0 * s])


def d_at(x: float, s: float, eps: int) -> float:
    """D(x) = 5 Q(x) / (2 (x - 1) x (x + 1) (15 + 10 x^2 - x^4))."""
    denominator = 2.0 * (x - 1.0) * x * (x + 1.0) * (15.0 + 10.0 * x**2 - x**4)
    if abs(denominator) < 1e-8:
        raise DegenerateParameterError(f"Singular D(x) denominator at x={x}")
    return 5.0 * float(q_poly(s, eps)(x)) / denominator


def alpha_s(s: float) -> float:
    """The root s / (sqrt(1 + s^2) + 1) of Q'' in (0, 1) for eps = -1."""
    if s <= 0:
        raise DegenerateParameterError("alpha_s needs s > 0")
    return s / (math.sqrt(1.0 + s * s) + 1.0)


def q_prime_at_alpha(s: float) -> Tuple[float, float]:
    """Q'(alpha_s) evaluated directly and by 16 (2 - (1 + s^2) / (sqrt(1 + s^2) + 1))."""
    direct = float(q_poly(s, -1).deriv()(alpha_s(s)))
    closed = 16.0 * (2.0 - (1.0 + s * s) / (math.sqrt(1.0 + s * s) + 1.0))
    return direct, closed


def q_root(s: float, eps: int) -> Optional[float]:
    """
    The unique root of Q in (0, 1), or None.

    Only eps = -1 with 0 < s < 2 has one: Q(0) = -6s < 0 and Q(1) = 32 - 16s > 0
    bracket it and Q is increasing there.
    """
    if eps != -1 or not 0 < s < 2:
        return None
    q = q_poly(s, eps)
    dq = q.deriv()
    rough = bisect(q, 0.0, 1.0, xtol=1e-10)
    root = float(newton(q, rough, fprime=dq, tol=1e-14))
    if not 0 < root < 1:
        root = float(bisect(q, 0.0, 1.0, xtol=1e-15))
    return root


def einstein_spec(genus: int, k: int) -> EinsteinSpec:
    """
    Einstein data for (genus, k).

    Raises:
        InfeasibleParametersError: s = k / (genus - 1) >= 2 (certificate 'einstein-window')
    """
    params = derive_params(genus, k, A=-1)
    if params.eps != -1:
        raise InfeasibleParametersError("Einstein members need eps = -1 (genus >= 2)",
                                        certificate="einstein-window")
    x_star = q_root(params.s, params.eps)
    if x_star is None:
        raise InfeasibleParametersError(
            f"Q has no root in (0, 1) for s={params.s}; Einstein members need k <= 2 genus - 3",
            certificate="einstein-window",
        )
    C, _ = solve_CD(x_star, 0.0, params.s, -1)
    coeffs = Coefficients.from_normalized(C, 0.0, 0.0, params.s)
    return EinsteinSpec(genus=genus, k=k, s=params.s, x_star=x_star, coeffs=coeffs)


def enumerate_einstein(genus: int) -> List[EinsteinSpec]:
    """One spec per k in {1, ..., 2 genus - 3}; members failing positivity are logged and dropped."""
    if genus < 2:
        raise DegenerateParameterError("Einstein enumeration needs genus >= 2")

    specs = []
    for k in range(1, 2 * genus - 2):
        spec = einstein_spec(genus, k)
        pair = BoundaryPair(x=spec.x_star, y=-spec.x_star)
        if not positivity_check(p_poly(spec.coeffs, -1), pair):
            logger.warning("Einstein candidate fails positivity", genus=genus, k=k, x_star=spec.x_star)
            continue
        specs.append(spec)
    return specs


def einstein_profile(spec: EinsteinSpec, grid_points: Optional[int] = None) -> MetricProfile:
    """Integrate the even quartic P of an Einstein spec and assemble its profile."""
    params = derive_params(spec.genus, spec.k, A=-1)
    pair = BoundaryPair(x=spec.x_star, y=-spec.x_star)
    with construction_context(logger, "einstein", genus=spec.genus, k=spec.k, x_star=spec.x_star):
        profile = profile_from_coefficients(params, pair, spec.coeffs, "einstein", grid_points)
    return profile
