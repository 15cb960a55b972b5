"""
The Kahler (A = 0) branch: P(g) = -(D/8) g^4 - (C/6) g^2 + E/g^4 - K/4 with
C = 0 and K = -4, endpoints y, x with (1/2) y P'(y) = s and (1/2) x P'(x) = -s,
and f = g g' / s.
"""

from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from src.models.geometry import FamilyParams, KahlerSpec, MetricProfile, TurningPointProblem
from src.models.reports import VerificationReport
from src.utils.config import get_global_config
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError
from src.utils.logging_util import construction_context, setup_logging

from src.functions.ode_profile import (
    build_profile,
    half_period_agreement,
    integrate_turning_point,
    kahler_warp,
    period_integral,
)


logger = setup_logging("kahler-family")


def kahler_spec(s: float, D: float) -> KahlerSpec:
    """
    Validated spec for (s, D).

    Raises:
        InfeasibleParametersError: s outside (0, 2) or D <= 0 (certificate 'kahler-window')
    """
    if not 0 < s < 2:
        raise InfeasibleParametersError(f"The Kahler branch exists only for 0 < s < 2, got s={s}",
                                        certificate="kahler-window")
    if D <= 0:
        raise InfeasibleParametersError(f"The Kahler branch needs D > 0, got D={D}",
                                        certificate="kahler-window")
    return KahlerSpec(s=s, D=D)


def kahler_p(spec: KahlerSpec):
    """P as a vectorized function of g > 0."""

    def p(g):
        g = np.asarray(g, dtype=float)
        if np.any(g <= 0):
            raise DegenerateParameterError("P is evaluated at g > 0 only")
        return -(spec.D / 8.0) * g**4 - (spec.C / 6.0) * g**2 + spec.E / g**4 - spec.K / 4.0

    return p


def kahler_p_prime(spec: KahlerSpec):
    def dp(g):
        g = np.asarray(g, dtype=float)
        return -(spec.D / 2.0) * g**3 - (spec.C / 3.0) * g - 4.0 * spec.E / g**5

    return dp


def kahler_p_second(spec: KahlerSpec):
    def d2p(g):
        g = np.asarray(g, dtype=float)
        return -1.5 * spec.D * g**2 - spec.C / 3.0 + 20.0 * spec.E / g**6

    return d2p


def ode_residual(spec: KahlerSpec, g) -> np.ndarray:
    """P'(g) + (4/g) P(g) + K/g + D g^3 + C g, zero for the closed form."""
    g = np.asarray(g, dtype=float)
    return (kahler_p_prime(spec)(g) + 4.0 * kahler_p(spec)(g) / g
            + spec.K / g + spec.D * g**3 + spec.C * g)


def quartic_in_u(spec: KahlerSpec) -> Polynomial:
    """g^4 P(g) written in u = g^2."""
    return Polynomial([spec.E, 0.0, -spec.K / 4.0, -spec.C / 6.0, -spec.D / 8.0])


def positive_roots(spec: KahlerSpec) -> np.ndarray:
    """Positive roots g of P, from the real positive roots u of g^4 P."""
    roots = quartic_in_u(spec).roots()
    real = roots[np.abs(roots.imag) <= 1e-10 * np.maximum(1.0, np.abs(roots))].real
    return np.sort(np.sqrt(real[real > 0]))


def kahler_boundary_residuals(spec: KahlerSpec, tolerances=None) -> VerificationReport:
    """(1/2) y P'(y) = s, (1/2) x P'(x) = -s, P(y) = P(x) = 0, P > 0 on (y, x) and two positive roots."""
    tol = (tolerances or get_global_config().tolerances())["boundary_value"]
    p, dp = kahler_p(spec), kahler_p_prime(spec)
    y, x, s = spec.y, spec.x, spec.s

    report = VerificationReport(title="kahler-boundary", metadata={"s": s, "D": spec.D, "E": spec.E})
    report.add("y P'(y)/2 - s", abs(0.5 * y * float(dp(y)) - s), tol)
    report.add("x P'(x)/2 + s", abs(0.5 * x * float(dp(x)) + s), tol)
    report.add("P(y)", abs(float(p(y))), tol)
    report.add("P(x)", abs(float(p(x))), tol)

    interior = y + (x - y) * (0.5 - 0.5 * np.cos(np.linspace(0.0, np.pi, 259)[1:-1]))
    report.add("min P on (y, x)", float(np.min(p(interior))), 0.0, comparison="gt")
    report.add("positive root count - 2", float(abs(len(positive_roots(spec)) - 2)), 0.0)
    return report


def kahler_problem(spec: KahlerSpec) -> TurningPointProblem:
    return TurningPointProblem(q=kahler_p(spec), dq=kahler_p_prime(spec), d2q=kahler_p_second(spec),
                               x0=spec.y, x1=spec.x)


def kahler_profile(spec: KahlerSpec, params: Optional[FamilyParams] = None,
                   grid_points: Optional[int] = None) -> MetricProfile:
    """
    Integrate g'' = P'(g)/2 between y and x and set f = g g'/s.

    Raises:
        InfeasibleParametersError: P is not positive on (y, x) (certificate 'positivity')
    """
    boundary = kahler_boundary_residuals(spec)
    if not boundary.entry("min P on (y, x)").passed:
        raise InfeasibleParametersError("P is not positive between its roots", certificate="positivity")

    with construction_context(logger, "kahler", s=spec.s, D=spec.D):
        problem = kahler_problem(spec)
        sol = integrate_turning_point(problem, grid_points=grid_points)
        metadata = {
            "coefficients": {"D": spec.D, "C": spec.C, "E": spec.E, "x": spec.x, "y": spec.y},
            "half_period_quadrature": 0.5 * period_integral(problem.q, spec.y, spec.x, problem.dq),
        }
        if params is not None:
            metadata["params"] = params.model_dump()
        profile = build_profile(sol, spec.s, 0, K=spec.K, problem=problem, warp=kahler_warp(spec.s),
                                family_tag="kahler", metadata=metadata)
    half_period_agreement(profile)
    return profile
