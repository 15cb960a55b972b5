"""
The k = 0 family on CP^1 x Sigma_g.

P(g) = A3/g + B3 g^4 + C3 g^2 + 4 solves g^2 P'' - 2 g P' - 4 P + 16 + 6 C3 g^2 = 0.
The roots y < x come from the endpoint ratio alpha = x/y, the coefficients
from P(y) = P(x) = 0 and P'(y) = 2, and P'(x) = -2 is left over as a
consistency certificate. The metric has s = 0, g = h and f = h'.
"""

from typing import Optional, Tuple

import numpy as np

from src.models.geometry import MetricProfile, ProductSpec, TurningPointProblem
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError
from src.utils.logging_util import construction_context, setup_logging

from src.functions.family_params import derive_params
from src.functions.ode_profile import (
    build_profile,
    half_period_agreement,
    integrate_turning_point,
    period_integral,
    product_warp,
)


logger = setup_logging("product-family")

CONSISTENCY_TOLERANCE = 1e-8


def product_endpoints(alpha: float) -> Tuple[float, float]:
    """y = 4(alpha - 1)(alpha^2 + 3 alpha + 1) / (alpha (2 alpha^2 + alpha + 2)), x = alpha y."""
    if not alpha > 1:
        raise DegenerateParameterError(f"The product family needs alpha > 1, got {alpha}")
    if alpha - 1.0 < 1e-2:
        logger.warning("alpha is close to 1; the endpoints collapse to 0", alpha=alpha)

    y = 4.0 * (alpha - 1.0) * (alpha**2 + 3.0 * alpha + 1.0) / (alpha * (2.0 * alpha**2 + alpha + 2.0))
    return y, alpha * y


def product_p(A3: float, B3: float, C3: float):
    def p(g):
        g = np.asarray(g, dtype=float)
        return A3 / g + B3 * g**4 + C3 * g**2 + 4.0

    return p


def product_p_prime(A3: float, B3: float, C3: float):
    def dp(g):
        g = np.asarray(g, dtype=float)
        return -A3 / g**2 + 4.0 * B3 * g**3 + 2.0 * C3 * g

    return dp


def product_p_second(A3: float, B3: float, C3: float):
    def d2p(g):
        g = np.asarray(g, dtype=float)
        return 2.0 * A3 / g**3 + 12.0 * B3 * g**2 + 2.0 * C3

    return d2p


def product_solve_coeffs(y: float, x: float) -> Tuple[float, float, float]:
    """
    Solve P(y) = 0, P(x) = 0, P'(y) = 2 for (A3, B3, C3) and certify P'(x) = -2.

    Raises:
        DegenerateParameterError: Unless 0 < y < x
        InfeasibleParametersError: P'(x) + 2 exceeds the tolerance (certificate 'consistency')
    """
    if not 0 < y < x:
        raise DegenerateParameterError("product_solve_coeffs needs 0 < y < x")

    system = np.array([
        [1.0 / y, y**4, y**2],
        [1.0 / x, x**4, x**2],
        [-1.0 / y**2, 4.0 * y**3, 2.0 * y],
    ])
    rhs = np.array([-4.0, -4.0, 2.0])
    A3, B3, C3 = (float(c) for c in np.linalg.solve(system, rhs))

    terms = (A3 / x**2, 4.0 * B3 * x**3, 2.0 * C3 * x, 2.0)
    residual = abs(-terms[0] + terms[1] + terms[2] + terms[3])
    scale = max(abs(t) for t in terms)
    if residual > CONSISTENCY_TOLERANCE * scale:
        raise InfeasibleParametersError(
            f"P'(x) = -2 fails by {residual:.3e}; (y, x) is off the endpoint curve",
            certificate="consistency",
        )
    logger.debug("Product coefficients solved", A3=A3, B3=B3, C3=C3, residual=residual)
    return A3, B3, C3


def ode_residual(spec: ProductSpec, g) -> np.ndarray:
    """g^2 P'' - 2 g P' - 4 P + 16 + 6 C3 g^2."""
    g = np.asarray(g, dtype=float)
    coeffs = (spec.A3, spec.B3, spec.C3)
    return (g**2 * product_p_second(*coeffs)(g) - 2.0 * g * product_p_prime(*coeffs)(g)
            - 4.0 * product_p(*coeffs)(g) + 16.0 + 6.0 * spec.C3 * g**2)


def product_spec(alpha: float) -> ProductSpec:
    y, x = product_endpoints(alpha)
    A3, B3, C3 = product_solve_coeffs(y, x)
    return ProductSpec(alpha=alpha, y=y, x=x, A3=A3, B3=B3, C3=C3)


def product_eigenvalues(spec: ProductSpec, h) -> Tuple:
    """lambda = -10 B3 h^2 - 3 C3 and mu = -5 B3 h^2 - 3 C3."""
    h = np.asarray(h, dtype=float)
    lam = -10.0 * spec.B3 * h**2 - 3.0 * spec.C3
    mu = -5.0 * spec.B3 * h**2 - 3.0 * spec.C3
    if lam.ndim == 0:
        return float(lam), float(mu)
    return lam, mu


def product_problem(spec: ProductSpec) -> TurningPointProblem:
    coeffs = (spec.A3, spec.B3, spec.C3)
    return TurningPointProblem(q=product_p(*coeffs), dq=product_p_prime(*coeffs), d2q=product_p_second(*coeffs),
                               x0=spec.y, x1=spec.x)


def product_profile(spec: ProductSpec, genus: int = 2, grid_points: Optional[int] = None) -> MetricProfile:
    """
    Integrate h'' = P'(h)/2 between y and x with g = h and f = h'.

    Raises:
        InfeasibleParametersError: P is not positive on (y, x) (certificate 'positivity')
    """
    params = derive_params(genus, 0, A=1, product=True)
    try:
        problem = product_problem(spec)
    except ValueError as e:
        raise InfeasibleParametersError(f"P is not admissible on ({spec.y}, {spec.x}): {e}",
                                        certificate="positivity") from e

    with construction_context(logger, "product", alpha=spec.alpha, genus=genus):
        sol = integrate_turning_point(problem, grid_points=grid_points)
        metadata = {
            "params": params.model_dump(),
            "coefficients": {"A3": spec.A3, "B3": spec.B3, "C3": spec.C3, "alpha": spec.alpha,
                             "x": spec.x, "y": spec.y, "D_effective": -5.0 * spec.B3},
            "half_period_quadrature": 0.5 * period_integral(problem.q, spec.y, spec.x, problem.dq),
            "gray_constant": spec.gray_constant,
        }
        profile = build_profile(sol, 0.0, params.A, K=params.K, problem=problem, warp=product_warp(),
                                family_tag="product", metadata=metadata)

    half_period_agreement(profile)
    return profile
