"""
Boundary algebra of the Gray family.

The profile polynomial P, the rational function z0 = P / (1 - t^2), the
closed-form and linear solvers for (C, D, E), the compatibility function G,
the symmetric positivity threshold eps_s and the numeric search for the
supremum eta of s admitting asymmetric solutions.

All formulas use the normalized coefficient scale (C s^2, D s^4, E / s).
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq, minimize_scalar

from src.models.geometry import (
    AsymmetricSearch,
    BoundaryPair,
    Coefficients,
    EtaEstimate,
    ProfilePolynomial,
)
from src.utils.errors import (
    ConvergenceError,
    DegenerateParameterError,
    InfeasibleParametersError,
    RankDeficientError,
)
from src.utils.logging_util import setup_logging


logger = setup_logging("gray-solver")

# Basis of P split by unknown: P = eps*E0 + C*EC + D*ED + E*t
_BASIS_EPS = Polynomial([-4.0, 0.0, -4.0])
_BASIS_C = Polynomial([1.0, 0.0, 2.0, 0.0, -1.0 / 3.0])
_BASIS_D = Polynomial([-1.0, 0.0, -3.0, 0.0, 1.0, 0.0, -1.0 / 5.0])
_BASIS_E = Polynomial([0.0, 1.0])

_DENOMINATOR_FLOOR = 1e-8
_ROOT_SLOPE_FLOOR = 1e-8
# brentq rejects rtol below 4 * machine epsilon
_ROOT_RTOL = 4.0 * np.finfo(float).eps


def _check_sign(eps: int) -> None:
    if eps not in (-1, 0, 1):
        raise ValueError(f"eps must be -1, 0 or 1, got {eps}")


def p_poly(coeffs: Coefficients, eps: int) -> ProfilePolynomial:
    """P(t) = -4 eps t^2 - D t^6/5 + (D - C/3) t^4 + (2C - 3D) t^2 + E t - 4 eps + C - D."""
    _check_sign(eps)
    C, D, E = coeffs.C_norm, coeffs.D_norm, coeffs.E_norm
    p = eps * _BASIS_EPS + C * _BASIS_C + D * _BASIS_D + E * _BASIS_E
    padded = np.zeros(7)
    padded[: len(p.coef)] = p.coef
    return ProfilePolynomial(coefficients=tuple(padded), eps=eps, provenance="p_poly", source=coeffs)


def z0_eval(coeffs: Coefficients, eps: int, t: float) -> float:
    """z0(t) from the normalized coefficients; rejects the poles t = +-1."""
    _check_sign(eps)
    if math.isclose(abs(t), 1.0, rel_tol=0.0, abs_tol=1e-14):
        raise DegenerateParameterError("z0 has a pole at t = +-1")
    C, D, E = coeffs.C_norm, coeffs.D_norm, coeffs.E_norm
    numerator = (
        -4.0 * eps * (1.0 + t * t)
        + D * (-t**6 / 5.0 + t**4 - 3.0 * t * t - 1.0)
        + C * (-t**4 / 3.0 + 2.0 * t * t + 1.0)
        + E * t
    )
    return numerator / (1.0 - t * t)


def solve_CD(x: float, E: float, s: float, eps: int) -> Tuple[float, float]:
    """
    Closed-form (C, D) making z0(x) = 0 and z0'(x) = -2s for given E.

    Raises:
        DegenerateParameterError: x near 0, +-1 or a root of 15 + 10x^2 - x^4
    """
    _check_sign(eps)
    quartic = 15.0 + 10.0 * x**2 - x**4
    if (abs(x) < _DENOMINATOR_FLOOR or abs(abs(x) - 1.0) < _DENOMINATOR_FLOOR
            or abs(quartic) < _DENOMINATOR_FLOOR):
        raise DegenerateParameterError(f"Singular coefficient denominator at x={x}")

    base = 2.0 * (x - 1.0) * x * (x + 1.0)
    D = 5.0 * (
        -3.0 * E - 6.0 * s - 24.0 * eps * x + 3.0 * E * x**2
        - 12.0 * s * x**2 - 8.0 * eps * x**3 + 2.0 * s * x**4
    ) / (base * quartic)
    C = 3.0 * (
        5.0 * E + 10.0 * s + 80.0 * eps * x + 30.0 * s * x**2 - 10.0 * E * x**2
        + 5.0 * E * x**4 - 10.0 * s * x**4 - 16.0 * eps * x**5 + 2.0 * s * x**6
    ) / (base * -quartic)
    return C, D


def endpoint_residuals(poly: ProfilePolynomial, s: float, x: float,
                       y: Optional[float] = None) -> Dict[str, float]:
    """Residuals of P(x) = 0, P'(x) = -2s(1 - x^2) and, with y, of the lower endpoint."""
    p = poly.polynomial
    dp = p.deriv()
    residuals = {
        "P(x)": float(p(x)),
        "P'(x)+2s(1-x^2)": float(dp(x) + 2.0 * s * (1.0 - x * x)),
    }
    if y is not None:
        residuals["P(y)"] = float(p(y))
        residuals["P'(y)-2s(1-y^2)"] = float(dp(y) - 2.0 * s * (1.0 - y * y))
    return residuals


def solve_CDE_pair(pair: BoundaryPair, s: float, eps: int, tolerance: float = 1e-8) -> Coefficients:
    """
    Solve z0(y) = 0, z0(x) = 0, z0'(x) = -2s for (C, D, E) and certify z0'(y) = 2s.

    Raises:
        RankDeficientError: The 3x3 system is singular
        InfeasibleParametersError: The fourth condition fails (certificate 'compatibility')
    """
    _check_sign(eps)
    x, y = pair.x, pair.y
    basis = (_BASIS_C, _BASIS_D, _BASIS_E)
    matrix = np.array([
        [b(y) for b in basis],
        [b(x) for b in basis],
        [b.deriv()(x) for b in basis],
    ])
    rhs = np.array([
        -eps * _BASIS_EPS(y),
        -eps * _BASIS_EPS(x),
        -2.0 * s * (1.0 - x * x) - eps * _BASIS_EPS.deriv()(x),
    ])

    if np.linalg.cond(matrix) > 1e12:
        raise RankDeficientError(f"Boundary system is rank deficient at x={x}, y={y}")
    C, D, E = np.linalg.solve(matrix, rhs)

    coeffs = Coefficients.from_normalized(float(C), float(D), float(E), s)
    poly = p_poly(coeffs, eps)
    residual = abs(endpoint_residuals(poly, s, x, y)["P'(y)-2s(1-y^2)"])
    scale = max(1.0, abs(C), abs(D), abs(E))
    if residual > tolerance * scale:
        raise InfeasibleParametersError(
            f"Pair (x={x}, y={y}) violates z0'(y) = 2s; residual {residual:.3e}",
            certificate="compatibility",
        )
    if pair.symmetric:
        # the exact solution has E = 0
        coeffs = Coefficients.from_normalized(float(C), float(D), 0.0, s)
    return coeffs


def compatibility_g(x, y, s: float, eps: int):
    """The factor G(x, y) of the compatibility condition; vectorized."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (
        -4.0 * eps * (-5.0 * x + x**3 + 5.0 * y + 2.0 * x**2 * y - 2.0 * x * y**2 - y**3)
        + s * (5.0 + 2.0 * x**3 * y + 2.0 * x * y**3 + 3.0 * y**2 + 3.0 * x**2
               + x**2 * y**2 - 16.0 * x * y)
    )


def compatibility_lhs(x: float, y: float, s: float, eps: int) -> float:
    """(x + y) G(x, y); zero exactly when the four boundary conditions are compatible."""
    return float((x + y) * compatibility_g(x, y, s, eps))


def g_partials(x: float, y: float, s: float, eps: int) -> Tuple[float, float]:
    """Partial derivatives (G_x, G_y)."""
    gx = (-4.0 * eps * (-5.0 + 3.0 * x**2 + 4.0 * x * y - 2.0 * y**2)
          + 2.0 * s * (3.0 * x**2 * y + y**2 * x + 3.0 * x - 8.0 * y + y**3))
    gy = (-4.0 * eps * (5.0 + 2.0 * x**2 - 4.0 * x * y - 3.0 * y**2)
          + 2.0 * s * (x**3 + 3.0 * y + x**2 * y - 8.0 * x + 3.0 * x * y**2))
    return float(gx), float(gy)


def symmetric_p(x: float, s: float, eps: int) -> ProfilePolynomial:
    """Closed-form even P for the symmetric pair (x, -x)."""
    _check_sign(eps)
    if not 0.0 < x < 1.0:
        raise DegenerateParameterError("Symmetric construction needs x in (0, 1)")
    x2 = x * x
    denominator = x * (15.0 - 5.0 * x2 - 11.0 * x2**2 + x2**3)
    if abs(denominator) < _DENOMINATOR_FLOOR:
        raise DegenerateParameterError(f"Singular symmetric denominator at x={x}")

    twist_part = s * Polynomial([-15.0 + 10.0 * x2 - 3.0 * x2**2, 0.0,
                                 10.0 + 12.0 * x2 - 6.0 * x2**2, 0.0,
                                 -3.0 - 6.0 * x2 + x2**2])
    sign_part = 4.0 * eps * x * Polynomial([x2 * (-5.0 + x2), 0.0,
                                            5.0 + 2.0 * x2 + x2**2, 0.0,
                                            -(3.0 + x2)])
    p = Polynomial([-x2, 0.0, 1.0]) * (twist_part + sign_part) / denominator
    padded = np.zeros(7)
    padded[: len(p.coef)] = p.coef
    return ProfilePolynomial(coefficients=tuple(padded), eps=eps, provenance="symmetric_p")


def symmetric_p0(x: float, s: float, eps: int) -> float:
    """P(0) of the symmetric polynomial."""
    return (-4.0 * eps * x**4 * (x**2 - 5.0) + s * x * (15.0 - 10.0 * x**2 + 3.0 * x**4)) / (
        15.0 - 5.0 * x**2 - 11.0 * x**4 + x**6
    )


def _eps_s_polynomial(x, s: float):
    return -4.0 * x**3 * (x**2 - 5.0) + s * (-15.0 + 10.0 * x**2 - 3.0 * x**4)


def eps_s(s: float, eps: int) -> float:
    """
    Upper end of the x-interval on which the symmetric P stays positive.

    For eps = -1 and s < 2 this is the first positive root of
    -4x^3(x^2 - 5) + s(-15 + 10x^2 - 3x^4); otherwise 1.
    """
    _check_sign(eps)
    if s <= 0:
        raise DegenerateParameterError("eps_s needs s > 0")
    if eps != -1 or s >= 2.0:
        return 1.0

    grid = np.linspace(0.0, 1.0, 2001)
    values = _eps_s_polynomial(grid, s)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if len(changes) == 0:
        raise ConvergenceError(f"No sign change of the eps_s polynomial on (0, 1] at s={s}")
    i = int(changes[0])
    return float(brentq(_eps_s_polynomial, grid[i], grid[i + 1], args=(s,), xtol=1e-15, rtol=_ROOT_RTOL))


def _chebyshev_nodes(lower: float, upper: float, count: int) -> np.ndarray:
    k = np.arange(count)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * count))[::-1]
    return lower + (upper - lower) * (nodes + 1.0) / 2.0


def positivity_check(poly: ProfilePolynomial, pair: BoundaryPair, samples: int = 257) -> bool:
    """
    True iff z0 > 0 on the open interval (y, x).

    Endpoints must be simple roots of P; interior sign changes are located on
    Chebyshev nodes and refined by bisection, and tangential interior roots
    are caught from the polynomial's real roots.
    """
    p = poly.polynomial
    dp = p.deriv()
    x, y = pair.x, pair.y
    if abs(dp(x)) <= _ROOT_SLOPE_FLOOR or abs(dp(y)) <= _ROOT_SLOPE_FLOOR:
        logger.debug("Endpoint root is not simple", x=x, y=y)
        return False

    nodes = _chebyshev_nodes(y, x, samples)
    values = poly.z0(nodes)
    changes = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if len(changes):
        i = int(changes[0])
        root = brentq(lambda t: float(p(t)), nodes[i], nodes[i + 1])
        logger.debug("Interior root of P", root=root, x=x, y=y)
        return False
    if not np.all(values > 0):
        return False

    width = x - y
    roots = p.roots()
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
    inside = (real > y + 1e-9 * width) & (real < x - 1e-9 * width)
    return not bool(np.any(inside))


def find_asymmetric_pairs(x: float, s: float, eps: int, branch: int = -1,
                          samples: int = 2000, limit: Optional[int] = None) -> List[BoundaryPair]:
    """
    Certified pairs (x, y) with y != -x on the curve G(x, y) = 0.

    A root y of G(x, .) is kept only if the boundary system is feasible and
    z0 is positive on (y, x).
    """
    _check_sign(eps)
    lower = -1.0 if branch == -1 else 1.0
    if not x > lower:
        raise DegenerateParameterError(f"x={x} lies outside the branch A={branch} region")

    margin = 1e-7 * (x - lower)
    ys = np.linspace(lower + margin, x - margin, samples)
    # the minimizer of G(x, .) pins down narrow negative pockets
    pocket = minimize_scalar(
        lambda v: float(compatibility_g(x, v, s, eps)),
        bounds=(lower + margin, x - margin),
        method="bounded",
        options={"xatol": 1e-12},
    )
    ys = np.unique(np.append(ys, pocket.x))
    values = compatibility_g(x, ys, s, eps)

    pairs: List[BoundaryPair] = []
    for i in np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]:
        y = brentq(lambda v: float(compatibility_g(x, v, s, eps)), ys[i], ys[i + 1],
                   xtol=1e-15, rtol=_ROOT_RTOL)
        if abs(x + y) <= 1e-6:
            continue
        pair = BoundaryPair(x=x, y=float(y), branch=branch)
        try:
            coeffs = solve_CDE_pair(pair, s, eps)
        except InfeasibleParametersError:
            continue
        if positivity_check(p_poly(coeffs, eps), pair):
            pairs.append(pair)
            if limit is not None and len(pairs) >= limit:
                break
    return pairs


def _candidate_columns(s: float, eps: int, grid: int, spread: int) -> Tuple[float, List[float]]:
    """Smallest G found on the region F and x-values of its most negative columns."""
    u = np.linspace(-1.0, 1.0, grid)[1:-1]
    X, Y = np.meshgrid(u, u, indexing="ij")
    values = np.where(Y < X, compatibility_g(X, Y, s, eps), np.inf)
    column_min = values.min(axis=1)
    negative_columns = np.nonzero(column_min < 0)[0]

    # the diagonal y = -x hosts the minimum once s >= 2
    diagonal = minimize_scalar(
        lambda v: float(compatibility_g(v, -v, s, eps)),
        bounds=(1e-9, 1.0 - 1e-9),
        method="bounded",
        options={"xatol": 1e-12},
    )
    candidates = []
    if diagonal.fun < 0:
        candidates.append(float(diagonal.x))
    if len(negative_columns):
        # spread the picks over every negative column, most negative first
        picks = np.unique(np.linspace(0, len(negative_columns) - 1, spread).round().astype(int))
        chosen = negative_columns[picks]
        chosen = chosen[np.argsort(column_min[chosen])]
        candidates.extend(float(u[i]) for i in chosen)
    min_g = min(float(column_min.min()), float(diagonal.fun))
    return min_g, candidates


def asymmetric_search(s: float, eps: int = -1, grid: int = 401,
                      max_candidates: int = 25) -> AsymmetricSearch:
    """
    Look for a certified asymmetric pair in F = {-1 < y < x < 1} at fixed s.

    Returns status 'none' when G >= 0 on the sampled region (no asymmetric
    root can exist), 'found' with a witness pair, or 'inconclusive'.
    """
    min_g, candidates = _candidate_columns(s, eps, grid, max_candidates)
    if min_g >= 0:
        return AsymmetricSearch(s=s, status="none", min_g=min_g)

    tried = 0
    for x in candidates[:max_candidates]:
        tried += 1
        pairs = find_asymmetric_pairs(x, s, eps, branch=-1, limit=1)
        if pairs:
            return AsymmetricSearch(s=s, status="found", pair=pairs[0], min_g=min_g,
                                    candidates_tried=tried)

    logger.warning("Asymmetric search inconclusive", s=s, min_g=min_g, candidates_tried=tried)
    return AsymmetricSearch(s=s, status="inconclusive", min_g=min_g, candidates_tried=tried)


def eta_estimate(lower: float = 2.0, upper: float = 2.1, tol: float = 1e-5,
                 grid: int = 401) -> EtaEstimate:
    """
    Bisect on s for the supremum of s admitting asymmetric eps = -1 solutions.

    Raises:
        ConvergenceError: The bracket is not valid or an inner search is inconclusive
    """

    def decide(s: float) -> AsymmetricSearch:
        outcome = asymmetric_search(s, -1, grid=grid)
        if outcome.status == "inconclusive":
            raise ConvergenceError(f"Asymmetric search inconclusive at s={s}")
        return outcome

    low_outcome = decide(lower)
    if low_outcome.status != "found":
        raise ConvergenceError(f"No asymmetric solution at the lower bracket s={lower}")
    if decide(upper).status != "none":
        raise ConvergenceError(f"Asymmetric solutions persist at the upper bracket s={upper}")

    witness = low_outcome.pair
    iterations = 0
    while upper - lower > tol:
        middle = 0.5 * (lower + upper)
        outcome = decide(middle)
        if outcome.status == "found":
            lower, witness = middle, outcome.pair
        else:
            upper = middle
        iterations += 1
        logger.debug("Eta bisection", lower=lower, upper=upper)

    estimate = EtaEstimate(value=0.5 * (lower + upper), bracket=(lower, upper),
                           iterations=iterations, witness=witness)
    logger.info("Eta threshold located", value=estimate.value, width=estimate.width)
    return estimate


def eta_diagonal_reference() -> float:
    """max over u in (0, 1) of (40u + 8u^3) / (5 + 22u^2 - 3u^4), the diagonal zero of G."""
    result = minimize_scalar(
        lambda u: -(40.0 * u + 8.0 * u**3) / (5.0 + 22.0 * u**2 - 3.0 * u**4),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(-result.fun)

