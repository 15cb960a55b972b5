"""
Turning-point integration, half-period quadrature and assembly of metric profiles.

A profile is built in three steps: a positive function Q with two simple
roots defines phi'' = Q'(phi)/2 started at the upper root with zero
velocity; one sweep down to the lower root gives h(t) = phi(a - t) on
[-a, a]; a warp turns (h, h', h'', h''') into the warping functions f, g
and their jets. The boundary and parity checks then verify the result
from the samples alone.
"""

from typing import Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp

from src.models.geometry import (
    BoundaryPair,
    Coefficients,
    FamilyParams,
    MetricProfile,
    PeriodicSolution,
    ProfilePolynomial,
    TurningPointProblem,
)
from src.models.reports import VerificationReport
from src.utils.config import get_global_config
from src.utils.differences import derivative, endpoint_taylor, one_sided_derivative
from src.utils.errors import (
    BranchViolationError,
    ConvergenceError,
    DegenerateParameterError,
    InfeasibleParametersError,
)
from src.utils.logging_util import construction_context, setup_logging

from src.functions.gray_solver import p_poly, positivity_check, solve_CD, solve_CDE_pair


logger = setup_logging("ode-profile")

# (h, h', h'', h''') -> (f, f', f'', g, g', g'')
Warp = Callable[[np.ndarray, np.ndarray, np.ndarray, Optional[np.ndarray]], Tuple]


def period_integral(q: Callable, lower: float, upper: float, dq: Optional[Callable] = None,
                    panels: int = 16, order: int = 32) -> float:
    """
    Integral of dh / sqrt(Q(h)) between two simple roots of Q.

    The substitution h = m + r sin(theta) removes the inverse square-root
    singularities; the smooth integrand is summed with composite
    Gauss-Legendre rules. `q` must accept numpy arrays.
    """
    if not lower < upper:
        raise DegenerateParameterError("period_integral needs lower < upper")
    if dq is not None:
        for root in (lower, upper):
            if abs(float(dq(root))) <= 1e-8:
                raise DegenerateParameterError(f"Root {root} is not simple; the period integral diverges")

    nodes, weights = leggauss(order)
    edges = np.linspace(-0.5 * np.pi, 0.5 * np.pi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    theta = 0.5 * (edges[1:] + edges[:-1])[:, None] + half * nodes
    middle, radius = 0.5 * (upper + lower), 0.5 * (upper - lower)

    values = np.asarray(q(middle + radius * np.sin(theta)), dtype=float)
    if not np.all(values > 0):
        raise DegenerateParameterError("Q must be positive strictly between its roots")
    return float(np.sum(half * weights * radius * np.cos(theta) / np.sqrt(values)))


def half_period(z0: Callable, s: float, x: float, y: Optional[float] = None) -> float:
    """
    Half-domain length a = (1/2) * integral over [sy, sx] of dh / sqrt(z0(h/s)).

    With y omitted the pair is symmetric (y = -x).
    """
    if s <= 0:
        raise DegenerateParameterError("half_period needs s > 0")
    lower = -x if y is None else y
    return 0.5 * s * period_integral(z0, lower, x)


def integrate_turning_point(problem: TurningPointProblem, grid_points: Optional[int] = None,
                            rtol: Optional[float] = None, atol: Optional[float] = None,
                            continuation: float = 0.1) -> PeriodicSolution:
    """
    Solve phi'' = Q'(phi)/2, phi(0) = x1, phi'(0) = 0 down to the lower turning point.

    The run continues a fraction `continuation` of the half-period past
    the turning point so the reflection symmetry there can be measured.

    Raises:
        ConvergenceError: No turning point was reached or phi left [x0, x1]
    """
    config = get_global_config()
    grid_points = grid_points or config.grid_points
    rtol = rtol or config.ode_rtol
    atol = atol or config.ode_atol

    estimate = period_integral(problem.q, problem.x0, problem.x1, problem.dq)
    horizon = (1.0 + 2.0 * continuation + 0.05) * estimate

    def rhs(_, state):
        return [state[1], 0.5 * float(problem.dq(state[0]))]

    def turning_point(_, state):
        return state[1]

    turning_point.direction = 1.0

    result = solve_ivp(rhs, (0.0, horizon), [problem.x1, 0.0], method="DOP853",
                       rtol=rtol, atol=atol, dense_output=True, events=turning_point)
    if not result.success:
        raise ConvergenceError(f"Turning-point integration failed: {result.message}")
    if len(result.t_events[0]) == 0:
        raise ConvergenceError("phi never reached the lower turning point")

    l = float(result.t_events[0][0])
    overshoot = min(continuation * l, horizon - l)
    tau = np.linspace(0.0, l, grid_points)
    phi, dphi = result.sol(tau)

    width = problem.x1 - problem.x0
    slack = 1e-8 * width
    if phi.min() < problem.x0 - slack or phi.max() > problem.x1 + slack:
        raise ConvergenceError("phi left the interval between the roots; check the sign of Q")
    if abs(phi[-1] - problem.x0) > 1e-6 * width:
        raise ConvergenceError(f"Turning point {phi[-1]} does not match the root {problem.x0}")

    logger.debug("Turning-point sweep complete", l=l, quadrature=estimate, steps=len(result.t))
    sol = PeriodicSolution(
        tau=tau,
        phi=phi,
        dphi=dphi,
        l=l,
        x0=problem.x0,
        x1=problem.x1,
        ddphi_start=0.5 * float(problem.dq(problem.x1)),
        ddphi_end=0.5 * float(problem.dq(phi[-1])),
        dense=result.sol,
        overshoot=overshoot,
    )
    energy = energy_residual(sol, problem)
    if energy > config.tolerances()["energy"]:
        logger.warning("Energy identity drift above tolerance", energy_residual=energy)
    return sol


def reflection_residual(sol: PeriodicSolution, delta: float, samples: int = 50) -> float:
    """max over 0 < d <= delta of |phi(l + d) - phi(l - d)|."""
    if not 0 < delta <= sol.overshoot:
        raise ValueError(f"delta must lie in (0, {sol.overshoot}]")
    offsets = np.linspace(delta / samples, delta, samples)
    after = sol.dense(sol.l + offsets)[0]
    before = sol.dense(sol.l - offsets)[0]
    return float(np.max(np.abs(after - before)))


def energy_residual(sol: PeriodicSolution, problem: TurningPointProblem) -> float:
    """sup |phi'^2 - Q(phi)| relative to max |Q(phi)| over the samples."""
    q = np.asarray(problem.q(sol.phi), dtype=float)
    return float(np.max(np.abs(sol.dphi**2 - q)) / max(float(np.max(np.abs(q))), 1e-300))


def gray_warp(s: float, A: int) -> Warp:
    """f = h', g = sqrt(|s^2 - h^2|) on the A = -1 / A = +1 branch."""
    sign = -1.0 if A == -1 else 1.0

    def warp(h, dh, ddh, dddh):
        radicand = sign * (h * h - s * s)
        if np.any(radicand <= 0):
            raise BranchViolationError(f"g vanishes inside the domain on the A={A} branch")
        g = np.sqrt(radicand)
        dg = sign * h * dh / g
        d2g = (sign * (dh * dh + h * ddh) - dg * dg) / g
        return dh, ddh, dddh, g, dg, d2g

    return warp


def kahler_warp(s: float) -> Warp:
    """g = h, f = g g' / s."""
    if s <= 0:
        raise DegenerateParameterError("The Kahler warp needs s > 0")

    def warp(h, dh, ddh, dddh):
        f = h * dh / s
        df = (dh * dh + h * ddh) / s
        d2f = None if dddh is None else (3.0 * dh * ddh + h * dddh) / s
        return f, df, d2f, h, dh, ddh

    return warp


def product_warp() -> Warp:
    """g = h, f = g'."""

    def warp(h, dh, ddh, dddh):
        return dh, ddh, dddh, h, dh, ddh

    return warp


def build_profile(sol: PeriodicSolution, s: float, A: int, *, K: int = -4,
                  problem: Optional[TurningPointProblem] = None, warp: Optional[Warp] = None,
                  family_tag: str = "custom", metadata: Optional[Dict] = None) -> MetricProfile:
    """
    Assemble (f, g) on [-a, a] from h(t) = phi(a - t), a = l/2.

    Exact jets are attached when `problem` carries Q' and Q''. The default
    warp follows A: Gray for A = +-1, Kahler for A = 0.
    """
    if warp is None:
        warp = kahler_warp(s) if A == 0 else gray_warp(s, A)

    a = 0.5 * sol.l
    t_grid = np.linspace(-a, a, len(sol.tau))
    h = sol.phi[::-1].copy()
    dh = -sol.dphi[::-1]
    # the turning points are exact
    h[0], h[-1] = sol.x0, sol.x1
    dh[0] = dh[-1] = 0.0

    if problem is not None:
        ddh = 0.5 * np.asarray(problem.dq(h), dtype=float)
        dddh = None if problem.d2q is None else 0.5 * np.asarray(problem.d2q(h), dtype=float) * dh
    else:
        ddh, dddh = derivative(dh, t_grid[1] - t_grid[0]), None

    f, df, d2f, g, dg, d2g = warp(h, dh, ddh, dddh)
    jets = {"df": df, "d2f": d2f, "dg": dg, "d2g": d2g} if problem is not None and d2f is not None else {}

    info = dict(metadata or {})
    info.update({"l": sol.l, "x0": sol.x0, "x1": sol.x1})
    if sol.overshoot > 0:
        info["reflection_residual"] = reflection_residual(sol, min(sol.overshoot, 0.05 * sol.l))
    if problem is not None:
        info["energy_residual"] = energy_residual(sol, problem)

    return MetricProfile(a=a, t_grid=t_grid, f=f, g=g, h=h, s=s, K=K,
                         family_tag=family_tag, metadata=info, **jets)


def _gray_problem(poly: ProfilePolynomial, s: float, pair: BoundaryPair) -> TurningPointProblem:
    """Q(h) = z0(h/s) on [s y, s x]."""
    return TurningPointProblem(
        q=lambda h: poly.z0(np.asarray(h) / s),
        dq=lambda h: poly.z0_prime(np.asarray(h) / s) / s,
        d2q=lambda h: poly.z0_second(np.asarray(h) / s) / (s * s),
        x0=s * pair.y,
        x1=s * pair.x,
    )


def _coefficient_block(coeffs: Coefficients) -> Dict[str, float]:
    return coeffs.model_dump(exclude={"s"})


def profile_from_coefficients(params: FamilyParams, pair: BoundaryPair, coeffs: Coefficients,
                              family_tag: str, grid_points: Optional[int] = None) -> MetricProfile:
    """
    Certify positivity of z0 on (y, x), integrate Q(h) = z0(h/s) and assemble the profile.

    Raises:
        InfeasibleParametersError: z0 is not positive between the roots (certificate 'positivity')
    """
    s, eps = params.s, params.eps
    poly = p_poly(coeffs, eps)
    if not positivity_check(poly, pair):
        raise InfeasibleParametersError(
            f"z0 is not positive on ({pair.y}, {pair.x})", certificate="positivity"
        )

    problem = _gray_problem(poly, s, pair)
    sol = integrate_turning_point(problem, grid_points=grid_points)
    quadrature = half_period(poly.z0, s, pair.x, pair.y)
    profile = build_profile(
        sol, s, params.A, K=params.K, problem=problem, family_tag=family_tag,
        metadata={
            "params": params.model_dump(),
            "coefficients": {**_coefficient_block(coeffs), "x": pair.x, "y": pair.y},
            "eps": eps,
            "half_period_quadrature": quadrature,
        },
    )

    half_period_agreement(profile)
    return profile


def half_period_agreement(profile: MetricProfile) -> float:
    """
    Relative gap between the ODE half-period a and the quadrature value in the metadata.

    Logs a warning when the gap exceeds the `period` tolerance.
    """
    quadrature = float(profile.metadata["half_period_quadrature"])
    relative = abs(profile.a - quadrature) / quadrature
    if relative > get_global_config().tolerances()["period"]:
        logger.warning("Quadrature and ODE half-periods disagree", family=profile.family_tag,
                       a=profile.a, quadrature=quadrature, relative=relative)
    return relative


def gray_profile(params: FamilyParams, x: float, y: Optional[float] = None,
                 grid_points: Optional[int] = None) -> MetricProfile:
    """
    Gray profile for the boundary pair (x, y); y = None selects the symmetric pair (x, -x).

    Raises:
        DegenerateParameterError: A = 0, s = 0 or a singular closed form
        InfeasibleParametersError: Compatibility or positivity fails
    """
    if params.A == 0:
        raise DegenerateParameterError("A = 0 is the Kahler branch; use kahler_profile")
    if params.s <= 0:
        raise DegenerateParameterError("The Gray construction needs s > 0")

    s, eps = params.s, params.eps
    symmetric = y is None
    family_tag = "gray-symmetric" if symmetric else "gray-asymmetric"

    with construction_context(logger, family_tag, genus=params.genus, k=params.chern_k, x=x, y=y):
        if symmetric:
            if params.A != -1:
                raise DegenerateParameterError("Symmetric pairs exist only on the A = -1 branch")
            pair = BoundaryPair(x=x, y=-x, branch=-1)
            C, D = solve_CD(x, 0.0, s, eps)
            coeffs = Coefficients.from_normalized(C, D, 0.0, s)
        else:
            pair = BoundaryPair(x=x, y=y, branch=params.A)
            coeffs = solve_CDE_pair(pair, s, eps, tolerance=get_global_config().tolerances()["feasibility"])
        return profile_from_coefficients(params, pair, coeffs, family_tag, grid_points)


def check_boundary(profile: MetricProfile, tolerances: Optional[Dict[str, float]] = None) -> VerificationReport:
    """Endpoint conditions f(+-a) = 0, f'(-a) = 1, f'(a) = -1, g'(+-a) = 0, g(+-a) != 0."""
    tol = tolerances or get_global_config().tolerances()
    value_tol, slope_tol = tol["boundary_value"], tol["boundary_derivative"]
    spacing = profile.spacing
    f, g = profile.f, profile.g

    report = VerificationReport(title="boundary", metadata={"a": profile.a, "method": "one-sided 4th order"})
    report.add("f(-a)", abs(f[0]), value_tol)
    report.add("f(a)", abs(f[-1]), value_tol)
    report.add("f'(-a)-1", abs(one_sided_derivative(f, spacing, "left") - 1.0), slope_tol)
    report.add("f'(a)+1", abs(one_sided_derivative(f, spacing, "right") + 1.0), slope_tol)
    report.add("g'(-a)", abs(one_sided_derivative(g, spacing, "left")), slope_tol)
    report.add("g'(a)", abs(one_sided_derivative(g, spacing, "right")), slope_tol)
    report.add("|g(-a)|", abs(g[0]), value_tol, comparison="gt")
    report.add("|g(a)|", abs(g[-1]), value_tol, comparison="gt")
    return report


def _endpoint_jets(profile: MetricProfile, end: str) -> Tuple[float, float, float, float, float]:
    """(f, f', f''/2, g, g') at one end: exact jets when attached, local fits otherwise."""
    if profile.has_jets:
        i = 0 if end == "left" else -1
        return (float(profile.f[i]), float(profile.df[i]), 0.5 * float(profile.d2f[i]),
                float(profile.g[i]), float(profile.dg[i]))
    cf = endpoint_taylor(profile.t_grid, profile.f, end)
    cg = endpoint_taylor(profile.t_grid, profile.g, end)
    return float(cf[0]), float(cf[1]), float(cf[2]), float(cg[0]), float(cg[1])


def check_parity(profile: MetricProfile, tolerances: Optional[Dict[str, float]] = None,
                 midpoint: Optional[bool] = None) -> VerificationReport:
    """
    f odd and g even about each endpoint; with `midpoint`, f and g even about t = 0.

    Endpoint parity reads f(+-a), f''(+-a) and g'(+-a) from the exact jets
    when the profile carries them (h''' = Q''(h) h' / 2 vanishes at a
    turning point) and from local fits otherwise. Midpoint parity runs by
    default for the symmetric families.
    """
    tol = (tolerances or get_global_config().tolerances())["parity"]
    if midpoint is None:
        midpoint = profile.symmetric
    t, f, g = profile.t_grid, profile.f, profile.g

    report = VerificationReport(title="parity",
                                metadata={"midpoint": midpoint, "jets": "exact" if profile.has_jets else "fit"})
    for end, label in (("left", "-a"), ("right", "a")):
        f0, f1, f2, g0, g1 = _endpoint_jets(profile, end)
        report.add(f"f even part({label})", max(abs(f0), abs(f2)) / max(1.0, abs(f1)), tol)
        report.add(f"g odd part({label})", abs(g1) / max(1.0, abs(g0)), tol)
        cg = endpoint_taylor(t, g, end)
        report.add(f"g cubic({label})", abs(cg[3]) / max(1.0, abs(cg[0])), tol, informational=True)
        if profile.has_jets:
            cf = endpoint_taylor(t, f, end)
            report.add(f"f quadratic fit({label})", abs(cf[2]) / max(1.0, abs(cf[1])), tol, informational=True)

    if "reflection_residual" in profile.metadata:
        scale = max(1.0, float(np.max(np.abs(profile.h)))) if profile.h is not None else 1.0
        report.add("reflection(-a)", profile.metadata["reflection_residual"] / scale, tol)

    if midpoint:
        report.add("f midpoint", float(np.max(np.abs(f - f[::-1]))) / max(1.0, float(np.max(np.abs(f)))), tol)
        report.add("g midpoint", float(np.max(np.abs(g - g[::-1]))) / max(1.0, float(np.max(np.abs(g)))), tol)
    return report
