"""
Four-dimensional finite-difference curvature engine.

The full neutral metric dt^2 + f^2 theta^2 - g^2 g_base is written in local
coordinates (t, psi, u, v) on a chart of the base surface, Christoffel
symbols and the Ricci tensor are obtained by Richardson-extrapolated
central differences, and the tensorial Gray and Killing conditions are
evaluated pointwise. Nothing here uses the closed-form eigenvalues except
the one-point calibration of the connection constant.

Charts by base curvature:

    K = -4: (du^2 + dv^2) / (4 v^2),           theta = dpsi + (c s / v) du
    K =  0: du^2 + dv^2,                       theta = dpsi + c s u dv
    K =  4: (du^2 + sin(u)^2 dv^2) / 4,        theta = dpsi + c s cos(u) dv
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.geometry import FamilyParams, MetricProfile
from src.models.reports import VerificationReport
from src.utils.config import get_global_config
from src.utils.errors import ChartDomainError, ConvergenceError
from src.utils.logging_util import setup_logging

from src.functions.curvature_oracle import profile_interpolants, ricci_eigenvalues


logger = setup_logging("chart-oracle")

Sample = Tuple[np.ndarray, np.ndarray]

# connection constants for which d(theta) = 2 s omega_base
NOMINAL_CONNECTION = {-4: 0.5, 0: 2.0, 4: 0.5}


def _curvature_data(profile: MetricProfile, params: Optional[FamilyParams]) -> Tuple[int, float]:
    """(K, s) of the profile, cross-checked against params when given."""
    if params is not None and (params.K != profile.K or not math.isclose(params.s, profile.s, rel_tol=1e-12)):
        raise ValueError(f"Profile (K={profile.K}, s={profile.s}) does not match params (K={params.K}, s={params.s})")
    return profile.K, profile.s


def _richardson(func, point: np.ndarray, direction: np.ndarray, step: float):
    """Central difference of func along direction, one Richardson halving."""
    coarse = (func(point + step * direction) - func(point - step * direction)) / (2.0 * step)
    half = 0.5 * step
    fine = (func(point + half * direction) - func(point - half * direction)) / (2.0 * half)
    return (4.0 * fine - coarse) / 3.0


class ChartOracle:
    """Finite-difference Ricci engine for one profile on one chart."""

    def __init__(self, profile: MetricProfile, K: int, s: float, connection: float,
                 christoffel_step: Optional[float] = None, gray_step: Optional[float] = None):
        config = get_global_config()
        self.profile = profile
        self.K = K
        self.s = s
        self.connection = connection
        self.christoffel_step = christoffel_step or config.christoffel_step
        self.gray_step = gray_step or config.gray_step
        self._f, self._g = profile_interpolants(profile)

    @classmethod
    def calibrated(cls, profile: MetricProfile, params: Optional[FamilyParams] = None,
                   t: Optional[float] = None) -> "ChartOracle":
        """Oracle with the connection constant fixed by calibrate_connection."""
        K, s = _curvature_data(profile, params)
        return cls(profile, K, s, calibrate_connection(profile, params, t))

    def g_at(self, t: float) -> float:
        return float(self._g(t))

    def _check_domain(self, point: np.ndarray) -> None:
        t, _, u, v = point
        if not -self.profile.a < t < self.profile.a:
            raise ChartDomainError(f"t={t} is outside (-a, a)")
        if self.K == -4 and v <= 0:
            raise ChartDomainError("The half-plane chart needs v > 0")
        if self.K == 4 and not 0 < u < math.pi:
            raise ChartDomainError("The sphere chart needs 0 < u < pi")

    def metric(self, point: Sequence[float]) -> np.ndarray:
        """Component matrix in (t, psi, u, v)."""
        t, _, u, v = point
        f2 = float(self._f(t)) ** 2
        g2 = float(self._g(t)) ** 2
        cs = self.connection * self.s

        G = np.zeros((4, 4))
        G[0, 0] = 1.0
        G[1, 1] = f2
        if self.K == -4:
            b, base = cs / v, 1.0 / (4.0 * v * v)
            G[1, 2] = G[2, 1] = f2 * b
            G[2, 2] = f2 * b * b - g2 * base
            G[3, 3] = -g2 * base
        elif self.K == 0:
            b = cs * u
            G[1, 3] = G[3, 1] = f2 * b
            G[2, 2] = -g2
            G[3, 3] = f2 * b * b - g2
        else:
            b = cs * math.cos(u)
            G[1, 3] = G[3, 1] = f2 * b
            G[2, 2] = -0.25 * g2
            G[3, 3] = f2 * b * b - 0.25 * g2 * math.sin(u) ** 2
        return G

    def base_density(self, point: Sequence[float]) -> float:
        """sqrt(det g_base) of the chart."""
        _, _, u, v = point
        if self.K == -4:
            return 1.0 / (4.0 * v * v)
        if self.K == 0:
            return 1.0
        return 0.25 * abs(math.sin(u))

    def christoffel(self, point: np.ndarray) -> np.ndarray:
        """Gamma[k, i, j] = Gamma^k_ij."""
        G = self.metric(point)
        dG = np.array([_richardson(self.metric, point, e, self.christoffel_step) for e in np.eye(4)])
        # dG[m, i, j] = d_m G_ij
        lowered = 0.5 * (np.einsum("ilj->lij", dG) + np.einsum("jli->lij", dG) - dG)
        return np.einsum("kl,lij->kij", np.linalg.inv(G), lowered)

    def ricci(self, point: Sequence[float]) -> Tuple[np.ndarray, float]:
        """Ricci tensor R_ij and scalar curvature at a point."""
        point = np.asarray(point, dtype=float)
        self._check_domain(point)
        margin = 2.0 * self.christoffel_step
        if not -self.profile.a + margin < point[0] < self.profile.a - margin:
            raise ChartDomainError("Finite-difference stencil leaves (-a, a)")

        gamma = self.christoffel(point)
        dgamma = np.array([_richardson(self.christoffel, point, e, self.christoffel_step) for e in np.eye(4)])
        # dgamma[m, k, i, j] = d_m Gamma^k_ij
        ricci = (
            np.einsum("kkij->ij", dgamma)
            - np.einsum("jkik->ij", dgamma)
            + np.einsum("kkl,lij->ij", gamma, gamma)
            - np.einsum("kjl,lik->ij", gamma, gamma)
        )
        ricci = 0.5 * (ricci + ricci.T)
        tau = float(np.einsum("ij,ij->", np.linalg.inv(self.metric(point)), ricci))
        return ricci, tau

    def eigenvalues(self, point: Sequence[float]) -> Tuple[float, float, float, float]:
        """(lambda0, lambda1, lambda2, tau): d/dt and d/dpsi are eigenvectors of the Ricci endomorphism."""
        point = np.asarray(point, dtype=float)
        ricci, tau = self.ricci(point)
        endomorphism = np.linalg.solve(self.metric(point), ricci)
        lambda0 = float(endomorphism[0, 0])
        lambda1 = float(endomorphism[1, 1])
        return lambda0, lambda1, 0.5 * (tau - lambda0 - lambda1), tau

    def gray_residual(self, point: np.ndarray, direction: np.ndarray) -> Tuple[float, float]:
        """
        (nabla_X rho)(X, X) - (1/3) X(tau) g(X, X) at a point, with its scale.

        X is extended with constant chart components, so
        (nabla_X rho)(X, X) = X(rho(X, X)) - 2 rho(nabla_X X, X).
        """
        point = np.asarray(point, dtype=float)
        X = np.asarray(direction, dtype=float)
        ricci, _ = self.ricci(point)
        gamma = self.christoffel(point)

        def rho_xx(p):
            return float(X @ self.ricci(p)[0] @ X)

        def tau_at(p):
            return self.ricci(p)[1]

        d_rho = _richardson(rho_xx, point, X, self.gray_step)
        d_tau = _richardson(tau_at, point, X, self.gray_step)
        nabla_xx = np.einsum("kij,i,j->k", gamma, X, X)
        value = d_rho - 2.0 * float(nabla_xx @ ricci @ X) - d_tau * float(X @ self.metric(point) @ X) / 3.0
        scale = max(1.0, float(np.max(np.abs(ricci)))) * float(np.linalg.norm(X)) ** 3
        return value, scale

    def killing_residual(self, point: np.ndarray) -> Tuple[float, float]:
        """
        Largest symmetrized component of nabla S with S = Ric - (tau/3) g.

        Uses the full covariant derivative tensor from coordinate derivatives,
        independently of the directional evaluation in gray_residual.
        """
        point = np.asarray(point, dtype=float)

        def traceless(p):
            ricci, tau = self.ricci(p)
            return ricci - tau / 3.0 * self.metric(p)

        S = traceless(point)
        gamma = self.christoffel(point)
        dS = np.array([_richardson(traceless, point, e, self.gray_step) for e in np.eye(4)])
        # nabla_m S_ij = d_m S_ij - Gamma^k_mi S_kj - Gamma^k_mj S_ik
        nabla = dS - np.einsum("kmi,kj->mij", gamma, S) - np.einsum("kmj,ik->mij", gamma, S)
        cyclic = (nabla + np.einsum("mij->ijm", nabla) + np.einsum("mij->jmi", nabla)) / 3.0
        scale = max(1.0, float(np.max(np.abs(S))))
        return float(np.max(np.abs(cyclic))), scale


def _base_point(K: int, rng: np.random.Generator) -> Tuple[float, float]:
    if K == -4:
        return float(rng.uniform(-1.0, 1.0)), float(rng.uniform(0.5, 2.0))
    if K == 0:
        return float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-1.0, 1.0))
    return float(rng.uniform(0.4, math.pi - 0.4)), float(rng.uniform(0.0, 2.0 * math.pi))


def default_sample(profile: MetricProfile, params: Optional[FamilyParams] = None,
                   n: int = 10, seed: int = 0) -> List[Sample]:
    """
    Deterministic interior chart points (on grid nodes in t) with non-null directions.
    """
    rng = np.random.default_rng(seed)
    margin = get_global_config().interior_margin
    nodes = np.nonzero(profile.interior_mask(margin))[0]
    K, s = _curvature_data(profile, params)
    oracle = ChartOracle(profile, K, s, NOMINAL_CONNECTION[K])

    sample: List[Sample] = []
    while len(sample) < n:
        t = float(profile.t_grid[rng.choice(nodes)])
        u, v = _base_point(K, rng)
        point = np.array([t, float(rng.uniform(0.0, 2.0 * math.pi)), u, v])
        direction = rng.normal(size=4)
        direction /= np.linalg.norm(direction)
        if abs(float(direction @ oracle.metric(point) @ direction)) > 1e-2:
            sample.append((point, direction))
    return sample


def chart_metric(profile: MetricProfile, point: Sequence[float], params: Optional[FamilyParams] = None,
                 connection: Optional[float] = None) -> np.ndarray:
    """Metric components at a chart point; the nominal connection constant by default."""
    K, s = _curvature_data(profile, params)
    c = NOMINAL_CONNECTION[K] if connection is None else connection
    oracle = ChartOracle(profile, K, s, c)
    oracle._check_domain(np.asarray(point, dtype=float))
    return oracle.metric(point)


def chart_ricci(profile: MetricProfile, point: Sequence[float], params: Optional[FamilyParams] = None,
                connection: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """Ricci tensor and scalar curvature at a chart point."""
    K, s = _curvature_data(profile, params)
    c = NOMINAL_CONNECTION[K] if connection is None else connection
    return ChartOracle(profile, K, s, c).ricci(point)


def calibrate_connection(profile: MetricProfile, params: Optional[FamilyParams] = None,
                         t: Optional[float] = None) -> float:
    """
    Connection constant c matching the 1-D lambda1 at one interior grid node.

    lambda1 of the chart metric is affine in c^2, so two evaluations fix it.
    Returns 0 when s = 0.
    """
    K, s = _curvature_data(profile, params)
    if s == 0:
        return 0.0
    field = ricci_eigenvalues(profile)
    index = len(profile.t_grid) // 2 if t is None else int(np.argmin(np.abs(profile.t_grid - t)))
    node = float(profile.t_grid[index])
    u, v = (0.3, 1.0) if K == -4 else (0.3, 0.7) if K == 0 else (1.2, 0.5)
    point = [node, 0.0, u, v]

    flat = ChartOracle(profile, K, s, 0.0).eigenvalues(point)[1]
    unit = ChartOracle(profile, K, s, 1.0).eigenvalues(point)[1]
    if abs(unit - flat) < 1e-12:
        raise ConvergenceError("lambda1 does not depend on the connection at the calibration point")
    c_squared = (float(field.lambda1[index]) - flat) / (unit - flat)
    if c_squared <= 0:
        raise ConvergenceError(f"Calibration produced c^2 = {c_squared:.3e}")

    c = math.sqrt(c_squared)
    logger.info("Connection calibrated", c=c, nominal=NOMINAL_CONNECTION[K], t=node)
    return c


def _sample_or_default(profile, params, sample, sample_size, seed):
    return list(sample) if sample is not None else default_sample(profile, params, sample_size, seed)


def check_gray_tensorial(profile: MetricProfile, params: Optional[FamilyParams] = None,
                         sample: Optional[Sequence[Sample]] = None,
                         tolerances: Optional[Dict[str, float]] = None,
                         sample_size: int = 10, seed: int = 0,
                         oracle: Optional[ChartOracle] = None) -> VerificationReport:
    """(nabla_X rho)(X, X) = (1/3) X(tau) g(X, X) at sample points, relative to |rho| |X|^3."""
    tol = (tolerances or get_global_config().tolerances())["chart_derivative"]
    oracle = oracle or ChartOracle.calibrated(profile, params)
    points = _sample_or_default(profile, params, sample, sample_size, seed)

    worst, null_directions = 0.0, 0
    for point, direction in points:
        if abs(float(direction @ oracle.metric(point) @ direction)) < 1e-8:
            null_directions += 1
            logger.warning("Null direction in the Gray sample; the relation is scale-degenerate",
                           point=point.tolist())
        value, scale = oracle.gray_residual(point, direction)
        worst = max(worst, abs(value) / scale)

    report = VerificationReport(title="gray-tensorial",
                                metadata={"points": len(points), "connection": oracle.connection,
                                          "null_directions": null_directions})
    report.add("max residual", worst, tol)
    return report


def check_killing_tensor(profile: MetricProfile, params: Optional[FamilyParams] = None,
                         sample: Optional[Sequence[Sample]] = None,
                         tolerances: Optional[Dict[str, float]] = None,
                         sample_size: int = 4, seed: int = 0,
                         oracle: Optional[ChartOracle] = None) -> VerificationReport:
    """
    S = Ric - (tau/3) g is a Killing tensor at the sample points.

    For the product family the eigenvalues of S are also compared with C3
    (on d/dt and the fibre) and 5 B3 g^2 + C3 (on the horizontal plane).
    """
    tol = tolerances or get_global_config().tolerances()
    oracle = oracle or ChartOracle.calibrated(profile, params)
    points = _sample_or_default(profile, params, sample, sample_size, seed)

    report = VerificationReport(title="killing", metadata={"points": len(points)})
    worst = 0.0
    for point, _ in points:
        value, scale = oracle.killing_residual(point)
        worst = max(worst, value / scale)
    report.add("max symmetrized nabla S", worst, tol["chart_derivative"])

    coefficients = profile.metadata.get("coefficients", {})
    if profile.family_tag == "product" and {"B3", "C3"} <= set(coefficients):
        B3, C3 = coefficients["B3"], coefficients["C3"]
        vertical, horizontal = 0.0, 0.0
        for point, _ in points:
            lambda0, lambda1, lambda2, tau = oracle.eigenvalues(point)
            g = oracle.g_at(point[0])
            vertical = max(vertical, abs(lambda0 - tau / 3.0 - C3), abs(lambda1 - tau / 3.0 - C3))
            horizontal = max(horizontal, abs(lambda2 - tau / 3.0 - (5.0 * B3 * g * g + C3)))
        report.add("S vertical - C3", vertical, tol["killing_product"])
        report.add("S horizontal - (5 B3 g^2 + C3)", horizontal, tol["killing_product"])
    return report


def _engine_pairs(profile, params, sample, sample_size, seed, oracle):
    oracle = oracle or ChartOracle.calibrated(profile, params)
    field = ricci_eigenvalues(profile)
    points = _sample_or_default(profile, params, sample, sample_size, seed)
    for point, _ in points:
        index = int(np.argmin(np.abs(profile.t_grid - point[0])))
        yield oracle, field, index, oracle.eigenvalues(point)


def check_engine_agreement(profile: MetricProfile, params: Optional[FamilyParams] = None,
                           sample_size: int = 10, seed: int = 0, sample: Optional[Sequence[Sample]] = None,
                           tolerances: Optional[Dict[str, float]] = None,
                           oracle: Optional[ChartOracle] = None) -> VerificationReport:
    """1-D and chart eigenvalues agree at the sample points (taken on grid nodes)."""
    tol = (tolerances or get_global_config().tolerances())["chart"]
    worst = {"lambda0": 0.0, "lambda1": 0.0, "lambda2": 0.0}
    connection, points = None, 0
    for oracle_used, field, i, (l0, l1, l2, _) in _engine_pairs(profile, params, sample, sample_size, seed, oracle):
        connection = oracle_used.connection
        points += 1
        scale = max(1.0, abs(field.lambda0[i]), abs(field.lambda2[i]))
        worst["lambda0"] = max(worst["lambda0"], abs(l0 - field.lambda0[i]) / scale)
        worst["lambda1"] = max(worst["lambda1"], abs(l1 - field.lambda1[i]) / scale)
        worst["lambda2"] = max(worst["lambda2"], abs(l2 - field.lambda2[i]) / scale)

    report = VerificationReport(title="engine-agreement", metadata={"connection": connection, "points": points})
    for name, value in worst.items():
        report.add(name, value, tol)
    return report


def check_trace(profile: MetricProfile, params: Optional[FamilyParams] = None,
                sample_size: int = 10, seed: int = 0, sample: Optional[Sequence[Sample]] = None,
                tolerances: Optional[Dict[str, float]] = None,
                oracle: Optional[ChartOracle] = None) -> VerificationReport:
    """Chart scalar curvature against lambda0 + lambda1 + 2 lambda2."""
    tol = (tolerances or get_global_config().tolerances())["chart"]
    worst = 0.0
    for _, field, i, (_, _, _, tau) in _engine_pairs(profile, params, sample, sample_size, seed, oracle):
        worst = max(worst, abs(tau - field.tau[i]) / max(1.0, abs(field.tau[i])))
    report = VerificationReport(title="trace")
    report.add("tau chart - tau 1d", worst, tol)
    return report
