"""
Unit tests for the geometry and report models.
"""

import math

import numpy as np
import pytest

from src.models.geometry import (
    BoundaryPair,
    Coefficients,
    EinsteinSpec,
    KahlerSpec,
    MetricProfile,
    ProductSpec,
    ProfilePolynomial,
    RicciField,
    TurningPointProblem,
    curvature_for_genus,
)
from src.models.reports import ProfileFile, ResidualEntry, SweepResult, VerificationReport


class TestGeometryModels:
    """Validation rules of the value types."""

    @pytest.fixture
    def flat_profile(self):
        t = np.linspace(-1.0, 1.0, 21)
        return MetricProfile(a=1.0, t_grid=t, f=np.cos(t), g=np.ones_like(t), s=0.0, K=0)

    def test_curvature_for_genus(self):
        """Sphere, torus and hyperbolic bases."""
        assert curvature_for_genus(0) == 4
        assert curvature_for_genus(1) == 0
        assert curvature_for_genus(5) == -4

    def test_coefficient_scales(self):
        """Raw and normalized triples convert into each other."""
        coeffs = Coefficients.from_normalized(3.0, 16.0, 1.0, 2.0)
        assert coeffs.C_raw == pytest.approx(0.75)
        assert coeffs.D_raw == pytest.approx(1.0)
        assert coeffs.E_raw == pytest.approx(2.0)

        again = Coefficients.from_raw(coeffs.C_raw, coeffs.D_raw, coeffs.E_raw, 2.0)
        assert again.C_norm == pytest.approx(3.0)
        assert again.D_norm == pytest.approx(16.0)

        with pytest.raises(ValueError, match="inconsistent"):
            Coefficients(C_norm=1.0, D_norm=1.0, E_norm=1.0, C_raw=1.0, D_raw=1.0, E_raw=5.0, s=2.0)

    def test_profile_polynomial_degree(self):
        """P is stored with seven finite coefficients."""
        with pytest.raises(ValueError, match="exactly 7"):
            ProfilePolynomial(coefficients=(1.0, 2.0), eps=1)
        with pytest.raises(ValueError, match="finite"):
            ProfilePolynomial(coefficients=(1.0, math.nan, 0, 0, 0, 0, 0), eps=1)

    def test_z0_pole(self):
        """z0 rejects t = +-1."""
        poly = ProfilePolynomial(coefficients=(1.0, 0, -1.0, 0, 0, 0, 0), eps=0)
        assert poly.z0(0.5) == pytest.approx(1.0)
        with pytest.raises(ValueError, match="pole"):
            poly.z0(1.0)

    def test_boundary_pair_regions(self):
        """Branch regions and ordering."""
        pair = BoundaryPair(x=0.5, y=-0.5)
        assert pair.symmetric

        assert not BoundaryPair(x=0.5, y=0.2).symmetric
        BoundaryPair(x=3.0, y=1.5, branch=1)

        with pytest.raises(ValueError, match="y < x"):
            BoundaryPair(x=0.2, y=0.5)
        with pytest.raises(ValueError, match="-1 < y < x < 1"):
            BoundaryPair(x=1.5, y=0.2)
        with pytest.raises(ValueError, match="1 < y < x"):
            BoundaryPair(x=3.0, y=0.5, branch=1)

    def test_turning_point_problem_roots(self):
        """Q must vanish simply at both ends and stay positive between."""
        TurningPointProblem(q=lambda h: 1.0 - np.asarray(h) ** 2, dq=lambda h: -2.0 * np.asarray(h), x0=-1.0, x1=1.0)

        with pytest.raises(ValueError, match="positive"):
            TurningPointProblem(q=lambda h: np.asarray(h) ** 2 - 1.0, dq=lambda h: 2.0 * np.asarray(h), x0=-1.0, x1=1.0)
        with pytest.raises(ValueError, match="does not vanish"):
            TurningPointProblem(q=lambda h: 2.0 - np.asarray(h) ** 2, dq=lambda h: -2.0 * np.asarray(h), x0=-1.0, x1=1.0)

    def test_metric_profile_validation(self, flat_profile):
        """Grid checks and read-only arrays."""
        assert flat_profile.spacing == pytest.approx(0.1)
        assert not flat_profile.has_jets
        assert not flat_profile.symmetric
        with pytest.raises(ValueError):
            flat_profile.f[0] = 2.0

        t = np.linspace(-1.0, 1.0, 5)
        with pytest.raises(ValueError, match="at least 11"):
            MetricProfile(a=1.0, t_grid=t, f=t, g=t, s=0.0, K=0)

        t = np.linspace(-1.0, 1.0, 21)
        with pytest.raises(ValueError, match="-a"):
            MetricProfile(a=2.0, t_grid=t, f=t, g=t, s=0.0, K=0)

    def test_interior_mask(self, flat_profile):
        """The margin excludes samples near both endpoints."""
        mask = flat_profile.interior_mask(0.05)
        assert not mask[0] and not mask[-1]
        assert mask[10]

    def test_replace_drops_jets(self, flat_profile):
        """Replacing f keeps the other arrays."""
        replaced = flat_profile.replace(f=np.zeros(21))
        assert np.all(replaced.f == 0.0)
        assert np.array_equal(replaced.g, flat_profile.g)

    def test_ricci_field_trace(self):
        """tau must be the trace."""
        t = np.linspace(0.0, 1.0, 5)
        ones = np.ones(5)
        field = RicciField(t=t, lambda0=ones, lambda1=ones, lambda2=ones, tau=4.0 * ones, interior=ones.astype(bool))
        assert np.array_equal(field.mu, ones)
        with pytest.raises(ValueError, match="tau"):
            RicciField(t=t, lambda0=ones, lambda1=ones, lambda2=ones, tau=ones, interior=ones.astype(bool))

    def test_einstein_spec_constraints(self):
        """s = k / (genus - 1) and D = E = 0."""
        coeffs = Coefficients.from_normalized(2.0, 0.0, 0.0, 0.5)
        EinsteinSpec(genus=3, k=1, s=0.5, x_star=0.13, coeffs=coeffs)
        with pytest.raises(ValueError, match="k / \\(genus - 1\\)"):
            EinsteinSpec(genus=3, k=1, s=0.75, x_star=0.13, coeffs=Coefficients.from_normalized(2.0, 0.0, 0.0, 0.75))
        with pytest.raises(ValueError, match="D = E = 0"):
            EinsteinSpec(genus=3, k=1, s=0.5, x_star=0.13, coeffs=Coefficients.from_normalized(2.0, 1.0, 0.0, 0.5))

    def test_kahler_spec_derivation(self):
        """y, x and E follow from (s, D)."""
        spec = KahlerSpec(s=1.0, D=2.0)
        assert spec.y == pytest.approx(1.0)
        assert spec.x == pytest.approx(3.0 ** 0.25)
        assert spec.E == pytest.approx(-0.75)

        with pytest.raises(ValueError):
            KahlerSpec(s=2.5, D=1.0)

    def test_product_spec_signs(self):
        """C3 > 0 and A3, B3 < 0."""
        with pytest.raises(ValueError, match="C > 0"):
            ProductSpec(alpha=2.0, y=1.0, x=2.0, A3=-1.0, B3=0.5, C3=0.1)
        with pytest.raises(ValueError, match="x = alpha y"):
            ProductSpec(alpha=2.0, y=1.0, x=3.0, A3=-1.0, B3=-0.5, C3=0.1)


class TestReportModels:
    """Residual entries, reports and persistence models."""

    def test_residual_comparisons(self):
        """le passes below tolerance, gt passes above, NaN never passes."""
        assert ResidualEntry(name="a", value=1e-9, tolerance=1e-6).passed
        assert not ResidualEntry(name="a", value=1e-3, tolerance=1e-6).passed
        assert ResidualEntry(name="g", value=0.5, tolerance=1e-6, comparison="gt").passed
        assert not ResidualEntry(name="g", value=0.0, tolerance=1e-6, comparison="gt").passed
        assert not ResidualEntry(name="n", value=math.nan, tolerance=1.0).passed

    def test_report_verdict_ignores_informational(self):
        """Informational entries are reported but not judged."""
        report = VerificationReport(title="demo")
        report.add("ok", 0.0, 1e-6)
        report.add("info", 1.0, 1e-6, informational=True)
        assert report.passed
        assert report.worst is None

        report.add("bad", 1.0, 1e-6)
        assert not report.passed
        assert report.worst.name == "bad"
        assert report.entry("ok").value == 0.0
        with pytest.raises(KeyError):
            report.entry("missing")

    def test_merge_prefixes_titles(self):
        """Merged entry names carry their report title."""
        first = VerificationReport(title="boundary", metadata={"a": 1.0})
        first.add("f(-a)", 0.0, 1e-6)
        second = VerificationReport(title="parity")
        second.add("g midpoint", 1.0, 1e-6)

        merged = VerificationReport.merge("verify", [first, second], family="custom")
        assert [e.name for e in merged.entries] == ["boundary.f(-a)", "parity.g midpoint"]
        assert merged.metadata["boundary"] == {"a": 1.0}
        assert merged.metadata["family"] == "custom"
        assert not merged.passed

    def test_profile_file_lengths(self):
        """All arrays match t_grid, which increases."""
        grid = [float(i) for i in range(11)]
        ProfileFile(family_tag="custom", a=5.0, s=0.0, K=0, t_grid=grid, f=grid, g=grid)
        with pytest.raises(ValueError, match="length"):
            ProfileFile(family_tag="custom", a=5.0, s=0.0, K=0, t_grid=grid, f=grid[:-1], g=grid)
        with pytest.raises(ValueError, match="increasing"):
            ProfileFile(family_tag="custom", a=5.0, s=0.0, K=0, t_grid=grid[::-1], f=grid, g=grid)

    def test_sweep_result_columns(self):
        """Every record carries exactly the declared columns."""
        SweepResult(kind="eps-s", columns=["s", "eps_s"], records=[{"s": 1.0, "eps_s": 0.8}])
        with pytest.raises(ValueError, match="columns"):
            SweepResult(kind="eps-s", columns=["s", "eps_s"], records=[{"s": 1.0}])


if __name__ == "__main__":
    pytest.main([__file__])
