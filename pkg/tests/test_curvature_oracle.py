"""
Tests for the one-dimensional Ricci eigenvalue engine.
"""

import numpy as np
import pytest

from src.models.geometry import MetricProfile
from src.functions.curvature_oracle import (
    check_einstein,
    check_gray_1d,
    eigenvalues_from_jets,
    ricci_eigenvalues,
    ricci_eigenvalues_at,
)


@pytest.fixture(scope="module")
def space_form_product():
    """f = cos t, g = 1, s = 0, K = -4: lambda0 = lambda1 = 1, lambda2 = 4."""
    t = np.linspace(-1.0, 1.0, 401)
    zeros = np.zeros_like(t)
    return MetricProfile(a=1.0, t_grid=t, f=np.cos(t), g=np.ones_like(t), s=0.0, K=-4,
                         df=-np.sin(t), d2f=-np.cos(t), dg=zeros, d2g=zeros)


class TestEigenvalues:
    """Closed-form eigenvalues from the warping functions."""

    def test_flat(self):
        values = eigenvalues_from_jets(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0)
        assert values == (0.0, 0.0, 0.0)

    def test_space_form_product(self, space_form_product):
        field = ricci_eigenvalues(space_form_product)
        inside = field.interior
        assert np.allclose(field.lambda0[inside], 1.0)
        assert np.allclose(field.lambda1[inside], 1.0)
        assert np.allclose(field.lambda2[inside], 4.0)
        assert np.allclose(field.tau[inside], 10.0)

    def test_pointwise_evaluation(self, gray_sphere_profile):
        field = ricci_eigenvalues(gray_sphere_profile)
        middle = len(gray_sphere_profile.t_grid) // 2
        lambda0, lambda1, lambda2 = ricci_eigenvalues_at(gray_sphere_profile, float(gray_sphere_profile.t_grid[middle]))
        assert lambda0 == pytest.approx(field.lambda0[middle], rel=1e-6, abs=1e-6)
        assert lambda2 == pytest.approx(field.lambda2[middle], rel=1e-6, abs=1e-6)

        with pytest.raises(ValueError, match="outside"):
            ricci_eigenvalues_at(gray_sphere_profile, gray_sphere_profile.a)


class TestGrayCheck:
    """lambda0 = lambda1, lambda - 2 mu constant, the mu fit and the Killing relation."""

    @pytest.mark.parametrize("name", [
        "gray_sphere_profile",
        "gray_genus3_profile",
        "einstein_genus3_profile",
        "kahler_unit_profile",
        "product_alpha2_profile",
    ])
    def test_constructed_profiles_pass(self, request, name):
        profile = request.getfixturevalue(name)
        report = check_gray_1d(ricci_eigenvalues(profile), profile)
        assert report.passed, report.worst

    def test_mu_fit_matches_coefficients(self, gray_sphere_profile):
        report = check_gray_1d(ricci_eigenvalues(gray_sphere_profile), gray_sphere_profile)
        coefficients = gray_sphere_profile.metadata["coefficients"]
        assert report.entry("mu-fit vs coefficients").passed
        assert report.metadata["D_raw"] == pytest.approx(coefficients["D_raw"], rel=1e-5)

    def test_product_gray_constant(self, product_alpha2_profile, product_alpha2_spec):
        """lambda - 2 mu = 3 C3."""
        report = check_gray_1d(ricci_eigenvalues(product_alpha2_profile), product_alpha2_profile)
        assert report.metadata["lambda-2mu"] == pytest.approx(product_alpha2_spec.gray_constant, rel=1e-6)

    def test_non_gray_profile_fails(self):
        t = np.linspace(-1.0, 1.0, 401)
        profile = MetricProfile(a=1.0, t_grid=t, f=np.cos(t), g=1.0 + 0.3 * t**2, s=0.0, K=0)
        report = check_gray_1d(ricci_eigenvalues(profile), profile)
        assert not report.entry("lambda0-lambda1").passed

    def test_zeroed_f_is_reported(self, gray_sphere_profile):
        broken = gray_sphere_profile.replace(f=np.zeros_like(gray_sphere_profile.f))
        report = check_gray_1d(ricci_eigenvalues(broken), broken)
        assert not report.passed
        assert report.entry("non-finite eigenvalues").value > 0


class TestEinsteinCheck:
    """lambda0 = lambda1 = lambda2 on Einstein profiles only."""

    def test_einstein_member_passes(self, einstein_genus3_profile):
        report = check_einstein(ricci_eigenvalues(einstein_genus3_profile))
        assert report.passed, report.worst

    def test_gray_member_fails(self, gray_sphere_profile):
        assert not check_einstein(ricci_eigenvalues(gray_sphere_profile)).passed

    def test_space_form_product_fails(self, space_form_product):
        """A Gray metric with distinct eigenvalues is not Einstein."""
        field = ricci_eigenvalues(space_form_product)
        assert check_gray_1d(field, space_form_product).entry("lambda0-lambda1").passed
        report = check_einstein(field)
        assert not report.passed
        assert report.entry("lambda0-lambda2").value == pytest.approx(0.75, rel=1e-6)


if __name__ == "__main__":
    pytest.main([__file__])
