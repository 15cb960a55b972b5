"""
Tests for the k = 0 product family.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.functions.ode_profile import check_boundary, check_parity
from src.functions.product_family import (
    ode_residual,
    product_eigenvalues,
    product_endpoints,
    product_p,
    product_p_prime,
    product_profile,
    product_solve_coeffs,
    product_spec,
)
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError


class TestProductAlgebra:
    """Endpoints, coefficients and the consistency certificate."""

    def test_alpha_two(self, product_alpha2_spec):
        spec = product_alpha2_spec
        assert spec.y == pytest.approx(11.0 / 6.0, rel=1e-14)
        assert spec.x == pytest.approx(11.0 / 3.0, rel=1e-14)
        assert spec.A3 == pytest.approx(-22.0 / 3.0, rel=1e-10)
        assert spec.B3 == pytest.approx(-0.0147530906, abs=1e-10)
        assert spec.C3 == pytest.approx(6.0 / 121.0, rel=1e-10)
        assert spec.gray_constant == pytest.approx(18.0 / 121.0, rel=1e-10)

    @given(alpha=st.floats(min_value=1.05, max_value=10.0))
    @settings(max_examples=100, deadline=None)
    def test_signs_and_endpoint_conditions(self, alpha):
        """P(y) = P(x) = 0, P'(y) = 2, P'(x) = -2 and A3 < 0, B3 < 0 < C3 along the endpoint curve."""
        spec = product_spec(alpha)
        coeffs = (spec.A3, spec.B3, spec.C3)
        p, dp = product_p(*coeffs), product_p_prime(*coeffs)
        for g in (spec.y, spec.x):
            scale = max(4.0, abs(spec.A3) / g, abs(spec.B3) * g**4, abs(spec.C3) * g**2)
            assert abs(p(g)) <= 1e-7 * scale
            assert abs(abs(dp(g)) - 2.0) <= 1e-7 * scale
        assert dp(spec.y) > 0 > dp(spec.x)
        assert spec.A3 < 0 and spec.B3 < 0 < spec.C3

    def test_off_curve_pair(self):
        y, x = product_endpoints(2.0)
        with pytest.raises(InfeasibleParametersError) as info:
            product_solve_coeffs(y + 1e-3, x)
        assert info.value.certificate == "consistency"

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateParameterError, match="alpha > 1"):
            product_endpoints(1.0)
        with pytest.raises(DegenerateParameterError, match="0 < y < x"):
            product_solve_coeffs(2.0, 1.0)

    def test_near_one_warns(self, mocker):
        logger = mocker.patch("src.functions.product_family.logger")
        product_endpoints(1.001)
        logger.warning.assert_called_once()

    def test_constants_by_alpha(self):
        """C3 decreases with alpha and distinguishes the metrics."""
        expected = {1.5: 0.0499479709, 2.0: 0.0495867769, 3.0: 0.0477839335, 5.0: 0.0423854848}
        values = [product_spec(alpha).C3 for alpha in expected]
        assert values == pytest.approx(list(expected.values()), abs=1e-9)
        assert all(np.diff(values) < 0)

    def test_ode_residual(self, product_alpha2_spec):
        g = np.linspace(product_alpha2_spec.y, product_alpha2_spec.x, 41)
        assert np.max(np.abs(ode_residual(product_alpha2_spec, g))) < 1e-11


class TestProductEigenvalues:
    """lambda and mu in terms of h."""

    def test_values_at_lower_root(self, product_alpha2_spec):
        lam, mu = product_eigenvalues(product_alpha2_spec, product_alpha2_spec.y)
        assert isinstance(lam, float)
        assert lam == pytest.approx(42.0 / 121.0, rel=1e-9)
        assert mu == pytest.approx(12.0 / 121.0, rel=1e-9)

    def test_gray_constant(self, product_alpha2_spec):
        """lambda - 2 mu = 3 C3 for every h."""
        h = np.linspace(1.0, 4.0, 13)
        lam, mu = product_eigenvalues(product_alpha2_spec, h)
        assert np.allclose(lam - 2.0 * mu, product_alpha2_spec.gray_constant, atol=1e-14)


class TestProductProfile:
    """The integrated s = 0 profile."""

    def test_metadata(self, product_alpha2_profile, product_alpha2_spec):
        assert product_alpha2_profile.family_tag == "product"
        assert product_alpha2_profile.s == 0.0
        coefficients = product_alpha2_profile.metadata["coefficients"]
        assert coefficients["D_effective"] == pytest.approx(-5.0 * product_alpha2_spec.B3)
        assert product_alpha2_profile.metadata["params"]["chern_k"] == 0

    def test_boundary_and_parity(self, product_alpha2_profile):
        assert check_boundary(product_alpha2_profile).passed
        assert check_parity(product_alpha2_profile).passed

    def test_period_agreement(self, product_alpha2_profile):
        quadrature = product_alpha2_profile.metadata["half_period_quadrature"]
        assert abs(product_alpha2_profile.a - quadrature) / quadrature < 1e-8

    def test_period_check_runs_on_construction(self, product_alpha2_spec, mocker):
        agreement = mocker.patch("src.functions.product_family.half_period_agreement")
        profile = product_profile(product_alpha2_spec, grid_points=201)
        agreement.assert_called_once()
        assert agreement.call_args.args[0] is profile


if __name__ == "__main__":
    pytest.main([__file__])
