"""
Tests for the Kahler branch.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.functions.family_params import derive_params
from src.functions.kahler_family import (
    kahler_boundary_residuals,
    kahler_p,
    kahler_profile,
    kahler_spec,
    ode_residual,
    positive_roots,
    quartic_in_u,
)
from src.functions.ode_profile import check_boundary, check_parity
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError


class TestKahlerSpec:
    """Endpoints and the existence window 0 < s < 2."""

    def test_unit_spec(self, kahler_unit_spec):
        assert kahler_unit_spec.y == pytest.approx(1.0)
        assert kahler_unit_spec.x == pytest.approx(3.0 ** 0.25)
        assert kahler_unit_spec.E == pytest.approx(-0.75)
        assert kahler_unit_spec.C == 0.0

    @pytest.mark.parametrize("s,D", [(2.0, 1.0), (2.5, 1.0), (0.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_window(self, s, D):
        with pytest.raises(InfeasibleParametersError) as info:
            kahler_spec(s, D)
        assert info.value.certificate == "kahler-window"

    def test_p_domain(self, kahler_unit_spec):
        with pytest.raises(DegenerateParameterError, match="g > 0"):
            kahler_p(kahler_unit_spec)(np.array([0.5, 0.0]))


class TestKahlerAlgebra:
    """P, its ODE and its roots."""

    @given(s=st.floats(min_value=0.05, max_value=1.95), D=st.floats(min_value=0.1, max_value=20.0))
    @settings(max_examples=100, deadline=None)
    def test_boundary_conditions_hold(self, s, D):
        """Every (s, D) in the window passes all boundary residuals."""
        report = kahler_boundary_residuals(kahler_spec(s, D))
        assert report.passed, report.worst

    def test_ode_residual_vanishes(self, kahler_unit_spec):
        g = np.linspace(0.5, 2.0, 31)
        assert np.max(np.abs(ode_residual(kahler_unit_spec, g))) < 1e-12

    def test_roots_from_quartic(self, kahler_unit_spec):
        """u^4 - 4u^2 + 3 = 0 up to scale: g = 1 and 3^(1/4)."""
        quartic = quartic_in_u(kahler_unit_spec)
        assert np.allclose(quartic.coef, [-0.75, 0.0, 1.0, 0.0, -0.25])
        assert np.allclose(positive_roots(kahler_unit_spec), [1.0, 3.0 ** 0.25])


class TestKahlerProfile:
    """Integrated profiles with f = g g' / s."""

    def test_profile_endpoints(self, kahler_unit_profile):
        assert kahler_unit_profile.family_tag == "kahler"
        assert kahler_unit_profile.s == 1.0
        assert kahler_unit_profile.K == -4
        assert kahler_unit_profile.g[0] == pytest.approx(1.0)
        assert kahler_unit_profile.g[-1] == pytest.approx(3.0 ** 0.25)

    def test_boundary_and_parity(self, kahler_unit_profile):
        assert check_boundary(kahler_unit_profile).passed
        parity = check_parity(kahler_unit_profile)
        assert not parity.metadata["midpoint"]
        assert parity.passed, parity.worst

    def test_period_agreement(self, kahler_unit_profile):
        quadrature = kahler_unit_profile.metadata["half_period_quadrature"]
        assert abs(kahler_unit_profile.a - quadrature) / quadrature < 1e-8

    def test_period_check_runs_on_construction(self, kahler_unit_spec, mocker):
        agreement = mocker.patch("src.functions.kahler_family.half_period_agreement")
        profile = kahler_profile(kahler_unit_spec, grid_points=201)
        agreement.assert_called_once()
        assert agreement.call_args.args[0] is profile

    def test_params_recorded(self, kahler_unit_spec):
        params = derive_params(3, 2, A=0)
        profile = kahler_profile(kahler_unit_spec, params=params, grid_points=201)
        assert profile.metadata["params"]["genus"] == 3
        assert "params" not in kahler_profile(kahler_unit_spec, grid_points=201).metadata


if __name__ == "__main__":
    pytest.main([__file__])
