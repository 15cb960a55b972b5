"""
Tests for the Gray boundary algebra and the asymmetric search.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from src.models.geometry import BoundaryPair, Coefficients
from src.functions.gray_solver import (
    asymmetric_search,
    compatibility_g,
    compatibility_lhs,
    endpoint_residuals,
    eps_s,
    eta_diagonal_reference,
    eta_estimate,
    find_asymmetric_pairs,
    g_partials,
    p_poly,
    positivity_check,
    solve_CD,
    solve_CDE_pair,
    symmetric_p,
    symmetric_p0,
    z0_eval,
)
from src.utils.errors import DegenerateParameterError, InfeasibleParametersError


signs = st.sampled_from([-1, 0, 1])


class TestProfilePolynomial:
    """P, z0 and the closed-form coefficients."""

    @given(
        C=st.floats(-50, 50), D=st.floats(-50, 50), E=st.floats(-50, 50),
        eps=signs, t=st.floats(-0.95, 0.95),
    )
    @settings(max_examples=300, deadline=None)
    def test_z0_identity(self, C, D, E, eps, t):
        """z0(t) (1 - t^2) = P(t)."""
        coeffs = Coefficients.from_normalized(C, D, E, 1.0)
        p = p_poly(coeffs, eps)
        lhs = z0_eval(coeffs, eps, t) * (1.0 - t * t)
        assert lhs == pytest.approx(float(p(t)), abs=1e-12 * max(1.0, abs(C), abs(D), abs(E)))

    @given(
        x=st.floats(0.05, 0.95), E=st.floats(-2, 2), s=st.floats(0.1, 3.0), eps=signs,
    )
    @settings(max_examples=300, deadline=None)
    def test_closed_form_endpoint_conditions(self, x, E, s, eps):
        """solve_CD makes z0(x) = 0 and z0'(x) = -2s."""
        C, D = solve_CD(x, E, s, eps)
        residuals = endpoint_residuals(p_poly(Coefficients.from_normalized(C, D, E, s), eps), s, x)
        scale = max(1.0, abs(C), abs(D), abs(E))
        assert abs(residuals["P(x)"]) < 1e-10 * scale
        assert abs(residuals["P'(x)+2s(1-x^2)"]) < 1e-10 * scale

    def test_reference_coefficients(self):
        """x = 1/2, s = 1, eps = 1."""
        C, D = solve_CD(0.5, 0.0, 1.0, 1)
        assert C == pytest.approx(12.9390681004, abs=1e-9)
        assert D == pytest.approx(8.3632019116, abs=1e-9)

    def test_singular_denominators(self):
        with pytest.raises(DegenerateParameterError, match="Singular"):
            solve_CD(0.0, 0.0, 1.0, 1)
        with pytest.raises(DegenerateParameterError, match="Singular"):
            solve_CD(1.0, 0.0, 1.0, 1)
        with pytest.raises(DegenerateParameterError, match="pole"):
            z0_eval(Coefficients.from_normalized(1.0, 1.0, 1.0, 1.0), 1, -1.0)
        with pytest.raises(ValueError, match="eps"):
            p_poly(Coefficients.from_normalized(1.0, 1.0, 1.0, 1.0), 2)

    @pytest.mark.parametrize("x,s,eps", [(0.5, 1.0, 1), (0.3, 0.5, -1), (0.7, 2.5, -1)])
    def test_symmetric_closed_form(self, x, s, eps):
        """The even closed form agrees with P built from solve_CD at E = 0."""
        C, D = solve_CD(x, 0.0, s, eps)
        expected = p_poly(Coefficients.from_normalized(C, D, 0.0, s), eps)
        closed = symmetric_p(x, s, eps)
        assert np.allclose(closed.coefficients, expected.coefficients, atol=1e-9 * max(1.0, abs(C), abs(D)))
        assert closed.odd_part < 1e-12
        assert symmetric_p0(x, s, eps) == pytest.approx(expected.coefficients[0], abs=1e-9)


class TestBoundarySystem:
    """The 3x3 solve and the compatibility certificate."""

    def test_symmetric_pair_has_zero_E(self):
        coeffs = solve_CDE_pair(BoundaryPair(x=0.5, y=-0.5), 1.0, 1)
        C, D = solve_CD(0.5, 0.0, 1.0, 1)
        assert coeffs.E_norm == 0.0
        assert coeffs.C_norm == pytest.approx(C, rel=1e-9)
        assert coeffs.D_norm == pytest.approx(D, rel=1e-9)

    def test_compatible_asymmetric_pair(self):
        """A root of G(x, .) passes the fourth condition."""
        y = 0.2712304908
        assert abs(compatibility_g(0.5, y, 1.0, -1)) < 1e-7
        coeffs = solve_CDE_pair(BoundaryPair(x=0.5, y=y), 1.0, -1, tolerance=1e-6)
        residuals = endpoint_residuals(p_poly(coeffs, -1), 1.0, 0.5, y)
        assert all(abs(v) < 1e-6 for v in residuals.values())

    def test_incompatible_pair(self):
        with pytest.raises(InfeasibleParametersError) as info:
            solve_CDE_pair(BoundaryPair(x=0.5, y=0.1), 1.0, -1)
        assert info.value.certificate == "compatibility"

    @given(x=st.floats(-0.9, 0.9), y=st.floats(-0.9, 0.9), s=st.floats(0.1, 3.0), eps=signs)
    @settings(max_examples=100, deadline=None)
    def test_compatibility_vanishes_on_diagonal(self, x, y, s, eps):
        """(x + y) G(x, y) vanishes on y = -x."""
        assert compatibility_lhs(x, -x, s, eps) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("x", [0.3, 0.5, 0.7])
    def test_compatibility_matches_feasibility(self, x):
        """The 3x3 solve certifies exactly the pairs on (x + y) G(x, y) = 0."""
        s, eps = 1.0, -1
        for y in np.linspace(-0.8, x - 0.1, 7):
            if abs(compatibility_lhs(x, y, s, eps)) > 1e-2:
                with pytest.raises(InfeasibleParametersError):
                    solve_CDE_pair(BoundaryPair(x=x, y=float(y)), s, eps)

        solve_CDE_pair(BoundaryPair(x=x, y=-x), s, eps)
        ys = np.linspace(-0.99, x - 1e-3, 400)
        values = compatibility_g(x, ys, s, eps)
        roots = [brentq(lambda v: float(compatibility_g(x, v, s, eps)), ys[i], ys[i + 1])
                 for i in np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]]
        assert roots
        for y in roots:
            coeffs = solve_CDE_pair(BoundaryPair(x=x, y=y), s, eps, tolerance=1e-6)
            residuals = endpoint_residuals(p_poly(coeffs, eps), s, x, y)
            assert all(abs(v) < 1e-6 for v in residuals.values())

    def test_g_partials_match_differences(self):
        x, y, s, eps, h = 0.4, -0.2, 1.3, -1, 1e-6
        gx, gy = g_partials(x, y, s, eps)
        assert gx == pytest.approx((compatibility_g(x + h, y, s, eps) - compatibility_g(x - h, y, s, eps)) / (2 * h), abs=1e-6)
        assert gy == pytest.approx((compatibility_g(x, y + h, s, eps) - compatibility_g(x, y - h, s, eps)) / (2 * h), abs=1e-6)


class TestPositivity:
    """eps_s and the positivity certificate."""

    @pytest.mark.parametrize("s,expected", [(1.0, 0.8221382501), (0.5, 0.6729605743)])
    def test_eps_s_values(self, s, expected):
        assert eps_s(s, -1) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("s,eps", [(2.0, -1), (3.0, -1), (1.0, 1), (1.0, 0)])
    def test_eps_s_is_one(self, s, eps):
        assert eps_s(s, eps) == 1.0

    def test_eps_s_increases_with_s(self):
        """eps_s grows from 0 towards 1 as s approaches 2."""
        values = [eps_s(s, -1) for s in np.linspace(0.1, 1.95, 20)]
        assert all(np.diff(values) > 0)
        assert 0.0 < values[0] and values[-1] < 1.0

    def test_symmetric_positivity_window(self):
        """Positive below eps_s, not above."""
        inside = BoundaryPair(x=0.7, y=-0.7)
        C, D = solve_CD(0.7, 0.0, 1.0, -1)
        assert positivity_check(p_poly(Coefficients.from_normalized(C, D, 0.0, 1.0), -1), inside)

        outside = BoundaryPair(x=0.9, y=-0.9)
        C, D = solve_CD(0.9, 0.0, 1.0, -1)
        assert not positivity_check(p_poly(Coefficients.from_normalized(C, D, 0.0, 1.0), -1), outside)


class TestAsymmetricSearch:
    """Asymmetric pairs near the threshold eta."""

    def test_pairs_below_eta(self):
        pairs = find_asymmetric_pairs(0.595270, 2.05, -1)
        assert pairs
        assert any(abs(p.y + 0.68374610) < 1e-6 or abs(p.y + 0.50421524) < 1e-6 for p in pairs)
        for pair in pairs:
            assert abs(pair.x + pair.y) > 1e-6

    def test_branch_region(self):
        with pytest.raises(DegenerateParameterError, match="branch"):
            find_asymmetric_pairs(0.5, 1.0, 1, branch=1)

    def test_search_outcomes(self):
        found = asymmetric_search(2.05)
        assert found.status == "found"
        assert found.min_g < 0

        none = asymmetric_search(2.2)
        assert none.status == "none"
        assert none.min_g >= 0
        assert none.pair is None

    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5, 2.0])
    def test_found_below_threshold(self, s):
        outcome = asymmetric_search(s)
        assert outcome.status == "found"
        assert outcome.pair.y != pytest.approx(-outcome.pair.x, abs=1e-6)
        assert abs(compatibility_g(outcome.pair.x, outcome.pair.y, s, -1)) < 1e-8

    def test_none_above_threshold(self):
        outcome = asymmetric_search(2.5)
        assert outcome.status == "none"
        assert outcome.pair is None

    def test_diagonal_reference(self):
        assert eta_diagonal_reference() == pytest.approx(2.05318181, abs=1e-7)

    @pytest.mark.slow
    def test_eta_estimate(self):
        estimate = eta_estimate(tol=1e-4)
        assert 2.04 <= estimate.value <= 2.06
        assert estimate.value == pytest.approx(2.05318, abs=5e-3)
        assert estimate.width <= 1e-4
        assert estimate.witness is not None


if __name__ == "__main__":
    pytest.main([__file__])
