"""
Tests for the finite-difference stencils.
"""

import numpy as np
import pytest

from src.utils.differences import derivative, endpoint_taylor, extrapolate_endpoints, one_sided_derivative


class TestStencils:
    """Fourth-order stencils are exact on quartics."""

    @pytest.fixture
    def grid(self):
        return np.linspace(-1.0, 1.0, 41)

    def test_derivative_exact_on_quartic(self, grid):
        values = 3.0 * grid**4 - grid**3 + 2.0 * grid - 1.0
        expected = 12.0 * grid**3 - 3.0 * grid**2 + 2.0
        assert np.allclose(derivative(values, grid[1] - grid[0]), expected, atol=1e-10)

    def test_derivative_accuracy(self):
        t = np.linspace(0.0, np.pi, 801)
        assert np.max(np.abs(derivative(np.sin(t), t[1] - t[0]) - np.cos(t))) < 1e-8

    def test_derivative_along_last_axis(self, grid):
        stacked = np.vstack([grid**2, grid**3])
        result = derivative(stacked, grid[1] - grid[0])
        assert np.allclose(result[0], 2.0 * grid, atol=1e-10)
        assert np.allclose(result[1], 3.0 * grid**2, atol=1e-10)

    def test_one_sided(self, grid):
        values = grid**4 + grid
        spacing = grid[1] - grid[0]
        assert one_sided_derivative(values, spacing, "left") == pytest.approx(-3.0, abs=1e-10)
        assert one_sided_derivative(values, spacing, "right") == pytest.approx(5.0, abs=1e-10)
        with pytest.raises(ValueError, match="left' or 'right"):
            one_sided_derivative(values, spacing, "middle")

    def test_too_few_samples(self):
        with pytest.raises(ValueError, match="5 samples"):
            derivative(np.ones(4), 0.1)


class TestEndpointTools:
    """Extrapolation and local Taylor fits at the ends of a grid."""

    def test_extrapolation_exact_on_quartic(self):
        t = np.linspace(0.0, 1.0, 21)
        values = 1.0 + t - 2.0 * t**2 + t**4
        corrupted = values.copy()
        corrupted[0] = corrupted[-1] = np.nan
        assert np.allclose(extrapolate_endpoints(corrupted), values, atol=1e-12)

    def test_taylor_coefficients(self):
        t = np.linspace(-1.0, 1.0, 201)
        values = 2.0 + 3.0 * (t + 1.0) - 0.5 * (t + 1.0) ** 3
        coeffs = endpoint_taylor(t, values, "left")
        assert coeffs[:4] == pytest.approx([2.0, 3.0, 0.0, -0.5], abs=1e-8)

        right = endpoint_taylor(t, np.cos(t - 1.0), "right")
        assert right[1] == pytest.approx(0.0, abs=1e-6)
        assert right[2] == pytest.approx(-0.5, abs=1e-5)


if __name__ == "__main__":
    pytest.main([__file__])
