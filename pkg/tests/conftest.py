"""
Shared fixtures: one constructed profile per family, built once per session.
"""

import os

import pytest

os.environ.setdefault("ENVIRONMENT", "testing")

from src.functions.einstein_family import einstein_profile, einstein_spec
from src.functions.family_params import derive_params
from src.functions.kahler_family import kahler_profile, kahler_spec
from src.functions.ode_profile import gray_profile
from src.functions.product_family import product_profile, product_spec


GRID = 1001


@pytest.fixture(scope="session")
def sphere_params():
    """genus 0, k 1: s = 1, K = 4, eps = 1."""
    return derive_params(0, 1, A=-1)


@pytest.fixture(scope="session")
def genus3_params():
    """genus 3, k 1: s = 1/2, K = -4, eps = -1."""
    return derive_params(3, 1, A=-1)


@pytest.fixture(scope="session")
def gray_sphere_profile(sphere_params):
    return gray_profile(sphere_params, 0.5, grid_points=GRID)


@pytest.fixture(scope="session")
def gray_genus3_profile(genus3_params):
    return gray_profile(genus3_params, 0.3, grid_points=GRID)


@pytest.fixture(scope="session")
def einstein_genus3_profile():
    return einstein_profile(einstein_spec(3, 1), grid_points=GRID)


@pytest.fixture(scope="session")
def kahler_unit_spec():
    return kahler_spec(1.0, 2.0)


@pytest.fixture(scope="session")
def kahler_unit_profile(kahler_unit_spec):
    return kahler_profile(kahler_unit_spec, grid_points=GRID)


@pytest.fixture(scope="session")
def product_alpha2_spec():
    return product_spec(2.0)


@pytest.fixture(scope="session")
def product_alpha2_profile(product_alpha2_spec):
    return product_profile(product_alpha2_spec, genus=2, grid_points=GRID)
