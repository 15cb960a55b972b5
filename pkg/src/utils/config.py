"""
Configuration management for the grayforge construction toolkit.
Handles environment variables, numerical settings and verification tolerances.
"""

import os
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from dotenv import load_dotenv


# Load environment variables from .env file
load_dotenv()


# Verification tolerances before scaling. Keys are the names accepted by
# `grayforge verify --tolerance name=value`.
DEFAULT_TOLERANCES: Dict[str, float] = {
    "boundary_value": 1e-6,
    "boundary_derivative": 1e-5,
    "parity": 1e-6,
    "eigen": 1e-6,
    "chart": 1e-4,
    "chart_derivative": 5e-4,
    "killing_product": 1e-5,
    "energy": 1e-9,
    "period": 1e-8,
    "feasibility": 1e-8,
}


@dataclass
class Config:
    """Configuration settings for profile construction and verification."""

    # Verification
    tolerance_scale: float = 1.0

    # Turning-point integrator
    ode_rtol: float = 1e-11
    ode_atol: float = 1e-11
    grid_points: int = 2001

    # Curvature engines
    chebyshev_degree: int = 80
    interior_margin: float = 0.05
    christoffel_step: float = 1e-4
    gray_step: float = 1e-3

    # Processing Settings
    max_workers: int = 4

    # Monitoring
    log_level: str = "INFO"

    def tolerances(self, overrides: Optional[Mapping[str, float]] = None) -> Dict[str, float]:
        """
        Scaled tolerance table with explicit overrides applied last.

        Args:
            overrides: name -> value pairs; these are not scaled

        Returns:
            Complete tolerance table

        Raises:
            ValueError: If an override names an unknown tolerance
        """
        table = {name: value * self.tolerance_scale for name, value in DEFAULT_TOLERANCES.items()}
        for name, value in (overrides or {}).items():
            if name not in table:
                raise ValueError(
                    f"Unknown tolerance '{name}'; expected one of: {', '.join(sorted(table))}"
                )
            if value <= 0:
                raise ValueError(f"Tolerance '{name}' must be positive")
            table[name] = float(value)
        return table


def get_config() -> Config:
    """
    Get configuration from environment variables.

    Returns:
        Config object with all settings

    Raises:
        ValueError: If a numeric environment variable cannot be parsed
    """

    try:
        config = Config(
            tolerance_scale=float(os.getenv('GRAYFORGE_TOLERANCE_SCALE', '1')),
            ode_rtol=float(os.getenv('GRAYFORGE_ODE_RTOL', '1e-11')),
            ode_atol=float(os.getenv('GRAYFORGE_ODE_ATOL', '1e-11')),
            grid_points=int(os.getenv('GRAYFORGE_GRID_POINTS', '2001')),
            chebyshev_degree=int(os.getenv('GRAYFORGE_CHEBYSHEV_DEGREE', '80')),
            interior_margin=float(os.getenv('GRAYFORGE_INTERIOR_MARGIN', '0.05')),
            christoffel_step=float(os.getenv('GRAYFORGE_CHRISTOFFEL_STEP', '1e-4')),
            gray_step=float(os.getenv('GRAYFORGE_GRAY_STEP', '1e-3')),
            max_workers=int(os.getenv('MAX_WORKERS', '4')),
            log_level=os.getenv('LOG_LEVEL', 'INFO'),
        )
    except ValueError as e:
        raise ValueError(f"Malformed numeric environment variable: {e}") from e

    return config


def validate_config(config: Config) -> None:
    """
    Validate configuration settings.

    Args:
        config: Configuration object to validate

    Raises:
        ValueError: If configuration is invalid
    """

    if config.tolerance_scale <= 0:
        raise ValueError("GRAYFORGE_TOLERANCE_SCALE must be positive")

    if not (0 < config.ode_rtol < 1e-3 and 0 < config.ode_atol < 1e-3):
        raise ValueError("ODE tolerances must lie in (0, 1e-3)")

    # Odd grids keep t = 0 on the grid, which midpoint parity relies on
    if config.grid_points < 101 or config.grid_points % 2 == 0:
        raise ValueError("Grid points must be an odd number >= 101")

    if config.chebyshev_degree < 8:
        raise ValueError("Chebyshev degree must be at least 8")

    if not 0 < config.interior_margin < 0.5:
        raise ValueError("Interior margin must lie in (0, 0.5)")

    if config.christoffel_step <= 0 or config.gray_step <= 0:
        raise ValueError("Finite-difference steps must be positive")

    if config.max_workers < 1 or config.max_workers > 32:
        raise ValueError("Max workers must be between 1 and 32")

    valid_log_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
    if config.log_level.upper() not in valid_log_levels:
        raise ValueError(f"Log level must be one of: {', '.join(valid_log_levels)}")


# Global configuration instance
_config: Optional[Config] = None


def get_global_config() -> Config:
    """Get the global configuration instance (singleton pattern)."""
    global _config

    if _config is None:
        _config = get_config()
        validate_config(_config)

    return _config


def reload_config() -> Config:
    """Reload configuration from environment variables."""
    global _config
    _config = None
    return get_global_config()


# Environment-specific configuration
def is_production() -> bool:
    """Check if running in production environment."""
    return os.getenv('ENVIRONMENT', 'development').lower() == 'production'


def is_development() -> bool:
    """Check if running in development environment."""
    return os.getenv('ENVIRONMENT', 'development').lower() == 'development'


def is_testing() -> bool:
    """Check if running in testing environment."""
    return os.getenv('ENVIRONMENT', 'development').lower() == 'testing'
