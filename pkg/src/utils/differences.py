"""
Fourth-order finite-difference stencils on uniform grids.

All functions take samples on a uniform grid of spacing `spacing` and act
along the last axis.
"""

import numpy as np
from numpy.polynomial import polynomial as npoly

_LEFT_EDGE = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_LEFT_NEXT = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
_EXTRAPOLATE = np.array([5.0, -10.0, 10.0, -5.0, 1.0])


def derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """First derivative, central in the interior and one-sided at both ends."""
    v = np.asarray(values, dtype=float)
    if v.shape[-1] < 5:
        raise ValueError("At least 5 samples are needed for a 4th-order stencil")

    out = np.empty_like(v)
    out[..., 2:-2] = (-v[..., 4:] + 8.0 * v[..., 3:-1] - 8.0 * v[..., 1:-3] + v[..., :-4]) / 12.0
    out[..., 0] = v[..., :5] @ _LEFT_EDGE
    out[..., 1] = v[..., :5] @ _LEFT_NEXT
    # mirrored stencils change sign
    out[..., -1] = -(v[..., ::-1][..., :5] @ _LEFT_EDGE)
    out[..., -2] = -(v[..., ::-1][..., :5] @ _LEFT_NEXT)
    return out / spacing


def one_sided_derivative(values: np.ndarray, spacing: float, end: str) -> float:
    """First derivative at the left or right end of the samples."""
    v = np.asarray(values, dtype=float)
    if end == "left":
        return float(v[:5] @ _LEFT_EDGE / spacing)
    if end == "right":
        return float(-(v[::-1][:5] @ _LEFT_EDGE) / spacing)
    raise ValueError(f"end must be 'left' or 'right', got {end!r}")


def extrapolate_endpoints(values: np.ndarray) -> np.ndarray:
    """Replace the first and last samples by quartic extrapolation from their neighbours."""
    v = np.array(values, dtype=float, copy=True)
    v[0] = v[1:6] @ _EXTRAPOLATE
    v[-1] = v[-2:-7:-1] @ _EXTRAPOLATE
    return v


def endpoint_taylor(t: np.ndarray, values: np.ndarray, end: str,
                    degree: int = 6, window: int = 40) -> np.ndarray:
    """
    Taylor coefficients about an endpoint from a local least-squares fit.

    Returns c with values ~ sum c[k] * (t - t_end)**k near the endpoint;
    c[k] approximates the k-th one-sided derivative divided by k!.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if end == "left":
        tau = t[:window] - t[0]
        sample = v[:window]
    elif end == "right":
        tau = t[-window:] - t[-1]
        sample = v[-window:]
    else:
        raise ValueError(f"end must be 'left' or 'right', got {end!r}")

    # scaling tau to [-1, 1] keeps the Vandermonde system well conditioned
    width = float(np.max(np.abs(tau)))
    coeffs = npoly.polyfit(tau / width, sample, degree)
    return coeffs / width ** np.arange(degree + 1)
