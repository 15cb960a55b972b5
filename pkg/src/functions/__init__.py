"""Construction families, solvers and curvature engines."""
