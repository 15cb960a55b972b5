"""Utility modules for grayforge: configuration, logging, errors, stencils."""
