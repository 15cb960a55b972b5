"""Persistence, parameter sweeps and the command-line interface."""
