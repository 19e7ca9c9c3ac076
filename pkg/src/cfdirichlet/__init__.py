"""Exact continued-fraction tools for Dirichlet non-improvable numbers with
prescribed convergence exponent."""

__version__ = "0.1.0"
