"""Exact discrepancy, Weyl-sum, GCD-sum and lacunary-series computations."""

__version__ = "0.1.0"
