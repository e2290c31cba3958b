"""Chabauty spaces of R and C*: exact subgroups, compactified metrics,
Hausdorff distances between samples, and symbolic limits."""

__version__ = "0.1.0"
