"""Exact Ext tables and semi-orthogonality checks on toric stacks and split toric stack bundles."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
