"""Symbolic weight and q-expansion calculus for mod-p Hilbert modular forms."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
