"""Quantum Sudoku designs: build, check, solve and measure them."""

from __future__ import annotations

from .kernels import BACKEND
from .linalg import DEFAULT_TOL, Tolerances

__version__ = "0.1.0"

__all__ = ["BACKEND", "DEFAULT_TOL", "Tolerances", "__version__"]
