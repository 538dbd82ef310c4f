"""Radially symmetric three-layer tumor growth: interfaces, stationary states and radius evolution."""

from ._core import Error, Model, ValidationError, format_number

__all__ = ["Error", "Model", "ValidationError", "format_number"]
