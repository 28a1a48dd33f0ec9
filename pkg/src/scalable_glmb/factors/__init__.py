"""Factored GLMB maintenance: marginals, products and regrouping."""

from .operations import (
    marginal_weight,
    marginalize,
    multiply,
    multiply_all,
    multiply_top,
)
from .refactor import refactor, split_factor

__all__ = [
    "marginal_weight",
    "marginalize",
    "multiply",
    "multiply_all",
    "multiply_top",
    "refactor",
    "split_factor",
]
