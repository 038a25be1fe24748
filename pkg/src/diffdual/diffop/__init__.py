"""Divided-power differential operators: action, composition, formal adjoint, transport."""

from .matrix import MatrixDiffOp, matrix_adjoint, matrix_compose
from .operator import (DividedPowerOp, adjoint, apply, compose, conjugate, divided_derivative,
                       embed_operator,                        linear_jacobian, transport, transport_dual)
from .text import format_operator, parse_operator, parse_polynomial

__all__ = [
    "MatrixDiffOp", "matrix_adjoint", "matrix_compose", "DividedPowerOp", "adjoint", "apply", "compose",
    "conjugate", "divided_derivative", "embed_operator", "linear_jacobian", "transport", "transport_dual",
    "format_operator", "parse_operator", "parse_polynomial",
]
