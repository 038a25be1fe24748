"""Exact computations with differential operators, Čech cohomology and duality on toy schemes."""

__version__ = "0.1.0"

from .cech import Cochain, Cohomology, WindowInstability, coboundary, cohomology, cross, cup, trace
from .diffop import DividedPowerOp, MatrixDiffOp, adjoint, compose, matrix_adjoint, parse_operator
from .filtered import (FilteredTwoTerm, PairingMatrix, Verdict, coevaluation_check, dual_differential_check,
                       e1_differential, eta_copairing, graded_coevaluation_check, hypercohomology,
                       serre_pairing)
from .local_coh import (DiagonalChart, ExtAltCech, FractionClass, TauClass, build_tau, normal_form,
                        op_action_on_xi, to_global, two_term_tau_check)
from .ring import GF, QQ, PolynomialRing
from .sheaves import (ChartScheme, GlobalDiffOp, IncompatibleOperator, LocFreeSheaf, affine_space,
                      differential_forms, dual_star, exterior_derivative, global_adjoint, product_scheme,
                      projective_space, scheme_from_name, structure_sheaf, twist)

__all__ = [
    "Cochain", "Cohomology", "WindowInstability", "coboundary", "cohomology", "cross", "cup", "trace",
    "DividedPowerOp", "MatrixDiffOp", "adjoint", "compose", "matrix_adjoint", "parse_operator",
    "FilteredTwoTerm", "PairingMatrix", "Verdict", "coevaluation_check", "dual_differential_check",
    "e1_differential", "eta_copairing", "graded_coevaluation_check", "hypercohomology", "serre_pairing",
    "DiagonalChart", "ExtAltCech", "FractionClass", "TauClass", "build_tau", "normal_form",
    "op_action_on_xi", "to_global", "two_term_tau_check", "GF", "QQ", "PolynomialRing",
    "ChartScheme", "GlobalDiffOp", "IncompatibleOperator", "LocFreeSheaf", "affine_space",
    "differential_forms", "dual_star", "exterior_derivative", "global_adjoint", "product_scheme",
    "projective_space", "scheme_from_name", "structure_sheaf", "twist",
]
