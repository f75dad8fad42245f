"""Exact integer and half-odd-integer spherical harmonics and angular-momentum operators."""
from .harmonics import QuantumNumbers, make_harmonic, norm_squared_integral
from .kinds import OperatorKind
from .operators import apply, eigen_check, ladder_classify
from .symtrig import ExactValue, GaussianRational, HalfInteger, TrigExpr, eval_expr

__all__ = [
    "ExactValue",
    "GaussianRational",
    "HalfInteger",
    "OperatorKind",
    "QuantumNumbers",
    "TrigExpr",
    "apply",
    "eigen_check",
    "eval_expr",
    "ladder_classify",
    "make_harmonic",
    "norm_squared_integral",
]

__version__ = "0.1.0"
