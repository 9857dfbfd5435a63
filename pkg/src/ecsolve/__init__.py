"""Exact perturbative solution of the elliptic Calogero-Sutherland model."""

from .algebra.poly import PPoly, PRatFunc, UsageError
from .algebra.rational import Q, Rational
from .algebra.series import BiSeries, ResonanceError
from .eigenfunction import AlphaTable, alpha_table, corollary_residual, trig_alpha_table
from .eigenvalue import (
    EigenvalueSeries,
    eigenvalue_via_fixed_point,
    eigenvalue_via_lagrange,
    eigenvalue_via_q2_recursion_n2,
)
from .fhat import LaurentPoly, assemble_phi, fhat_series
from .kernels import BACKEND
from .lattice import ModelParams, QuantumNumbers, RootVector

__version__ = "0.1.0"

__all__ = [
    "AlphaTable",
    "BACKEND",
    "BiSeries",
    "EigenvalueSeries",
    "LaurentPoly",
    "ModelParams",
    "PPoly",
    "PRatFunc",
    "Q",
    "QuantumNumbers",
    "Rational",
    "ResonanceError",
    "RootVector",
    "UsageError",
    "alpha_table",
    "assemble_phi",
    "corollary_residual",
    "eigenvalue_via_fixed_point",
    "eigenvalue_via_lagrange",
    "eigenvalue_via_q2_recursion_n2",
    "fhat_series",
    "trig_alpha_table",
]
