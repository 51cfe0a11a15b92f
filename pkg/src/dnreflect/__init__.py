"""Exact and numeric verification of d_n^(1) R-matrices and reflection matrices.

Submodules: ``ring`` (Laurent polynomials), ``linalg`` (sparse matrices,
nullspace), ``rep`` (vector representation), ``rmatrix``, ``kmatrix``,
``solver`` and ``cli``.
"""

__version__ = "0.1.0"

from dnreflect._kernels import BACKEND
from dnreflect.kmatrix import (
    CoidealParams,
    KMatrix,
    build_K,
    check_coideal,
    check_K_intertwining,
    check_reflection_equation,
    coideal_params,
    family_K,
)
from dnreflect.linalg import NullspaceResult, SparseMatrix, kron, mat_mul, nullspace
from dnreflect.rep import (
    SigmaTransform,
    UnsupportedRankError,
    VectorRep,
    cartan_matrix,
    report_passed,
    sigma_transform,
    vector_rep,
    verify_relations,
)
from dnreflect.ring import GaussianRational, LaurentPoly, PoleError, q_binomial
from dnreflect.rmatrix import RMatrix, build_R, check_R_intertwining, check_sigma_invariance, check_YBE
from dnreflect.solver import SolveConfig, SolveResult, compare_to_closed_form, scan_epsilon, solve_K

__all__ = [
    "BACKEND",
    "CoidealParams",
    "GaussianRational",
    "KMatrix",
    "LaurentPoly",
    "NullspaceResult",
    "PoleError",
    "RMatrix",
    "SigmaTransform",
    "SolveConfig",
    "SolveResult",
    "SparseMatrix",
    "UnsupportedRankError",
    "VectorRep",
    "build_K",
    "build_R",
    "cartan_matrix",
    "check_K_intertwining",
    "check_R_intertwining",
    "check_YBE",
    "check_coideal",
    "check_reflection_equation",
    "check_sigma_invariance",
    "coideal_params",
    "compare_to_closed_form",
    "family_K",
    "kron",
    "mat_mul",
    "nullspace",
    "q_binomial",
    "report_passed",
    "scan_epsilon",
    "sigma_transform",
    "solve_K",
    "vector_rep",
    "verify_relations",
]
