#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from dcr_fem._analysis.best_approximation import best_approximation
from dcr_fem._analysis.consistency import adjoint_consistency_norm, consistency_norm
from dcr_fem._analysis.duality import DualityReport, aubin_nitsche
from dcr_fem._analysis.error_norms import ErrorSummary, error_norms
from dcr_fem._analysis.rates import rates
from dcr_fem._analysis.strang import StrangBound, strang_bound
from dcr_fem._assembly.assemble import (
    SparseSystem,
    assemble,
    assemble_adjoint,
    assemble_cr,
    assemble_ipg,
    residual_of_exact,
    upwind_value,
)
from dcr_fem._assembly.method_config import MethodConfig, resolve_eta
from dcr_fem._assembly.trace_constant import estimate_trace_constant
from dcr_fem._commands.list_problems import problem_statuses
from dcr_fem._commands.mesh_info import mesh_info
from dcr_fem._commands.report import ConvergenceReport
from dcr_fem._commands.study import study
from dcr_fem._fespace.jumps import jump_average
from dcr_fem._fespace.space import (
    DiscreteSpace,
    FeFunction,
    SpaceKind,
    build_space,
    evaluate,
    interpolate,
)
from dcr_fem._linalg.gram import GramMatrix, NormKind, gram
from dcr_fem._linalg.matrix_market import export_system, import_system
from dcr_fem._linalg.solve import solve
from dcr_fem._linalg.spectral import dual_norm, inf_sup, min_sym_eig
from dcr_fem._mesh.audit import classify_boundary, verify_consistency
from dcr_fem._mesh.generate import BoundaryLayout, generate_unit_square, refine_uniform
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._mesh.mesh_io import read_mesh, write_mesh
from dcr_fem._problems.audit import AuditReport, audit_conditions
from dcr_fem._problems.problem import CoercivityMode, ManufacturedSolution, ProblemSpec
from dcr_fem._problems.problem_helpers import get_problem, list_problems

__all__ = [
    "adjoint_consistency_norm",
    "assemble",
    "assemble_adjoint",
    "assemble_cr",
    "assemble_ipg",
    "aubin_nitsche",
    "audit_conditions",
    "AuditReport",
    "best_approximation",
    "BoundaryLayout",
    "build_space",
    "classify_boundary",
    "CoercivityMode",
    "consistency_norm",
    "ConvergenceReport",
    "DiscreteSpace",
    "dual_norm",
    "DualityReport",
    "error_norms",
    "ErrorSummary",
    "estimate_trace_constant",
    "evaluate",
    "export_system",
    "FaceKind",
    "FeFunction",
    "generate_unit_square",
    "get_problem",
    "gram",
    "GramMatrix",
    "import_system",
    "inf_sup",
    "interpolate",
    "jump_average",
    "list_problems",
    "ManufacturedSolution",
    "Mesh",
    "mesh_info",
    "MethodConfig",
    "min_sym_eig",
    "NormKind",
    "problem_statuses",
    "ProblemSpec",
    "rates",
    "read_mesh",
    "refine_uniform",
    "residual_of_exact",
    "resolve_eta",
    "solve",
    "SpaceKind",
    "SparseSystem",
    "strang_bound",
    "StrangBound",
    "study",
    "upwind_value",
    "verify_consistency",
    "write_mesh",
]

__version__ = "0.1.0"
