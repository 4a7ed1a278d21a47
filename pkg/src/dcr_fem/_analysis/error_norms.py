#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dataclasses import dataclass

from dcr_fem._assembly.fields import AnalyticFunction, DiscreteFunction, difference
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.quadrature import MAX_QUADRATURE_DEGREE
from dcr_fem._fespace.space import DiscreteSpace, FeFunction
from dcr_fem._linalg.gram import NormKind, norm_eta, norm_of
from dcr_fem._problems.problem import ManufacturedSolution, ProblemSpec


@dataclass(frozen=True)
class ErrorSummary:
    l2: float
    broken_h1: float
    # Only computed for the interior penalty scheme.
    energy: float | None = None
    consistency_dual: float | None = None
    inf_sup: float | None = None
    strang_bound: float | None = None


def error_quad_degree(space: DiscreteSpace) -> int:
    # Errors of non-polynomial solutions get two extra degrees.
    return min(space.quad_degree + 2, MAX_QUADRATURE_DEGREE)


def error_norms(
    exact: ManufacturedSolution,
    u_h: FeFunction,
    space: DiscreteSpace,
    p: ProblemSpec,
    cfg: MethodConfig,
) -> ErrorSummary:
    """L2, broken H1 and, for interior penalty methods, energy norm of u - u_h."""
    error = difference(AnalyticFunction(exact.u, exact.grad_u), DiscreteFunction(u_h))
    degree = error_quad_degree(space)
    m = space.mesh

    energy = None
    if cfg.scheme == "IPG":
        energy = norm_of(
            NormKind.ENERGY_VH,
            p,
            m,
            error,
            degree,
            eta=norm_eta(NormKind.ENERGY_VH, cfg),
        )
    return ErrorSummary(
        l2=norm_of(NormKind.L2, p, m, error, degree),
        broken_h1=norm_of(NormKind.BROKEN_H1_SEMI, p, m, error, degree),
        energy=energy,
    )
