#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dcr_fem._assembly.assemble import classified
from dcr_fem._assembly.fields import (
    AnalyticFunction,
    BasisFunctions,
    DiscreteFunction,
    difference,
)
from dcr_fem._assembly.forms import integrate_bilinear
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.space import DiscreteSpace, FeFunction
from dcr_fem._linalg.gram import (
    GramMatrix,
    NormKind,
    gram,
    norm_eta,
    norm_form,
    norm_of,
)
from dcr_fem._linalg.solve import solve_matrix
from dcr_fem._problems.problem import ManufacturedSolution, ProblemSpec
from dcr_fem.errors import RankDeficientGramError, SingularSystemError


def best_approximation(
    exact: ManufacturedSolution,
    space: DiscreteSpace,
    norm_kind: NormKind,
    p: ProblemSpec,
    cfg: MethodConfig,
    M: GramMatrix | None = None,
) -> tuple[FeFunction, float]:
    """Projection of the exact solution onto the space in the given norm.

    Returns:
        The minimizer w_h of |u - w_h| and the distance |u - w_h|.
    """
    eta = norm_eta(norm_kind, cfg)
    m = classified(p, space.mesh)
    M = gram(space, norm_kind, p, cfg) if M is None else M
    exact_fn = AnalyticFunction(exact.u, exact.grad_u)
    moments = integrate_bilinear(
        norm_form(norm_kind, eta=eta),
        p,
        m,
        exact_fn,
        BasisFunctions(space),
        space.quad_degree,
    )
    try:
        coefficients = solve_matrix(M.matrix, moments.toarray()[:, 0])
    except SingularSystemError as ex:
        raise RankDeficientGramError(
            f"The {norm_kind.value} Gram matrix is singular on {space.describe()}: "
            f"{ex.pivot_info}"
        ) from None
    w_h = FeFunction(space=space, coefficients=coefficients)
    distance = norm_of(
        norm_kind,
        p,
        m,
        difference(exact_fn, DiscreteFunction(w_h)),
        space.quad_degree,
        eta=eta,
    )
    return w_h, distance
