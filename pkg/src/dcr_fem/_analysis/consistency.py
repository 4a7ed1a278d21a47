#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging

import numpy as np

from dcr_fem._assembly import forms
from dcr_fem._assembly.assemble import (
    bilinear_form,
    classified,
    linear_form,
    residual_of_exact,
)
from dcr_fem._assembly.fields import AnalyticFunction, BasisFunctions
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.space import DiscreteSpace
from dcr_fem._linalg.gram import GramMatrix, NormKind, gram
from dcr_fem._linalg.spectral import dual_norm
from dcr_fem._mesh.mesh import Mesh
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import InvalidManufacturedSolutionError
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)


def residual_norm_kind(cfg: MethodConfig) -> NormKind:
    """Norm of the test space in which consistency residuals are measured."""
    return NormKind.BROKEN_H1_SEMI if cfg.scheme == "CR1" else NormKind.ENERGY_VH


def residual_gram(s: DiscreteSpace, p: ProblemSpec, cfg: MethodConfig) -> GramMatrix:
    return gram(s, residual_norm_kind(cfg), p, cfg)


def consistency_norm(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    M: GramMatrix | None = None,
) -> float:
    """Dual norm of the consistency residual a_h(u, .) - l_h(.) over the test space."""
    M = residual_gram(s, p, cfg) if M is None else M
    value = dual_norm(residual_of_exact(p, m, s, cfg), M)
    logger.debug(f"Consistency dual norm of {cfg.describe()}: {value:.6e}")
    return value


def rhs_dual_norm(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    M: GramMatrix | None = None,
) -> float:
    """Dual norm of l_h, the scale against which consistency residuals are judged."""
    M = residual_gram(s, p, cfg) if M is None else M
    basis = BasisFunctions(s)
    rhs = forms.integrate_linear(
        linear_form(p, cfg), p, classified(p, m), basis, s.quad_degree
    )
    return dual_norm(rhs, M)


def adjoint_residual(
    p: ProblemSpec, m: Mesh, s: DiscreteSpace, cfg: MethodConfig
) -> NDArrayFloat:
    """r*_i = a_h(phi_i, v_g) - (g, phi_i) for the exact adjoint solution v_g."""
    if p.adjoint_exact is None or p.adjoint_source is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' has no adjoint solution."
        )
    m = classified(p, m)
    basis = BasisFunctions(s)
    adjoint = AnalyticFunction(p.adjoint_exact.u, p.adjoint_exact.grad_u)
    applied = forms.integrate_bilinear(
        bilinear_form(cfg), p, m, basis, adjoint, s.quad_degree
    )
    source = forms.integrate_linear(
        forms.source_form(p.adjoint_source), p, m, basis, s.quad_degree
    )
    return np.asarray(applied.toarray()[0] - source)


def adjoint_consistency_norm(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    M: GramMatrix | None = None,
) -> float:
    """Dual norm of the adjoint consistency residual over the test space."""
    M = residual_gram(s, p, cfg) if M is None else M
    value = dual_norm(adjoint_residual(p, m, s, cfg), M)
    logger.debug(f"Adjoint consistency dual norm of {cfg.describe()}: {value:.6e}")
    return value
