#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from dcr_fem._assembly import forms
from dcr_fem._assembly.fields import AnalyticFunction, BasisFunctions, FieldSet
from dcr_fem._assembly.forms import BilinearForm, LinearForm
from dcr_fem._assembly.method_config import (
    MethodConfig,
    check_ipg_config,
    check_stability,
)
from dcr_fem._fespace.space import DiscreteSpace, SpaceKind
from dcr_fem._mesh.audit import classify_boundary
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.boundary_data import derive_boundary_data
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import (
    ConfigError,
    InvalidManufacturedSolutionError,
)
from dcr_fem.types import Field, NDArrayFloat

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparseSystem:
    matrix: sparse.csr_matrix
    rhs: NDArrayFloat

    @property
    def ndof(self) -> int:
        return int(self.matrix.shape[0])


def upwind_value(
    c_dot_nu: float, w_owner: float, w_neighbor: float | None, boundary: bool
) -> float:
    """Trace of w selected by the upwind rule.

    Takes the owner trace if c.nu_K > 0. Otherwise takes the neighbor trace on
    interior faces and zero on boundary faces.
    """
    if c_dot_nu > 0.0:
        return w_owner
    if boundary or w_neighbor is None:
        return 0.0
    return w_neighbor


def classified(p: ProblemSpec, m: Mesh) -> Mesh:
    """Splits coarse GAMMA2 faces of m into GAMMA21 and GAMMA22."""
    if len(m.faces_of_kind(FaceKind.GAMMA2)):
        return classify_boundary(m, p)
    return m


def bilinear_form(cfg: MethodConfig) -> BilinearForm:
    """Discrete bilinear form a_h of the configured scheme."""
    if cfg.scheme == "CR1":
        return forms.cr_bilinear_form()
    theta, eta = check_ipg_config(cfg)
    return forms.ipg_bilinear_form(theta=theta, eta=eta)


def linear_form(p: ProblemSpec, cfg: MethodConfig) -> LinearForm:
    """Discrete right-hand side l_h of the configured scheme."""
    if cfg.scheme == "CR1":
        return forms.cr_linear_form(p)
    theta, eta = check_ipg_config(cfg)
    return forms.ipg_linear_form(p, theta=theta, eta=eta)


def assemble_cr(p: ProblemSpec, m: Mesh, s: DiscreteSpace) -> SparseSystem:
    """Assembles the Crouzeix-Raviart system with upwinded convection.

    Dirichlet data must vanish. GAMMA3 functions are eliminated from the space.
    """
    if s.kind is not SpaceKind.CR1:
        raise ConfigError(
            f"Crouzeix-Raviart assembly needs a CR1 space, got {s.describe()}."
        )
    if s.mesh is not m:
        raise ConfigError("The space is built on a different mesh.")
    if p.exact is not None:
        derive_boundary_data(p, m, require_zero_dirichlet=True)
    m = classified(p, m)
    return _assemble(
        forms.cr_bilinear_form(), forms.cr_linear_form(p), p, m, s, "CR1"
    )


def assemble_ipg(
    p: ProblemSpec, m: Mesh, s: DiscreteSpace, cfg: MethodConfig
) -> SparseSystem:
    """Assembles the interior penalty system for theta in {-1, 0, 1}.

    Dirichlet data is imposed weakly with Nitsche terms.
    """
    theta, eta = check_ipg_config(cfg)
    if not s.is_broken:
        raise ConfigError(
            f"Interior penalty assembly needs a broken space, got {s.describe()}."
        )
    if s.mesh is not m:
        raise ConfigError("The space is built on a different mesh.")
    check_stability(cfg, p, m)
    m = classified(p, m)
    return _assemble(
        forms.ipg_bilinear_form(theta=theta, eta=eta),
        forms.ipg_linear_form(p, theta=theta, eta=eta),
        p,
        m,
        s,
        cfg.describe(),
    )


def assemble(
    p: ProblemSpec, m: Mesh, s: DiscreteSpace, cfg: MethodConfig
) -> SparseSystem:
    if cfg.scheme == "CR1":
        return assemble_cr(p, m, s)
    return assemble_ipg(p, m, s, cfg)


def assemble_adjoint(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    g: Field | None = None,
) -> SparseSystem:
    """Adjoint system: transposed matrix and right-hand side (g, phi_i).

    Args:
        g:
            Source of the adjoint problem. Defaults to p.adjoint_source.
    """
    g = p.adjoint_source if g is None else g
    if g is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' has no adjoint source."
        )
    m_classified = classified(p, m)
    basis = BasisFunctions(s)
    matrix = forms.integrate_bilinear(
        bilinear_form(cfg), p, m_classified, basis, basis, s.quad_degree
    )
    rhs = forms.integrate_linear(
        forms.source_form(g), p, m_classified, basis, s.quad_degree
    )
    return SparseSystem(matrix=matrix.T.tocsr(), rhs=rhs)


def residual_of_exact(
    p: ProblemSpec, m: Mesh, s: DiscreteSpace, cfg: MethodConfig
) -> NDArrayFloat:
    """Consistency residual r_i = a_h(u, phi_i) - l_h(phi_i) of the exact solution."""
    if p.exact is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' has no exact solution."
        )
    m = classified(p, m)
    basis = BasisFunctions(s)
    exact = AnalyticFunction(p.exact.u, p.exact.grad_u)
    applied = forms.integrate_bilinear(
        bilinear_form(cfg), p, m, exact, basis, s.quad_degree
    )
    rhs = forms.integrate_linear(linear_form(p, cfg), p, m, basis, s.quad_degree)
    return np.asarray(applied.toarray()[:, 0] - rhs)


def form_value(
    form: BilinearForm,
    p: ProblemSpec,
    m: Mesh,
    w: FieldSet,
    v: FieldSet,
    quad_degree: int,
) -> float:
    """Scalar form(w, v) of two single functions."""
    value = forms.integrate_bilinear(form, p, classified(p, m), w, v, quad_degree)
    return float(value.toarray()[0, 0])


def functional_value(
    form: LinearForm, p: ProblemSpec, m: Mesh, v: FieldSet, quad_degree: int
) -> float:
    """Scalar form(v) of a single function."""
    return float(
        forms.integrate_linear(form, p, classified(p, m), v, quad_degree)[0]
    )


def _assemble(
    a: BilinearForm,
    rhs: LinearForm,
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    name: str,
) -> SparseSystem:
    start = time.perf_counter()
    basis = BasisFunctions(s)
    matrix = forms.integrate_bilinear(a, p, m, basis, basis, s.quad_degree)
    vector = forms.integrate_linear(rhs, p, m, basis, s.quad_degree)
    logger.debug(
        f"Assembled {name} system for '{p.name}' with {s.ndof} dofs and "
        f"{matrix.nnz} nonzeros in {time.perf_counter() - start:.3f}s."
    )
    return SparseSystem(matrix=matrix, rhs=vector)
