#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
"""Manufactured test problems on the unit square.

The boundary data of every problem is derived from its exact solution, so the
discrete solutions converge to the exact one.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from dcr_fem._mesh.generate import BoundaryLayout, Side
from dcr_fem._mesh.mesh import FaceKind
from dcr_fem._problems.boundary_data import boundary_data_from_exact
from dcr_fem._problems.problem import (
    CoercivityMode,
    ManufacturedSolution,
    ProblemSpec,
    adjoint_source,
    constant_scalar,
    constant_vector,
    diagonal_matrix,
    identity_matrix,
    manufactured_source,
)
from dcr_fem.errors import InvalidArgumentError
from dcr_fem.types import Field, NDArrayFloat


def _build(
    name: str,
    description: str,
    exact: ManufacturedSolution,
    K: Field,
    div_K: Field,
    c: Field,
    div_c: Field,
    r: Field,
    alpha_tilde: Field,
    layout: BoundaryLayout,
    coercivity: CoercivityMode,
    k0: float = 1.0,
    adjoint_exact: ManufacturedSolution | None = None,
) -> ProblemSpec:
    data = boundary_data_from_exact(exact, K=K, c=c, alpha_tilde=alpha_tilde)
    return ProblemSpec(
        name=name,
        description=description,
        K=K,
        c=c,
        div_c=div_c,
        r=r,
        f=manufactured_source(exact, K=K, div_K=div_K, c=c, div_c=div_c, r=r),
        alpha_tilde=alpha_tilde,
        g1=data.g1,
        g2=data.g2,
        g3=data.g3,
        k0=k0,
        layout=layout,
        coercivity=coercivity,
        exact=exact,
        adjoint_exact=adjoint_exact,
        adjoint_source=(
            None
            if adjoint_exact is None
            else adjoint_source(adjoint_exact, K=K, div_K=div_K, c=c, r=r)
        ),
    )


def _hessian(uxx: NDArrayFloat, uxy: NDArrayFloat, uyy: NDArrayFloat) -> NDArrayFloat:
    return np.stack([np.stack([uxx, uxy], -1), np.stack([uxy, uyy], -1)], -2)


def poisson_dirichlet() -> ProblemSpec:
    pi = np.pi

    def u(x: NDArrayFloat) -> NDArrayFloat:
        return np.sin(pi * x[..., 0]) * np.sin(pi * x[..., 1])

    def grad_u(x: NDArrayFloat) -> NDArrayFloat:
        sx, sy = np.sin(pi * x[..., 0]), np.sin(pi * x[..., 1])
        cx, cy = np.cos(pi * x[..., 0]), np.cos(pi * x[..., 1])
        return np.stack([pi * cx * sy, pi * sx * cy], axis=-1)

    def hess_u(x: NDArrayFloat) -> NDArrayFloat:
        sx, sy = np.sin(pi * x[..., 0]), np.sin(pi * x[..., 1])
        cx, cy = np.cos(pi * x[..., 0]), np.cos(pi * x[..., 1])
        return _hessian(-(pi**2) * sx * sy, pi**2 * cx * cy, -(pi**2) * sx * sy)

    zero = constant_scalar(0.0)
    return _build(
        name="P1",
        description="Poisson, homogeneous Dirichlet, u = sin(pi x) sin(pi y)",
        exact=ManufacturedSolution(u=u, grad_u=grad_u, hess_u=hess_u),
        K=identity_matrix(),
        div_K=constant_vector(0.0, 0.0),
        c=constant_vector(0.0, 0.0),
        div_c=zero,
        r=zero,
        alpha_tilde=zero,
        layout=BoundaryLayout.uniform(FaceKind.GAMMA3),
        coercivity=CoercivityMode.dirichlet_measure(),
    )


def _cosine_exponential() -> ManufacturedSolution:
    """u = cos(pi x / 2) exp(y), vanishes on the right side of the square."""
    half_pi = 0.5 * np.pi

    def u(x: NDArrayFloat) -> NDArrayFloat:
        return np.cos(half_pi * x[..., 0]) * np.exp(x[..., 1])

    def grad_u(x: NDArrayFloat) -> NDArrayFloat:
        c, s = np.cos(half_pi * x[..., 0]), np.sin(half_pi * x[..., 0])
        e = np.exp(x[..., 1])
        return np.stack([-half_pi * s * e, c * e], axis=-1)

    def hess_u(x: NDArrayFloat) -> NDArrayFloat:
        c, s = np.cos(half_pi * x[..., 0]), np.sin(half_pi * x[..., 0])
        e = np.exp(x[..., 1])
        return _hessian(-(half_pi**2) * c * e, -half_pi * s * e, c * e)

    return ManufacturedSolution(u=u, grad_u=grad_u, hess_u=hess_u)


def _variable_diffusion_x() -> tuple[Field, Field]:
    """K = diag(1 + x^2, 1) and its row divergence (2x, 0)."""

    def kxx(x: NDArrayFloat) -> NDArrayFloat:
        return 1.0 + x[..., 0] ** 2

    def div_K(x: NDArrayFloat) -> NDArrayFloat:
        return np.stack([2.0 * x[..., 0], np.zeros_like(x[..., 0])], axis=-1)

    return diagonal_matrix(kxx, constant_scalar(1.0)), div_K


def mixed_dcr() -> ProblemSpec:
    K, div_K = _variable_diffusion_x()
    return _build(
        name="P2",
        description=(
            "Diffusion-convection-reaction, Neumann left, Robin top/bottom, "
            "Dirichlet right"
        ),
        exact=_cosine_exponential(),
        K=K,
        div_K=div_K,
        c=constant_vector(0.5, 0.5),
        div_c=constant_scalar(0.0),
        r=constant_scalar(1.0),
        alpha_tilde=constant_scalar(2.0),
        layout=BoundaryLayout(
            left=FaceKind.GAMMA1,
            right=FaceKind.GAMMA3,
            bottom=FaceKind.GAMMA2,
            top=FaceKind.GAMMA2,
        ),
        coercivity=CoercivityMode.reaction_lower_bound(1.0),
    )


def polynomial(degree: int = 1) -> ProblemSpec:
    """Polynomial solution of degree k with polynomial coefficients.

    All integrands of the interior penalty forms are polynomials of degree at most
    2k + 2, so element and face quadrature are exact.
    """
    if degree < 1:
        raise InvalidArgumentError(f"Polynomial degree must be >= 1, got {degree}.")
    k = degree

    def u(x: NDArrayFloat) -> NDArrayFloat:
        s = 1.0 + x[..., 0] - 0.5 * x[..., 1]
        return s**k + x[..., 1] ** k

    def grad_u(x: NDArrayFloat) -> NDArrayFloat:
        s = 1.0 + x[..., 0] - 0.5 * x[..., 1]
        ds = k * s ** (k - 1)
        return np.stack([ds, -0.5 * ds + k * x[..., 1] ** (k - 1)], axis=-1)

    def hess_u(x: NDArrayFloat) -> NDArrayFloat:
        if k == 1:
            zero = np.zeros(np.shape(x)[:-1])
            return _hessian(zero, zero, zero)
        s = 1.0 + x[..., 0] - 0.5 * x[..., 1]
        dds = k * (k - 1) * s ** (k - 2)
        yy = 0.25 * dds + k * (k - 1) * x[..., 1] ** (k - 2)
        return _hessian(dds, -0.5 * dds, yy)

    def kxx(x: NDArrayFloat) -> NDArrayFloat:
        return 1.0 + x[..., 0]

    def kyy(x: NDArrayFloat) -> NDArrayFloat:
        return 1.0 + x[..., 1]

    def r(x: NDArrayFloat) -> NDArrayFloat:
        return 1.0 + x[..., 0] * x[..., 1]

    return _build(
        name="P3",
        description=f"Polynomial solution of degree {k} with polynomial coefficients",
        exact=ManufacturedSolution(u=u, grad_u=grad_u, hess_u=hess_u),
        K=diagonal_matrix(kxx, kyy),
        div_K=constant_vector(1.0, 1.0),
        c=constant_vector(1.0, 0.5),
        div_c=constant_scalar(0.0),
        r=r,
        alpha_tilde=constant_scalar(1.0),
        layout=BoundaryLayout(
            left=FaceKind.GAMMA3,
            right=FaceKind.GAMMA2,
            bottom=FaceKind.GAMMA1,
            top=FaceKind.GAMMA2,
        ),
        coercivity=CoercivityMode.dirichlet_measure(),
    )


def adjoint_manufactured() -> ProblemSpec:
    """Primal and adjoint solution u = v_g = x (1 - x).

    Both satisfy homogeneous boundary conditions of their problems: zero on the
    left and right sides and zero normal flux on the top and bottom sides.
    """

    def u(x: NDArrayFloat) -> NDArrayFloat:
        return x[..., 0] * (1.0 - x[..., 0])

    def grad_u(x: NDArrayFloat) -> NDArrayFloat:
        return np.stack(
            [1.0 - 2.0 * x[..., 0], np.zeros_like(x[..., 0])], axis=-1
        )

    def hess_u(x: NDArrayFloat) -> NDArrayFloat:
        zero = np.zeros(np.shape(x)[:-1])
        return _hessian(np.full_like(zero, -2.0), zero, zero)

    def c(x: NDArrayFloat) -> NDArrayFloat:
        return np.stack(
            [0.5 * (1.0 - 2.0 * x[..., 0]), np.zeros_like(x[..., 0])], axis=-1
        )

    K, div_K = _variable_diffusion_x()
    exact = ManufacturedSolution(u=u, grad_u=grad_u, hess_u=hess_u)
    return _build(
        name="P4",
        description="Adjoint-manufactured problem, u = v_g = x (1 - x)",
        exact=exact,
        K=K,
        div_K=div_K,
        c=c,
        div_c=constant_scalar(-1.0),
        r=constant_scalar(1.0),
        alpha_tilde=constant_scalar(0.0),
        layout=BoundaryLayout(
            left=FaceKind.GAMMA3,
            right=FaceKind.GAMMA3,
            bottom=FaceKind.GAMMA1,
            top=FaceKind.GAMMA1,
        ),
        coercivity=CoercivityMode.dirichlet_measure(),
        adjoint_exact=exact,
    )


def _split_bottom(side: Side, midpoint: NDArrayFloat) -> Optional[FaceKind]:
    if side != "bottom":
        return None
    return FaceKind.GAMMA1 if midpoint[0] < 0.5 else FaceKind.GAMMA2


def inflow_dirichlet() -> ProblemSpec:
    """All boundary face kinds with the inflow condition on Gamma3.

    Top and right become GAMMA21 since alpha_tilde = nu.c = 1/2 there. The bottom
    is split at x = 1/2 into GAMMA1 and GAMMA22, so meshes need an even number of
    subdivisions.
    """
    K, div_K = _variable_diffusion_x()
    return _build(
        name="P5",
        description=(
            "Diffusion-convection-reaction, inflow Dirichlet left, all boundary "
            "face kinds"
        ),
        exact=_cosine_exponential(),
        K=K,
        div_K=div_K,
        c=constant_vector(0.5, 0.5),
        div_c=constant_scalar(0.0),
        r=constant_scalar(1.0),
        alpha_tilde=constant_scalar(0.5),
        layout=BoundaryLayout(
            left=FaceKind.GAMMA3,
            right=FaceKind.GAMMA2,
            bottom=FaceKind.GAMMA2,
            top=FaceKind.GAMMA2,
            rule=_split_bottom,
        ),
        coercivity=CoercivityMode.dirichlet_measure(),
    )
