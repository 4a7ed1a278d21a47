#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from dcr_fem._mesh.generate import BoundaryLayout
from dcr_fem.errors import InvalidArgumentError
from dcr_fem.types import Field, NDArrayFloat

# Boundary fields take points (..., 2) and outward unit normals (..., 2).
BoundaryField = Callable[[NDArrayFloat, NDArrayFloat], NDArrayFloat]


def constant_scalar(value: float) -> Field:
    def evaluate(x: NDArrayFloat) -> NDArrayFloat:
        return np.full(np.shape(x)[:-1], value, dtype=np.float64)

    return evaluate


def constant_vector(vx: float, vy: float) -> Field:
    def evaluate(x: NDArrayFloat) -> NDArrayFloat:
        return np.broadcast_to(
            np.array([vx, vy], dtype=np.float64), np.shape(x)
        ).copy()

    return evaluate


def diagonal_matrix(kxx: Field, kyy: Field) -> Field:
    def evaluate(x: NDArrayFloat) -> NDArrayFloat:
        out = np.zeros(np.shape(x)[:-1] + (2, 2), dtype=np.float64)
        out[..., 0, 0] = kxx(x)
        out[..., 1, 1] = kyy(x)
        return out

    return evaluate


def identity_matrix() -> Field:
    one = constant_scalar(1.0)
    return diagonal_matrix(one, one)


def zero_boundary_field(x: NDArrayFloat, normal: NDArrayFloat) -> NDArrayFloat:
    return np.zeros(np.shape(x)[:-1], dtype=np.float64)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Smooth function with analytic gradient and Hessian."""

    u: Field
    grad_u: Field
    hess_u: Field

    def gradient_fd_error(self, points: NDArrayFloat, step: float = 1e-6) -> float:
        """Largest relative deviation of grad_u from central differences."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        fd = np.empty_like(points)
        for axis in range(2):
            shift = np.zeros(2)
            shift[axis] = step
            fd[:, axis] = (self.u(points + shift) - self.u(points - shift)) / (
                2.0 * step
            )
        grad = self.grad_u(points)
        scale = max(float(np.abs(grad).max()), 1.0)
        return float(np.abs(grad - fd).max() / scale)


class CoercivityKind(Enum):
    DIRICHLET_MEASURE = "DirichletMeasure"
    REACTION_LOWER_BOUND = "ReactionLowerBound"


@dataclass(frozen=True)
class CoercivityMode:
    """Additional condition that makes the bilinear form coercive.

    Either the Dirichlet boundary has positive measure or r + div(c)/2 >= r0 > 0.
    """

    kind: CoercivityKind
    r0: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is CoercivityKind.REACTION_LOWER_BOUND and not self.r0 > 0:
            raise InvalidArgumentError(
                f"ReactionLowerBound requires r0 > 0, got {self.r0}."
            )

    @classmethod
    def dirichlet_measure(cls) -> CoercivityMode:
        return cls(kind=CoercivityKind.DIRICHLET_MEASURE)

    @classmethod
    def reaction_lower_bound(cls, r0: float) -> CoercivityMode:
        return cls(kind=CoercivityKind.REACTION_LOWER_BOUND, r0=r0)

    def __str__(self) -> str:
        if self.kind is CoercivityKind.REACTION_LOWER_BOUND:
            return f"{self.kind.value}(r0={self.r0:g})"
        return self.kind.value


@dataclass(frozen=True)
class ProblemSpec:
    """Data of -div(K grad u - c u) + r u = f with mixed boundary conditions.

    Boundary conditions are (K grad u - c u).nu = g1 on Gamma1,
    (K grad u - c u).nu + alpha_tilde u = g2 on Gamma2 and u = g3 on Gamma3. The
    layout decides which sides of the unit square belong to which piece.
    """

    name: str
    description: str
    K: Field
    c: Field
    div_c: Field
    r: Field
    f: Field
    alpha_tilde: Field
    g1: BoundaryField
    g2: BoundaryField
    g3: BoundaryField
    k0: float
    layout: BoundaryLayout = field(default_factory=BoundaryLayout)
    coercivity: CoercivityMode = field(default_factory=CoercivityMode.dirichlet_measure)
    exact: Optional[ManufacturedSolution] = None
    # Solution v_g of the adjoint problem -div(K grad v) - c.grad v + r v = g.
    adjoint_exact: Optional[ManufacturedSolution] = None
    adjoint_source: Optional[Field] = None


def manufactured_source(
    exact: ManufacturedSolution,
    K: Field,
    div_K: Field,
    c: Field,
    div_c: Field,
    r: Field,
) -> Field:
    """Returns f = -div(K grad u - c u) + r u.

    div_K is the row divergence, (div_K)_j = sum_i d_i K_ij.
    """

    def f(x: NDArrayFloat) -> NDArrayFloat:
        grad = exact.grad_u(x)
        hess = exact.hess_u(x)
        u = exact.u(x)
        div_flux = np.einsum("...j,...j->...", div_K(x), grad) + np.einsum(
            "...ij,...ij->...", K(x), hess
        )
        return np.asarray(
            -div_flux
            + div_c(x) * u
            + np.einsum("...j,...j->...", c(x), grad)
            + r(x) * u
        )

    return f


def adjoint_source(
    adjoint: ManufacturedSolution,
    K: Field,
    div_K: Field,
    c: Field,
    r: Field,
) -> Field:
    """Returns g = -div(K grad v) - c.grad v + r v."""

    def g(x: NDArrayFloat) -> NDArrayFloat:
        grad = adjoint.grad_u(x)
        div_flux = np.einsum("...j,...j->...", div_K(x), grad) + np.einsum(
            "...ij,...ij->...", K(x), adjoint.hess_u(x)
        )
        return np.asarray(
            -div_flux - np.einsum("...j,...j->...", c(x), grad) + r(x) * adjoint.u(x)
        )

    return g
