#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from dcr_fem._fespace.basis import (
    MAX_DEGREE,
    CrouzeixRaviartBasis,
    LagrangeBasis,
    ReferenceBasis,
)
from dcr_fem._fespace.quadrature import triangle_rule
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem.errors import InvalidArgumentError, UnsupportedDegreeError
from dcr_fem.types import Field, NDArrayFloat, NDArrayInt

logger = logging.getLogger(__name__)


class SpaceKind(Enum):
    CR1 = "CR1"
    BROKEN_P = "BrokenP"


@dataclass(frozen=True, eq=False)
class DiscreteSpace:
    """Finite element space on a mesh.

    element_dofs[t, i] is the global index of local basis function i on triangle
    t, or -1 if the function is eliminated. Crouzeix-Raviart functions belonging
    to GAMMA3 faces are eliminated.
    """

    kind: SpaceKind
    degree: int
    mesh: Mesh
    basis: ReferenceBasis
    element_dofs: NDArrayInt  # (nt, n)
    ndof: int
    constrained: NDArrayInt  # Face ids of eliminated CR1 functions.

    @property
    def quad_degree(self) -> int:
        return 2 * self.degree + 2

    @property
    def num_local(self) -> int:
        return self.basis.num_functions

    @property
    def is_broken(self) -> bool:
        return self.kind is SpaceKind.BROKEN_P

    @functools.cached_property
    def inverse_jacobians_t(self) -> NDArrayFloat:
        """Inverse transposed Jacobians of the element maps, shape (nt, 2, 2)."""
        return np.asarray(np.linalg.inv(self.mesh.jacobians).transpose(0, 2, 1))

    def describe(self) -> str:
        if self.kind is SpaceKind.CR1:
            return "CR1"
        return f"BrokenP{self.degree}"


@dataclass(frozen=True, eq=False)
class FeFunction:
    space: DiscreteSpace
    coefficients: NDArrayFloat

    def __post_init__(self) -> None:
        coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if coefficients.shape != (self.space.ndof,):
            raise InvalidArgumentError(
                f"Expected {self.space.ndof} coefficients for space "
                f"{self.space.describe()}, got shape {coefficients.shape}."
            )
        object.__setattr__(self, "coefficients", coefficients)

    def local_coefficients(self) -> NDArrayFloat:
        """Coefficients per element, zero for eliminated functions, shape (nt, n)."""
        dofs = self.space.element_dofs
        return np.where(dofs >= 0, self.coefficients[np.maximum(dofs, 0)], 0.0)


def build_space(m: Mesh, kind: SpaceKind | str, degree: int = 1) -> DiscreteSpace:
    """Builds the degrees of freedom of a discrete space.

    Args:
        m:
            The mesh.
        kind:
            SpaceKind.CR1 or SpaceKind.BROKEN_P, or their string values.
        degree:
            Polynomial degree of broken spaces in [1, 4]. CR1 spaces have degree 1.
    """
    kind = SpaceKind(kind)
    if kind is SpaceKind.CR1:
        free = m.face_kind != int(FaceKind.GAMMA3)
        face_to_dof = np.full(m.num_faces, -1, dtype=np.int64)
        face_to_dof[free] = np.arange(int(free.sum()), dtype=np.int64)
        space = DiscreteSpace(
            kind=kind,
            degree=1,
            mesh=m,
            basis=CrouzeixRaviartBasis(),
            element_dofs=face_to_dof[m.triangle_faces],
            ndof=int(free.sum()),
            constrained=np.flatnonzero(~free),
        )
    else:
        if degree < 1 or degree > MAX_DEGREE:
            raise UnsupportedDegreeError(
                f"Broken spaces support degrees 1 to {MAX_DEGREE}, got {degree}."
            )
        basis = LagrangeBasis(degree)
        n = basis.num_functions
        space = DiscreteSpace(
            kind=kind,
            degree=degree,
            mesh=m,
            basis=basis,
            element_dofs=np.arange(m.num_triangles * n, dtype=np.int64).reshape(-1, n),
            ndof=m.num_triangles * n,
            constrained=np.zeros(0, dtype=np.int64),
        )
    logger.debug(f"Built {space.describe()} space with {space.ndof} dofs.")
    return space


def evaluate(
    space: DiscreteSpace, fn: FeFunction, element: int, points: NDArrayFloat
) -> tuple[NDArrayFloat, NDArrayFloat]:
    """Value and physical gradient of fn on one element.

    Args:
        space:
            Space of fn.
        fn:
            The discrete function.
        element:
            Triangle index.
        points:
            Reference coordinates (s, t) with shape (2,) or (nq, 2).

    Returns:
        Values with shape (nq,) and gradients with shape (nq, 2), or a scalar and
        a (2,) vector for a single point.
    """
    if not 0 <= element < space.mesh.num_triangles:
        raise InvalidArgumentError(
            f"Element {element} is out of range [0, {space.mesh.num_triangles})."
        )
    points = np.asarray(points, dtype=np.float64)
    single = points.shape == (2,)
    points = points.reshape(-1, 2)
    coefficients = fn.local_coefficients()[element]
    values = coefficients @ space.basis.values(points)
    ref_grads = np.einsum("n,nqd->qd", coefficients, space.basis.gradients(points))
    grads = ref_grads @ space.inverse_jacobians_t[element].T
    if single:
        return values[0], grads[0]
    return values, grads


def interpolate(space: DiscreteSpace, u: Field) -> FeFunction:
    """Nodal interpolant of u.

    CR1 functions take the values of u at face midpoints. Broken spaces take the
    values at the mapped lattice nodes of every element.
    """
    m = space.mesh
    coefficients = np.zeros(space.ndof)
    if space.kind is SpaceKind.CR1:
        free = space.element_dofs >= 0
        values = u(m.face_midpoints)[m.triangle_faces]
        coefficients[space.element_dofs[free]] = values[free]
    else:
        nodes = space.basis.nodes
        barycentric = np.concatenate([1.0 - nodes.sum(axis=1, keepdims=True), nodes], 1)
        values = u(m.map_to_elements(barycentric))
        coefficients[space.element_dofs] = values
    return FeFunction(space=space, coefficients=coefficients)


def elementwise_l2_projection(space: DiscreteSpace, u: Field) -> FeFunction:
    """L2 projection of u onto a broken space, computed element by element."""
    if not space.is_broken:
        raise InvalidArgumentError(
            f"Elementwise L2 projection needs a broken space, got {space.describe()}."
        )
    rule = triangle_rule(space.quad_degree)
    phi = space.basis.values(rule.reference_points)  # (n, nq)
    mass = (phi * rule.weights) @ phi.T
    values = u(space.mesh.map_to_elements(rule.points))  # (nt, nq)
    moments = (values * rule.weights) @ phi.T  # (nt, n)
    # The Jacobian determinant cancels between mass matrix and moments.
    local = np.linalg.solve(mass, moments.T).T
    coefficients = np.zeros(space.ndof)
    coefficients[space.element_dofs] = local
    return FeFunction(space=space, coefficients=coefficients)
