#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.problem import BoundaryField, ManufacturedSolution, ProblemSpec
from dcr_fem.errors import InvalidManufacturedSolutionError
from dcr_fem.types import Field, NDArrayFloat

DIRICHLET_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryData:
    g1: BoundaryField
    g2: BoundaryField
    g3: BoundaryField


def derive_boundary_data(
    p: ProblemSpec,
    m: Mesh | None = None,
    require_zero_dirichlet: bool = False,
) -> BoundaryData:
    """Boundary data consistent with the exact solution of p.

    g1 = (K grad u - c u).nu, g2 = g1 + alpha_tilde u and g3 = u.

    Args:
        p:
            Problem with an exact solution.
        m:
            Mesh whose Gamma3 face midpoints are checked if require_zero_dirichlet
            is set.
        require_zero_dirichlet:
            Crouzeix-Raviart discretizations impose u = 0 on Gamma3 by eliminating
            degrees of freedom. Set this to reject solutions that do not vanish
            there.
    """
    if p.exact is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' has no exact solution to derive boundary data from."
        )
    data = boundary_data_from_exact(p.exact, K=p.K, c=p.c, alpha_tilde=p.alpha_tilde)
    if require_zero_dirichlet and m is not None:
        dirichlet = m.faces_of_kind(FaceKind.GAMMA3)
        if len(dirichlet):
            values = np.abs(p.exact.u(m.face_midpoints[dirichlet]))
            worst = int(np.argmax(values))
            if values[worst] > DIRICHLET_ZERO_TOL:
                raise InvalidManufacturedSolutionError(
                    f"Exact solution of '{p.name}' is {values[worst]:.3e} at the "
                    f"midpoint of Gamma3 face {dirichlet[worst]}, but the "
                    "Crouzeix-Raviart path requires u = 0 on Gamma3."
                )
    return data


def boundary_data_from_exact(
    exact: ManufacturedSolution, K: Field, c: Field, alpha_tilde: Field
) -> BoundaryData:
    def g1(x: NDArrayFloat, normal: NDArrayFloat) -> NDArrayFloat:
        flux = np.einsum("...ij,...j->...i", K(x), exact.grad_u(x)) - c(x) * exact.u(
            x
        )[..., None]
        return np.asarray(np.sum(flux * normal, axis=-1))

    def g2(x: NDArrayFloat, normal: NDArrayFloat) -> NDArrayFloat:
        return g1(x, normal) + alpha_tilde(x) * exact.u(x)

    def g3(x: NDArrayFloat, normal: NDArrayFloat) -> NDArrayFloat:
        return np.asarray(exact.u(x))

    return BoundaryData(g1=g1, g2=g2, g3=g3)


def with_boundary_data(p: ProblemSpec, data: BoundaryData) -> ProblemSpec:
    return dataclasses.replace(p, g1=data.g1, g2=data.g2, g3=data.g3)
