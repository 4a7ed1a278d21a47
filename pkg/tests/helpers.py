#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy import sparse

from dcr_fem._mesh.generate import BoundaryLayout, generate_unit_square
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.boundary_data import derive_boundary_data, with_boundary_data
from dcr_fem._problems.problem import (
    ManufacturedSolution,
    ProblemSpec,
    constant_scalar,
    constant_vector,
    identity_matrix,
    zero_boundary_field,
)
from dcr_fem.types import NDArrayFloat


def unit_triangle(kind: FaceKind = FaceKind.GAMMA3) -> Mesh:
    """Single triangle (0, 0), (1, 0), (0, 1) with all edges tagged as kind."""
    return Mesh.from_arrays(
        vertices=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        triangles=np.array([[0, 1, 2]]),
        boundary_tags={(1, 2): kind, (2, 0): kind, (0, 1): kind},
    )


def square(n: int = 2, kind: FaceKind | None = None) -> Mesh:
    layout = None if kind is None else BoundaryLayout.uniform(kind)
    return generate_unit_square(n, layout=layout)


def poisson(
    k0: float = 1.0, layout: BoundaryLayout | None = None, f: float = 1.0
) -> ProblemSpec:
    """K = k0 I, no convection and no reaction."""
    one = identity_matrix()
    return ProblemSpec(
        name="poisson",
        description="Poisson test problem",
        K=lambda x: k0 * one(x),
        c=constant_vector(0.0, 0.0),
        div_c=constant_scalar(0.0),
        r=constant_scalar(0.0),
        f=constant_scalar(f),
        alpha_tilde=constant_scalar(0.0),
        g1=zero_boundary_field,
        g2=zero_boundary_field,
        g3=zero_boundary_field,
        k0=k0,
        layout=BoundaryLayout() if layout is None else layout,
    )


def with_convection(p: ProblemSpec, cx: float, cy: float, r: float) -> ProblemSpec:
    return replace(p, c=constant_vector(cx, cy), r=constant_scalar(r))


def write_mesh_file(path: Path, lines: list[str]) -> Path:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def unit_triangle_lines(tag: int = 3) -> list[str]:
    return [
        "3 1 3",
        "0.0 0.0",
        "1.0 0.0",
        "0.0 1.0",
        "0 1 2",
        f"0 1 {tag}",
        f"1 2 {tag}",
        f"2 0 {tag}",
    ]


def dense(matrix: sparse.spmatrix | NDArrayFloat) -> NDArrayFloat:
    if sparse.issparse(matrix):
        return np.asarray(matrix.toarray())
    return np.asarray(matrix)


def assert_symmetric(matrix: sparse.spmatrix | NDArrayFloat, atol: float) -> None:
    a = dense(matrix)
    np.testing.assert_allclose(a, a.T, rtol=0.0, atol=atol)


def random_spd(rng: np.random.Generator, n: int) -> NDArrayFloat:
    q = rng.standard_normal((n, n))
    return np.asarray(q @ q.T + n * np.eye(n))


def linear_exact() -> ManufacturedSolution:
    """u(x, y) = x."""
    return ManufacturedSolution(
        u=lambda x: np.asarray(x[..., 0], dtype=np.float64),
        grad_u=lambda x: np.broadcast_to(np.array([1.0, 0.0]), np.shape(x)).copy(),
        hess_u=lambda x: np.zeros(np.shape(x)[:-1] + (2, 2)),
    )


def linear_patch_problem(k0: float = 1.0) -> ProblemSpec:
    """-div(k0 grad u) = 0 with u = x, Dirichlet on the left and Neumann elsewhere."""
    layout = BoundaryLayout(
        left=FaceKind.GAMMA3,
        right=FaceKind.GAMMA1,
        bottom=FaceKind.GAMMA1,
        top=FaceKind.GAMMA1,
    )
    p = replace(poisson(k0=k0, layout=layout, f=0.0), exact=linear_exact())
    return with_boundary_data(p, derive_boundary_data(p))
