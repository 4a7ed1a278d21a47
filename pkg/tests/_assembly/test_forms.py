#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dataclasses import replace

import numpy as np

from dcr_fem._assembly import forms
from dcr_fem._assembly.fields import BasisFunctions
from dcr_fem._assembly.forms import (
    BilinearForm,
    FaceTerm,
    LinearForm,
    VolumeTerm,
    integrate_bilinear,
    integrate_linear,
)
from dcr_fem._fespace.space import SpaceKind, build_space
from dcr_fem._mesh.mesh import FaceKind
from dcr_fem._problems.problem import constant_scalar

from .. import helpers


def test_integrate_bilinear__mass() -> None:
    m = helpers.unit_triangle()
    space = build_space(m, SpaceKind.BROKEN_P, degree=1)
    basis = BasisFunctions(space)
    matrix = integrate_bilinear(
        BilinearForm(volume=(VolumeTerm.MASS,)), helpers.poisson(), m, basis, basis, 4
    )
    expected = 0.5 / 12 * (np.ones((3, 3)) + np.eye(3))
    np.testing.assert_allclose(matrix.toarray(), expected, atol=1e-15)


def test_integrate_bilinear__stiffness() -> None:
    m = helpers.unit_triangle()
    space = build_space(m, SpaceKind.BROKEN_P, degree=1)
    basis = BasisFunctions(space)
    matrix = integrate_bilinear(
        BilinearForm(volume=(VolumeTerm.DIFFUSION,)),
        helpers.poisson(k0=2.0),
        m,
        basis,
        basis,
        4,
    )
    expected = 2.0 * np.array([[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
    np.testing.assert_allclose(matrix.toarray(), expected, atol=1e-14)


def test_integrate_bilinear__penalty() -> None:
    m = helpers.unit_triangle()
    space = build_space(m, SpaceKind.BROKEN_P, degree=1)
    basis = BasisFunctions(space)
    form = BilinearForm(faces={FaceKind.GAMMA3: (FaceTerm.PENALTY,)}, eta=1.0)
    matrix = integrate_bilinear(form, helpers.poisson(), m, basis, basis, 4)
    # Every vertex lies on two faces, (1/h_F) int_F l_i l_j does not depend on h_F.
    expected = np.full((3, 3), 1 / 6) + np.eye(3) / 2
    np.testing.assert_allclose(matrix.toarray(), expected, atol=1e-14)


def test_integrate_bilinear__skips_other_face_kinds() -> None:
    m = helpers.unit_triangle(kind=FaceKind.GAMMA1)
    space = build_space(m, SpaceKind.BROKEN_P, degree=1)
    basis = BasisFunctions(space)
    form = BilinearForm(faces={FaceKind.GAMMA3: (FaceTerm.PENALTY,)})
    matrix = integrate_bilinear(form, helpers.poisson(), m, basis, basis, 4)
    assert matrix.shape == (3, 3)
    assert matrix.nnz == 0


def test_integrate_linear__source() -> None:
    m = helpers.square(n=2)
    space = build_space(m, SpaceKind.BROKEN_P, degree=2)
    vector = integrate_linear(
        LinearForm(source=constant_scalar(3.0)),
        helpers.poisson(),
        m,
        BasisFunctions(space),
        space.quad_degree,
    )
    assert vector.shape == (space.ndof,)
    np.testing.assert_allclose(vector.sum(), 3.0)


def test_integrate_linear__neumann() -> None:
    m = helpers.square(n=2, kind=FaceKind.GAMMA1)
    space = build_space(m, SpaceKind.BROKEN_P, degree=1)
    p = helpers.poisson()
    p = replace(p, g1=lambda x, normal: np.ones(x.shape[:-1]))
    vector = integrate_linear(
        LinearForm(faces={FaceKind.GAMMA1: (forms.DataTerm.NEUMANN,)}),
        p,
        m,
        BasisFunctions(space),
        space.quad_degree,
    )
    # Perimeter of the unit square.
    np.testing.assert_allclose(vector.sum(), 4.0)


def test_integrate_bilinear__deterministic() -> None:
    p = helpers.with_convection(helpers.poisson(), 1.0, -0.5, 1.0)
    m = helpers.square(n=4)
    space = build_space(m, SpaceKind.BROKEN_P, degree=2)
    basis = BasisFunctions(space)
    form = forms.ipg_bilinear_form(theta=0, eta=10.0)
    first = integrate_bilinear(form, p, m, basis, basis, space.quad_degree)
    second = integrate_bilinear(form, p, m, basis, basis, space.quad_degree)
    np.testing.assert_array_equal(first.indptr, second.indptr)
    np.testing.assert_array_equal(first.indices, second.indices)
    np.testing.assert_array_equal(first.data, second.data)
    # No explicitly stored zeros.
    assert (first.data != 0).all()
