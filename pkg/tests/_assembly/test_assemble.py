#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from typing import Optional

import numpy as np
import pytest

from dcr_fem._assembly import forms
from dcr_fem._assembly.assemble import (
    assemble,
    assemble_adjoint,
    assemble_cr,
    assemble_ipg,
    form_value,
    functional_value,
    residual_of_exact,
    upwind_value,
)
from dcr_fem._assembly.fields import AnalyticFunction, DiscreteFunction
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.space import SpaceKind, build_space, interpolate
from dcr_fem._linalg.gram import NormKind, gram
from dcr_fem._linalg.spectral import min_sym_eig
from dcr_fem._mesh.generate import BoundaryLayout, generate_unit_square
from dcr_fem._mesh.mesh import FaceKind
from dcr_fem._problems.problem import constant_scalar
from dcr_fem._problems.problem_helpers import get_problem
from dcr_fem.errors import ConfigError, InvalidManufacturedSolutionError

from .. import helpers

_CR = MethodConfig(scheme="CR1")


def _ipg(theta: int, eta: float = 20.0, degree: int = 1) -> MethodConfig:
    return MethodConfig(scheme="IPG", theta=theta, eta=eta, degree=degree)


@pytest.mark.parametrize(
    "c_dot_nu, owner, neighbor, boundary, expected",
    [
        (1.0, 3.0, 5.0, False, 3.0),
        (0.0, 3.0, 5.0, False, 5.0),
        (-1.0, 3.0, 5.0, False, 5.0),
        (2.0, 3.0, None, True, 3.0),
        (-2.0, 3.0, None, True, 0.0),
        (0.0, 3.0, None, True, 0.0),
    ],
)
def test_upwind_value(
    c_dot_nu: float,
    owner: float,
    neighbor: Optional[float],
    boundary: bool,
    expected: float,
) -> None:
    assert upwind_value(c_dot_nu, owner, neighbor, boundary) == expected


class TestAssembleCr:
    def test_local_stiffness(self) -> None:
        # CR functions 1 - 2 lambda_i have four times the P1 stiffness.
        m = helpers.unit_triangle(kind=FaceKind.GAMMA1)
        s = build_space(m, SpaceKind.CR1)
        a = assemble_cr(helpers.poisson(), m, s).matrix.toarray()
        helpers.assert_symmetric(a, atol=1e-14)
        np.testing.assert_allclose(a.sum(axis=1), 0.0, atol=1e-13)
        np.testing.assert_allclose(np.sort(np.diag(a)), [2.0, 2.0, 4.0])
        np.testing.assert_allclose(np.trace(a), 8.0)

    def test_rhs__constant_source(self) -> None:
        m = helpers.square(n=4, kind=FaceKind.GAMMA1)
        s = build_space(m, SpaceKind.CR1)
        sys = assemble_cr(helpers.poisson(f=1.0), m, s)
        # CR basis functions sum to one.
        assert sys.rhs.sum() == pytest.approx(1.0)

    def test_dirichlet_faces_eliminated(self) -> None:
        m = helpers.square(n=2)
        s = build_space(m, SpaceKind.CR1)
        sys = assemble_cr(helpers.poisson(), m, s)
        assert sys.ndof == len(m.faces_of_kind(FaceKind.INTERIOR))
        assert sys.matrix.shape == (sys.ndof, sys.ndof)

    def test_residual_of_linear_solution(self) -> None:
        p = helpers.linear_patch_problem(k0=2.0)
        m = generate_unit_square(4, layout=p.layout)
        s = build_space(m, SpaceKind.CR1)
        residual = residual_of_exact(p, m, s, _CR)
        np.testing.assert_allclose(residual, 0.0, atol=1e-12)

    def test_broken_space(self) -> None:
        m = helpers.square(n=2)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        with pytest.raises(ConfigError, match="needs a CR1 space"):
            assemble_cr(helpers.poisson(), m, s)

    def test_other_mesh(self) -> None:
        s = build_space(helpers.square(n=2), SpaceKind.CR1)
        with pytest.raises(ConfigError, match="different mesh"):
            assemble_cr(helpers.poisson(), helpers.square(n=2), s)

    def test_nonzero_dirichlet_data(self) -> None:
        p = get_problem("P3")
        m = generate_unit_square(2, layout=p.layout)
        s = build_space(m, SpaceKind.CR1)
        with pytest.raises(InvalidManufacturedSolutionError, match="requires u = 0"):
            assemble_cr(p, m, s)

    def test_coercive_in_broken_h1_seminorm(self) -> None:
        p = helpers.poisson(k0=3.0)
        m = helpers.square(n=4)
        s = build_space(m, SpaceKind.CR1)
        a = assemble_cr(p, m, s).matrix
        g = gram(s, NormKind.BROKEN_H1_SEMI, p, _CR)
        assert min_sym_eig(a, g) == pytest.approx(3.0, rel=1e-8)

    @pytest.mark.parametrize("name", ["P1", "P2"])
    @pytest.mark.parametrize("n", [8, 16])
    def test_coercive__builtin_problems(self, name: str, n: int) -> None:
        p = get_problem(name)
        m = generate_unit_square(n, layout=p.layout)
        s = build_space(m, SpaceKind.CR1)
        a = assemble_cr(p, m, s).matrix
        g = gram(s, NormKind.BROKEN_H1_SEMI, p, _CR)
        assert min_sym_eig(a, g) >= p.k0 - 1e-8


class TestAssembleIpg:
    def test_single_triangle(self) -> None:
        # No face terms on Neumann faces without convection, so this is the P1
        # stiffness matrix.
        m = helpers.unit_triangle(kind=FaceKind.GAMMA1)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        a = assemble_ipg(helpers.poisson(), m, s, _ipg(theta=-1)).matrix.toarray()
        helpers.assert_symmetric(a, atol=1e-14)
        np.testing.assert_allclose(a.sum(axis=1), 0.0, atol=1e-13)
        np.testing.assert_allclose(np.sort(np.diag(a)), [0.5, 0.5, 1.0])

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_sipg_symmetric(self, degree: int) -> None:
        m = helpers.square(n=4)
        s = build_space(m, SpaceKind.BROKEN_P, degree=degree)
        a = assemble_ipg(
            helpers.poisson(k0=2.0), m, s, _ipg(theta=-1, degree=degree)
        ).matrix
        helpers.assert_symmetric(a, atol=1e-12)

    def test_iipg_not_symmetric(self) -> None:
        m = helpers.square(n=4)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        a = helpers.dense(assemble_ipg(helpers.poisson(), m, s, _ipg(theta=0)).matrix)
        assert np.abs(a - a.T).max() > 1e-3

    @pytest.mark.parametrize("theta", [-1, 0, 1])
    @pytest.mark.parametrize("degree", [1, 2])
    def test_residual_of_polynomial_solution(self, theta: int, degree: int) -> None:
        p = get_problem("P3", degree=degree)
        m = generate_unit_square(4, layout=p.layout)
        s = build_space(m, SpaceKind.BROKEN_P, degree=degree)
        cfg = _ipg(theta=theta, degree=degree)
        residual = residual_of_exact(p, m, s, cfg)
        rhs = assemble(p, m, s, cfg).rhs
        assert np.linalg.norm(residual) <= 1e-9 * np.linalg.norm(rhs)

    def test_nipg_energy_identity(self) -> None:
        # Inflow conditions hold, so a_h(v, v) equals the energy norm squared.
        p = get_problem("P5")
        m = generate_unit_square(8, layout=p.layout)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        cfg = _ipg(theta=1, eta=2.0)
        a = assemble(p, m, s, cfg).matrix
        energy = gram(s, NormKind.ENERGY_VH, p, cfg)
        rng = np.random.default_rng(0)
        for _ in range(100):
            v = rng.standard_normal(s.ndof)
            assert v @ (a @ v) == pytest.approx(energy.norm(v) ** 2, rel=1e-12)

    def test_sipg_coercive(self) -> None:
        p = helpers.poisson()
        cfg = _ipg(theta=-1, eta=40.0)
        values = []
        for n in (4, 8):
            m = helpers.square(n=n)
            s = build_space(m, SpaceKind.BROKEN_P, degree=1)
            a = assemble(p, m, s, cfg).matrix
            values.append(min_sym_eig(a, gram(s, NormKind.ENERGY_VH, p, cfg)))
        assert min(values) > 0.0
        assert 0.5 < values[1] / values[0] < 2.0

    def test_agrees_with_conforming_form(self) -> None:
        # Continuous functions have no jumps, so only the volume terms remain.
        layout = BoundaryLayout.uniform(FaceKind.GAMMA1)
        p = helpers.with_convection(helpers.poisson(layout=layout), 1.0, -0.5, 2.0)
        m = generate_unit_square(4, layout=layout)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        w = DiscreteFunction(interpolate(s, lambda x: x[..., 0] + x[..., 1] ** 2))
        v = DiscreteFunction(interpolate(s, lambda x: np.sin(x[..., 0] + x[..., 1])))
        for theta in (-1, 0, 1):
            ipg = form_value(
                forms.ipg_bilinear_form(theta=theta, eta=10.0),
                p,
                m,
                w,
                v,
                s.quad_degree,
            )
            conforming = form_value(
                forms.continuous_bilinear_form(), p, m, w, v, s.quad_degree
            )
            assert ipg == pytest.approx(conforming, rel=1e-12, abs=1e-12)

    def test_cr_space(self) -> None:
        m = helpers.square(n=2)
        s = build_space(m, SpaceKind.CR1)
        with pytest.raises(ConfigError, match="needs a broken space"):
            assemble_ipg(helpers.poisson(), m, s, _ipg(theta=0))

    def test_deterministic(self) -> None:
        p = get_problem("P5")
        m = generate_unit_square(4, layout=p.layout)
        s = build_space(m, SpaceKind.BROKEN_P, degree=2)
        cfg = _ipg(theta=0, degree=2)
        first = assemble(p, m, s, cfg)
        second = assemble(p, m, s, cfg)
        np.testing.assert_array_equal(first.matrix.data, second.matrix.data)
        np.testing.assert_array_equal(first.matrix.indices, second.matrix.indices)
        np.testing.assert_array_equal(first.rhs, second.rhs)


class TestAssembleAdjoint:
    @pytest.mark.parametrize("cfg", [_CR, MethodConfig(scheme="IPG", theta=0, eta=5.0)])
    def test_transposed(self, cfg: MethodConfig) -> None:
        p = get_problem("P4")
        m = generate_unit_square(4, layout=p.layout)
        s = build_space(
            m, SpaceKind.CR1 if cfg.scheme == "CR1" else SpaceKind.BROKEN_P
        )
        primal = assemble(p, m, s, cfg).matrix
        adjoint = assemble_adjoint(p, m, s, cfg).matrix
        np.testing.assert_array_equal(
            helpers.dense(adjoint), helpers.dense(primal).T
        )

    def test_constant_source(self) -> None:
        m = helpers.square(n=4)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        sys = assemble_adjoint(
            helpers.poisson(), m, s, _ipg(theta=0), g=constant_scalar(1.0)
        )
        assert sys.rhs.sum() == pytest.approx(1.0)

    def test_missing_source(self) -> None:
        m = helpers.square(n=2)
        s = build_space(m, SpaceKind.BROKEN_P, degree=1)
        with pytest.raises(InvalidManufacturedSolutionError, match="adjoint source"):
            assemble_adjoint(helpers.poisson(), m, s, _ipg(theta=0))


def test_residual_of_exact__missing_solution() -> None:
    m = helpers.square(n=2)
    s = build_space(m, SpaceKind.CR1)
    with pytest.raises(InvalidManufacturedSolutionError, match="no exact solution"):
        residual_of_exact(helpers.poisson(), m, s, _CR)


def test_form_value__mass() -> None:
    one = AnalyticFunction(constant_scalar(1.0))
    value = form_value(
        forms.BilinearForm(volume=(forms.VolumeTerm.MASS,)),
        helpers.poisson(),
        helpers.square(n=2),
        one,
        one,
        2,
    )
    assert value == pytest.approx(1.0)


def test_functional_value__source() -> None:
    v = AnalyticFunction(lambda x: x[..., 0])
    value = functional_value(
        forms.source_form(constant_scalar(2.0)),
        helpers.poisson(),
        helpers.square(n=2),
        v,
        2,
    )
    assert value == pytest.approx(1.0)
