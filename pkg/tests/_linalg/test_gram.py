#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import numpy as np
import pytest

from dcr_fem._assembly.fields import AnalyticFunction
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.space import SpaceKind, build_space
from dcr_fem._linalg.gram import NormKind, gram, norm_of
from dcr_fem._linalg.spectral import min_sym_eig
from dcr_fem._mesh.generate import generate_unit_square
from dcr_fem._mesh.mesh import FaceKind
from dcr_fem._problems.problem_helpers import get_problem
from dcr_fem.errors import UnresolvedAutoError

from .. import helpers

_IPG = MethodConfig(scheme="IPG", theta=0, eta=10.0)


@pytest.mark.parametrize(
    "kind, degree",
    [(SpaceKind.CR1, 1), (SpaceKind.BROKEN_P, 1), (SpaceKind.BROKEN_P, 3)],
)
def test_gram__l2_of_one(kind: SpaceKind, degree: int) -> None:
    m = helpers.square(n=4, kind=FaceKind.GAMMA1)
    s = build_space(m, kind, degree=degree)
    g = gram(s, NormKind.L2, helpers.poisson(), _IPG)
    one = np.ones(s.ndof)
    assert one @ (g.matrix @ one) == pytest.approx(1.0)
    assert g.norm(one) == pytest.approx(1.0)
    assert g.norm_kind is NormKind.L2


def test_gram__broken_h1() -> None:
    m = helpers.square(n=2)
    s = build_space(m, SpaceKind.BROKEN_P, degree=2)
    p = helpers.poisson()
    full = gram(s, NormKind.BROKEN_H1, p, _IPG).matrix
    semi = gram(s, NormKind.BROKEN_H1_SEMI, p, _IPG).matrix
    l2 = gram(s, NormKind.L2, p, _IPG).matrix
    np.testing.assert_allclose(full.toarray(), (semi + l2).toarray(), atol=1e-13)


def test_gram__symmetric_positive_definite() -> None:
    p = get_problem("P5")
    m = generate_unit_square(4, layout=p.layout)
    s = build_space(m, SpaceKind.BROKEN_P, degree=1)
    for kind in (NormKind.ENERGY_VH, NormKind.EXTENDED_VH):
        g = gram(s, kind, p, _IPG)
        helpers.assert_symmetric(g.matrix, atol=1e-12)
        assert min_sym_eig(np.eye(s.ndof), g) > 0.0


def test_gram__extended_dominates_energy() -> None:
    p = get_problem("P3", degree=2)
    m = generate_unit_square(4, layout=p.layout)
    s = build_space(m, SpaceKind.BROKEN_P, degree=2)
    energy = gram(s, NormKind.ENERGY_VH, p, _IPG)
    extended = gram(s, NormKind.EXTENDED_VH, p, _IPG)
    rng = np.random.default_rng(0)
    for _ in range(5):
        v = rng.standard_normal(s.ndof)
        assert extended.norm(v) >= energy.norm(v)


def test_gram__energy_needs_eta() -> None:
    s = build_space(helpers.square(n=2), SpaceKind.BROKEN_P, degree=1)
    cfg = MethodConfig(scheme="IPG", eta="auto")
    with pytest.raises(UnresolvedAutoError):
        gram(s, NormKind.ENERGY_VH, helpers.poisson(), cfg)
    # Norms without penalty ignore eta.
    gram(s, NormKind.L2, helpers.poisson(), cfg)


def test_norm_of() -> None:
    m = helpers.square(n=2)
    u = AnalyticFunction(
        lambda x: x[..., 0],
        lambda x: np.broadcast_to(np.array([1.0, 0.0]), np.shape(x)).copy(),
    )
    p = helpers.poisson()
    assert norm_of(NormKind.L2, p, m, u, 4) == pytest.approx(np.sqrt(1.0 / 3.0))
    assert norm_of(NormKind.BROKEN_H1_SEMI, p, m, u, 4) == pytest.approx(1.0)
    assert norm_of(NormKind.BROKEN_H1, p, m, u, 4) == pytest.approx(np.sqrt(4 / 3))


@pytest.mark.parametrize(
    "kind, needs_eta",
    [
        (NormKind.L2, False),
        (NormKind.BROKEN_H1, False),
        (NormKind.ENERGY_VH, True),
        (NormKind.EXTENDED_VH, True),
    ],
)
def test_norm_kind__needs_eta(kind: NormKind, needs_eta: bool) -> None:
    assert kind.needs_eta is needs_eta
