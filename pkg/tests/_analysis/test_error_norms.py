#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import pytest

from dcr_fem._analysis.error_norms import ErrorSummary, error_norms, error_quad_degree
from dcr_fem._analysis.rates import rates
from dcr_fem._assembly.assemble import assemble
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.quadrature import MAX_QUADRATURE_DEGREE
from dcr_fem._fespace.space import FeFunction, SpaceKind, build_space, interpolate
from dcr_fem._linalg.solve import solve
from dcr_fem._mesh.generate import generate_unit_square
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem._problems.problem_helpers import get_problem

from .. import helpers


def _solve(p: ProblemSpec, n: int, cfg: MethodConfig) -> ErrorSummary:
    assert p.exact is not None
    m = generate_unit_square(n, layout=p.layout)
    kind = SpaceKind.CR1 if cfg.scheme == "CR1" else SpaceKind.BROKEN_P
    s = build_space(m, kind, degree=cfg.degree)
    u_h = FeFunction(space=s, coefficients=solve(assemble(p, m, s, cfg)))
    return error_norms(p.exact, u_h, s, p, cfg)


@pytest.mark.parametrize(
    "kind, cfg",
    [
        (SpaceKind.CR1, MethodConfig(scheme="CR1")),
        (SpaceKind.BROKEN_P, MethodConfig(scheme="IPG", eta=10.0)),
    ],
)
def test_error_norms__interpolant_of_linear(
    kind: SpaceKind, cfg: MethodConfig
) -> None:
    p = helpers.linear_patch_problem()
    assert p.exact is not None
    m = generate_unit_square(2, layout=p.layout)
    s = build_space(m, kind)
    summary = error_norms(p.exact, interpolate(s, p.exact.u), s, p, cfg)
    assert summary.l2 == pytest.approx(0.0, abs=1e-12)
    assert summary.broken_h1 == pytest.approx(0.0, abs=1e-12)
    if cfg.scheme == "CR1":
        assert summary.energy is None
    else:
        assert summary.energy == pytest.approx(0.0, abs=1e-12)


def test_error_norms__cr_rates() -> None:
    p = get_problem("P1")
    cfg = MethodConfig(scheme="CR1")
    coarse, fine = _solve(p, 4, cfg), _solve(p, 8, cfg)
    assert coarse.energy is None
    (l2_rate,) = rates([(0.25, coarse.l2), (0.125, fine.l2)])
    (h1_rate,) = rates([(0.25, coarse.broken_h1), (0.125, fine.broken_h1)])
    assert l2_rate is not None and l2_rate > 1.7
    assert h1_rate is not None and h1_rate > 0.8


def test_error_norms__ipg_energy() -> None:
    p = get_problem("P3", degree=2)
    summary = _solve(p, 4, MethodConfig(scheme="IPG", theta=-1, eta=80.0, degree=2))
    assert summary.energy is not None
    # A quadratic solution is reproduced exactly.
    assert summary.energy == pytest.approx(0.0, abs=1e-9)
    assert summary.l2 == pytest.approx(0.0, abs=1e-9)


def test_error_quad_degree() -> None:
    m = helpers.square(n=2)
    assert error_quad_degree(build_space(m, SpaceKind.CR1)) == 6
    assert (
        error_quad_degree(build_space(m, SpaceKind.BROKEN_P, degree=4))
        == MAX_QUADRATURE_DEGREE
    )
