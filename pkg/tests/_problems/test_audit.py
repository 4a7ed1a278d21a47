#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from dataclasses import replace

import pytest

from dcr_fem._mesh.generate import BoundaryLayout, generate_unit_square
from dcr_fem._mesh.mesh import FaceKind
from dcr_fem._problems import audit
from dcr_fem._problems.audit import audit_conditions
from dcr_fem._problems.problem import CoercivityMode, constant_scalar
from dcr_fem._problems.problem_helpers import get_problem, list_problems

from .. import helpers


def test_audit_conditions__poisson() -> None:
    report = audit_conditions(helpers.poisson(), generate_unit_square(2))
    assert report.passed
    assert report.failed_conditions == []
    assert report.result(audit.DIRICHLET_MEASURE).passed
    # No Robin faces, the condition holds vacuously.
    assert "vacuous" in report.result(audit.GAMMA22_ROBIN).describe()


def test_audit_conditions__outflow_on_neumann() -> None:
    layout = BoundaryLayout(right=FaceKind.GAMMA1)
    p = helpers.with_convection(helpers.poisson(layout=layout), 1.0, 0.0, 0.0)
    report = audit_conditions(p, generate_unit_square(2, layout=layout))
    assert not report.passed
    assert report.failed_conditions == [audit.GAMMA1_INFLOW]
    result = report.result(audit.GAMMA1_INFLOW)
    assert result.worst_value == pytest.approx(-1.0)
    assert result.worst_point is not None
    assert result.worst_point[0] == pytest.approx(1.0)
    assert "FAILED" in result.describe()


def test_audit_conditions__reaction_lower_bound() -> None:
    p = helpers.with_convection(helpers.poisson(), 0.0, 0.0, 1.0)
    m = generate_unit_square(2, layout=BoundaryLayout.uniform(FaceKind.GAMMA1))
    report = audit_conditions(p, m, mode=CoercivityMode.reaction_lower_bound(1.0))
    assert report.passed
    assert report.result(audit.REACTION_LOWER_BOUND).passed


def test_audit_conditions__reaction_lower_bound_violated() -> None:
    p = helpers.with_convection(helpers.poisson(), 0.0, 0.0, 0.5)
    report = audit_conditions(
        p, generate_unit_square(2), mode=CoercivityMode.reaction_lower_bound(1.0)
    )
    assert report.failed_conditions == [audit.REACTION_LOWER_BOUND]


def test_audit_conditions__no_dirichlet_boundary() -> None:
    p = helpers.poisson()
    m = generate_unit_square(2, layout=BoundaryLayout.uniform(FaceKind.GAMMA1))
    report = audit_conditions(p, m)
    assert report.failed_conditions == [audit.DIRICHLET_MEASURE]


def test_audit_conditions__ellipticity() -> None:
    p = helpers.poisson(k0=2.0)
    report = audit_conditions(replace(p, k0=3.0), generate_unit_square(2))
    assert report.failed_conditions == [audit.ELLIPTICITY]


def test_audit_conditions__negative_reaction() -> None:
    p = replace(helpers.poisson(), r=constant_scalar(-0.1))
    report = audit_conditions(p, generate_unit_square(2))
    assert report.failed_conditions == [audit.REACTION]


def test_audit_conditions__robin() -> None:
    # nu.c = -1 on the left side, so alpha_tilde - nu.c/2 = -0.5 + 0.5 = 0.
    layout = BoundaryLayout(left=FaceKind.GAMMA2)
    p = replace(
        helpers.with_convection(helpers.poisson(layout=layout), 1.0, 0.0, 0.0),
        alpha_tilde=constant_scalar(-0.5),
    )
    report = audit_conditions(p, generate_unit_square(2, layout=layout))
    assert report.result(audit.GAMMA22_ROBIN).passed
    p = replace(p, alpha_tilde=constant_scalar(-0.6))
    report = audit_conditions(p, generate_unit_square(2, layout=layout))
    assert audit.GAMMA22_ROBIN in report.failed_conditions


def test_audit_conditions__dg_inflow() -> None:
    p = get_problem("P2")
    m = generate_unit_square(2, layout=p.layout)
    assert audit_conditions(p, m).passed
    report = audit_conditions(p, m, dg=True)
    assert report.failed_conditions == [audit.GAMMA3_INFLOW]


@pytest.mark.parametrize("name", ["P1", "P3", "P4", "P5"])
def test_audit_conditions__builtin_dg(name: str) -> None:
    p = get_problem(name)
    m = generate_unit_square(4, layout=p.layout)
    assert audit_conditions(p, m, dg=True).passed


@pytest.mark.parametrize("name", list_problems())
def test_audit_conditions__builtin(name: str) -> None:
    p = get_problem(name)
    m = generate_unit_square(4, layout=p.layout)
    report = audit_conditions(p, m)
    assert report.passed
    assert report.mode == p.coercivity


def test_audit_report__unknown_result() -> None:
    report = audit_conditions(helpers.poisson(), generate_unit_square(1))
    with pytest.raises(KeyError):
        report.result("unknown")
