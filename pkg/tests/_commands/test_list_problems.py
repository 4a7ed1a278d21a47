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
from omegaconf import OmegaConf

from dcr_fem._commands.list_problems import (
    format_problem_statuses,
    list_problems_from_dictconfig,
    problem_statuses,
)
from dcr_fem._problems.audit import ELLIPTICITY, GAMMA3_INFLOW
from dcr_fem._problems.problem import identity_matrix

from .. import helpers


def test_problem_statuses() -> None:
    statuses = problem_statuses()
    assert [s.problem.name for s in statuses] == ["P1", "P2", "P3", "P4", "P5"]


def test_problem_statuses__p2() -> None:
    (status,) = problem_statuses(["P2"])
    assert status.cr.passed
    assert not status.ipg.passed
    assert GAMMA3_INFLOW in status.ipg.failed_conditions


def test_problem_statuses__p5() -> None:
    (status,) = problem_statuses(["P5"])
    assert status.cr.passed
    assert status.ipg.passed


def test_problem_statuses__instance() -> None:
    p = helpers.poisson()
    (status,) = problem_statuses([p])
    assert status.problem is p
    assert status.cr.passed


def test_format_problem_statuses() -> None:
    text = format_problem_statuses(problem_statuses(["P2", "P5"]))
    lines = text.splitlines()
    assert lines[0].startswith("    P2  ")
    assert "        CR1: all conditions satisfied" in lines
    assert f"        IPG: violates '{GAMMA3_INFLOW}'" in lines
    assert lines.count("        IPG: all conditions satisfied") == 1
    assert any(line.strip().startswith("layout:") for line in lines)


def test_list_problems_from_dictconfig(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level("INFO"):
        list_problems_from_dictconfig(OmegaConf.create({}))
    for name in ["P1", "P2", "P3", "P4", "P5"]:
        assert f"    {name}" in caplog.text


def test_format_problem_statuses__reaction_lower_bound() -> None:
    text = format_problem_statuses(problem_statuses(["P2"]))
    assert "        ReactionLowerBound(r0=1): satisfied" in text.splitlines()


def test_format_problem_statuses__broken_problem() -> None:
    # K = I/2 violates the ellipticity bound k0 = 1.
    p = replace(helpers.poisson(k0=1.0), K=lambda x: 0.5 * identity_matrix()(x))
    (status,) = problem_statuses([p])
    assert ELLIPTICITY in status.cr.failed_conditions
    text = format_problem_statuses([status])
    assert f"        CR1: violates '{ELLIPTICITY}'" in text.splitlines()
