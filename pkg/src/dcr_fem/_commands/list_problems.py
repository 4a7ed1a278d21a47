#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from omegaconf import DictConfig

from dcr_fem._mesh.generate import generate_unit_square
from dcr_fem._problems.audit import (
    DIRICHLET_MEASURE,
    REACTION_LOWER_BOUND,
    AuditReport,
    audit_conditions,
)
from dcr_fem._problems.problem import CoercivityKind, ProblemSpec
from dcr_fem._problems.problem_helpers import get_problem, list_problems

logger = logging.getLogger(__name__)

# Subdivisions of the audit mesh. Even, so that layouts split at x = 1/2 align.
AUDIT_MESH_SUBDIVISIONS = 4


@dataclass(frozen=True)
class ProblemStatus:
    problem: ProblemSpec
    # Conditions of the Crouzeix-Raviart analysis.
    cr: AuditReport
    # Conditions of the interior penalty analysis, which adds inflow on Gamma3.
    ipg: AuditReport


def problem_statuses(
    problems: Sequence[str | ProblemSpec] | None = None,
) -> list[ProblemStatus]:
    """Audits every problem on a uniform mesh of the unit square."""
    names: Sequence[str | ProblemSpec] = (
        list_problems() if problems is None else problems
    )
    statuses = []
    for name in names:
        p = get_problem(name)
        m = generate_unit_square(AUDIT_MESH_SUBDIVISIONS, layout=p.layout)
        statuses.append(
            ProblemStatus(
                problem=p,
                cr=audit_conditions(p, m),
                ipg=audit_conditions(p, m, dg=True),
            )
        )
    return statuses


def format_problem_statuses(statuses: Sequence[ProblemStatus]) -> str:
    lines = []
    for status in statuses:
        p = status.problem
        lines.append(f"    {p.name:<4}{p.description}")
        lines.append(f"        layout: {p.layout.describe()}")
        mode_status = "satisfied" if _mode_passed(status.cr) else "violated"
        lines.append(f"        {p.coercivity}: {mode_status}")
        for scheme, report in (("CR1", status.cr), ("IPG", status.ipg)):
            if report.passed:
                lines.append(f"        {scheme}: all conditions satisfied")
            else:
                failed = ", ".join(f"'{name}'" for name in report.failed_conditions)
                lines.append(f"        {scheme}: violates {failed}")
    return "\n".join(lines)


def _mode_passed(report: AuditReport) -> bool:
    name = (
        DIRICHLET_MEASURE
        if report.mode.kind is CoercivityKind.DIRICHLET_MEASURE
        else REACTION_LOWER_BOUND
    )
    return report.result(name).passed


def list_problems_from_dictconfig(config: DictConfig) -> None:
    logger.info(format_problem_statuses(problem_statuses()))
