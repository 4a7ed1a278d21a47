#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from typing import Callable

from dcr_fem._problems import builtin
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import UnknownProblemError


def list_problems() -> list[str]:
    """Lists the names of all built-in problems."""
    return sorted(_problem_name_to_factory().keys())


def get_problem(name: str | ProblemSpec, degree: int = 1) -> ProblemSpec:
    """Returns the built-in problem with the given name.

    Args:
        name:
            Registry name or an already constructed problem.
        degree:
            Polynomial degree of the discretization. Only used by problems whose
            exact solution depends on it.
    """
    if isinstance(name, ProblemSpec):
        return name
    factory = _problem_name_to_factory().get(name)
    if factory is None:
        raise UnknownProblemError(
            f"Problem '{name}' is unknown. Available problems are: {list_problems()}"
        )
    return factory(degree)


def _problem_name_to_factory() -> dict[str, Callable[[int], ProblemSpec]]:
    return {
        "P1": lambda degree: builtin.poisson_dirichlet(),
        "P2": lambda degree: builtin.mixed_dcr(),
        "P3": builtin.polynomial,
        "P4": lambda degree: builtin.adjoint_manufactured(),
        "P5": lambda degree: builtin.inflow_dirichlet(),
    }
