#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
import math
from typing import Any, Callable, Optional, Sequence

from dcr_fem._analysis.rates import rates
from dcr_fem._commands.report import CheckOutcome, LevelRow
from dcr_fem._configs import validate
from dcr_fem._configs.config import PydanticConfig
from dcr_fem.errors import ConfigError

logger = logging.getLogger(__name__)


class CheckThreshold(PydanticConfig):
    """Bounds of an acceptance check. Unset bounds are not checked.

    pairs is the number of trailing level pairs a rate check looks at.
    """

    min: Optional[float] = None
    max: Optional[float] = None
    pairs: int = 1

    def contains(self, value: float) -> bool:
        if self.min is not None and not value >= self.min:
            return False
        if self.max is not None and not value <= self.max:
            return False
        return True

    def describe(self) -> str:
        if self.min is not None and self.max is not None:
            return f"[{self.min:g}, {self.max:g}]"
        if self.min is not None:
            return f">= {self.min:g}"
        if self.max is not None:
            return f"<= {self.max:g}"
        return "any"


def list_checks() -> list[str]:
    return sorted(_check_name_to_fn().keys())


def get_thresholds(
    checks: dict[str, dict[str, Any]] | None,
) -> dict[str, CheckThreshold]:
    """Validates the check names and their bounds."""
    checks = {} if checks is None else checks
    unknown = sorted(set(checks) - set(_check_name_to_fn()))
    if unknown:
        raise ConfigError(
            f"Unknown checks {unknown}. Available checks are: {list_checks()}"
        )
    return {
        name: validate.pydantic_model_validate(CheckThreshold, dict(bounds or {}))
        for name, bounds in checks.items()
    }


def evaluate_checks(
    rows: Sequence[LevelRow], thresholds: dict[str, CheckThreshold]
) -> list[CheckOutcome]:
    """Evaluates the named checks on the rows of a study."""
    check_fns = _check_name_to_fn()
    unknown = sorted(set(thresholds) - set(check_fns))
    if unknown:
        raise ConfigError(
            f"Unknown checks {unknown}. Available checks are: {list_checks()}"
        )
    outcomes = []
    for name, threshold in thresholds.items():
        values = check_fns[name](rows, threshold)
        passed = bool(values) and all(
            v is not None and threshold.contains(v) for v in values
        )
        # The reported value is the one furthest from passing.
        value = _worst(values, threshold)
        outcome = CheckOutcome(
            name=name, passed=passed, value=value, expected=threshold.describe()
        )
        logger.debug(f"Check {name}: values {values}, passed={passed}.")
        outcomes.append(outcome)
    return outcomes


def _worst(values: list[Optional[float]], threshold: CheckThreshold) -> Optional[float]:
    if not values or any(v is None for v in values):
        return None
    numbers = [v for v in values if v is not None]
    if threshold.min is not None and threshold.max is None:
        return min(numbers)
    if threshold.max is not None and threshold.min is None:
        return max(numbers)
    center = 0.5 * ((threshold.min or 0.0) + (threshold.max or 0.0))
    return max(numbers, key=lambda v: abs(v - center))


def _trailing_rates(
    column: str,
) -> Callable[[Sequence[LevelRow], CheckThreshold], list[Optional[float]]]:
    def check(
        rows: Sequence[LevelRow], threshold: CheckThreshold
    ) -> list[Optional[float]]:
        observed = rates([(row.h, row.value(column)) for row in rows])
        return observed[-threshold.pairs :] if threshold.pairs > 0 else []

    return check


def _strang_dominance(
    rows: Sequence[LevelRow], threshold: CheckThreshold
) -> list[Optional[float]]:
    """Ratio of the Strang bound to the measured error on every level."""
    ratios: list[Optional[float]] = []
    for row in rows:
        error = row.err_energy if row.err_energy is not None else row.err_h1b
        if row.strang_bound is None:
            ratios.append(None)
        elif error == 0.0:
            ratios.append(math.inf)
        else:
            ratios.append(row.strang_bound / error)
    return ratios


def _cons_dual_max(
    rows: Sequence[LevelRow], threshold: CheckThreshold
) -> list[Optional[float]]:
    """Consistency dual norm relative to the dual norm of the right-hand side."""
    values: list[Optional[float]] = []
    for row in rows:
        if row.cons_dual is None or row.rhs_dual is None:
            values.append(None)
        else:
            values.append(row.cons_dual / row.rhs_dual if row.rhs_dual > 0 else 0.0)
    return values


def _alpha_h_drop(
    rows: Sequence[LevelRow], threshold: CheckThreshold
) -> list[Optional[float]]:
    """Relative decrease of the inf-sup constant from the first to the last level."""
    first, last = rows[0].alpha_h, rows[-1].alpha_h
    if first is None or last is None or not first > 0:
        return [None]
    return [(first - last) / first]


def _check_name_to_fn() -> dict[
    str, Callable[[Sequence[LevelRow], CheckThreshold], list[Optional[float]]]
]:
    return {
        "rate_l2": _trailing_rates("err_l2"),
        "rate_h1b": _trailing_rates("err_h1b"),
        "rate_energy": _trailing_rates("err_energy"),
        "rate_cons": _trailing_rates("cons_dual"),
        "strang_dominance": _strang_dominance,
        "cons_dual_max": _cons_dual_max,
        "alpha_h_drop": _alpha_h_drop,
    }
