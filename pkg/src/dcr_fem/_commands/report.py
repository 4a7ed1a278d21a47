#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from dcr_fem._analysis.rates import rates
from dcr_fem._analysis.strang import BOUNDEDNESS_FACTOR

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "level",
    "h",
    "ndof",
    "err_l2",
    "err_h1b",
    "err_energy",
    "cons_dual",
    "alpha_h",
    "strang_bound",
    "wall_ms",
)
# Columns for which observed rates are reported.
RATE_COLUMNS = ("err_l2", "err_h1b", "err_energy", "cons_dual", "strang_bound")


@dataclass(frozen=True)
class LevelRow:
    level: int
    h: float
    ndof: int
    err_l2: float
    err_h1b: float
    err_energy: Optional[float] = None
    cons_dual: Optional[float] = None
    alpha_h: Optional[float] = None
    strang_bound: Optional[float] = None
    wall_ms: float = 0.0
    # Dual norm of the right-hand side, the scale of cons_dual. Not written to CSV.
    rhs_dual: Optional[float] = None

    def value(self, column: str) -> Optional[float]:
        value = getattr(self, column)
        return None if value is None else float(value)


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    # Value the check compared against its bounds. None if it could not be computed.
    value: Optional[float]
    expected: str


@dataclass
class ConvergenceReport:
    problem: str
    method: str
    rows: list[LevelRow] = field(default_factory=list)
    checks: list[CheckOutcome] = field(default_factory=list)
    strang_samples: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def column(self, name: str) -> list[Optional[float]]:
        return [row.value(name) for row in self.rows]

    def rates(self, column: str) -> list[Optional[float]]:
        return rates([(row.h, row.value(column)) for row in self.rows])


def write_csv(report: ConvergenceReport, path: Path) -> None:
    """Writes one line per level. Missing values are empty fields."""
    with path.open("w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    str(row.level),
                    _format(row.h),
                    str(row.ndof),
                    *(_format(row.value(name)) for name in CSV_HEADER[3:-1]),
                    f"{row.wall_ms:.3f}",
                ]
            )
    logger.debug(f"Wrote {len(report.rows)} rows to '{path}'.")


def read_csv(path: Path) -> list[dict[str, Optional[float]]]:
    with path.open("r", newline="", encoding="utf-8") as file:
        return [
            {key: float(value) if value != "" else None for key, value in line.items()}
            for line in csv.DictReader(file)
        ]


def write_markdown(report: ConvergenceReport, path: Path) -> None:
    path.write_text(format_markdown(report), encoding="utf-8")
    logger.debug(f"Wrote rate table to '{path}'.")


def format_markdown(report: ConvergenceReport) -> str:
    lines = [f"# Convergence study: {report.problem}, {report.method}", ""]

    lines += ["## Errors", ""]
    lines += _table(
        CSV_HEADER[:-1],
        [
            [str(row.level), _format(row.h, 4), str(row.ndof)]
            + [_format(row.value(name), 4) for name in CSV_HEADER[3:-1]]
            for row in report.rows
        ],
    )

    columns = [
        name
        for name in RATE_COLUMNS
        if any(v is not None for v in report.column(name))
    ]
    lines += ["", "## Observed rates", ""]
    lines += _table(
        ["levels", *columns],
        [
            [f"{i}-{i + 1}"]
            + [_format(report.rates(name)[i], 3) for name in columns]
            for i in range(len(report.rows) - 1)
        ],
    )

    if report.checks:
        lines += ["", "## Checks", ""]
        lines += _table(
            ["check", "value", "expected", "status"],
            [
                [
                    check.name,
                    _format(check.value, 4),
                    check.expected,
                    "pass" if check.passed else "FAIL",
                ]
                for check in report.checks
            ],
        )

    if report.strang_samples is not None:
        lines += [
            "",
            f"The boundedness constant of the Strang bound is sampled from "
            f"{report.strang_samples} random pairs and scaled by "
            f"{BOUNDEDNESS_FACTOR:g}. The bound is an estimate and not a proven "
            "upper bound.",
        ]
    return "\n".join(lines) + "\n"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return lines


def _format(value: Optional[float], digits: int = 17) -> str:
    if value is None:
        return ""
    return f"{value:.{digits}g}"
