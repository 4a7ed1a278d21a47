#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Any, Literal

import numpy as np
from omegaconf import DictConfig
from pydantic import ConfigDict, field_validator
from tqdm import tqdm

from dcr_fem import _logging, _system
from dcr_fem._analysis.consistency import consistency_norm, residual_gram, rhs_dual_norm
from dcr_fem._analysis.error_norms import error_norms
from dcr_fem._analysis.strang import strang_bound
from dcr_fem._assembly.assemble import assemble
from dcr_fem._assembly.method_config import MethodConfig, Scheme, resolve_eta
from dcr_fem._commands import checks as checks_helpers
from dcr_fem._commands import common_helpers
from dcr_fem._commands.report import (
    ConvergenceReport,
    LevelRow,
    write_csv,
    write_markdown,
)
from dcr_fem._configs import omegaconf_utils, validate
from dcr_fem._configs.config import PydanticConfig
from dcr_fem._env import Env
from dcr_fem._fespace.basis import MAX_DEGREE
from dcr_fem._fespace.space import FeFunction, SpaceKind, build_space
from dcr_fem._linalg.matrix_market import export_system, system_paths
from dcr_fem._linalg.solve import solve
from dcr_fem._linalg.spectral import inf_sup
from dcr_fem._mesh.generate import generate_unit_square, refine_uniform
from dcr_fem._mesh.mesh import Mesh, mesh_size
from dcr_fem._problems.audit import audit_conditions
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem._problems.problem_helpers import get_problem
from dcr_fem.errors import AcceptanceCheckError, ConfigError
from dcr_fem.types import PathLike

logger = logging.getLogger(__name__)

REPORT_CSV = "report.csv"
REPORT_MD = "report.md"
STUDY_LOG = "study.log"


def study(
    problem: str | ProblemSpec,
    out: PathLike,
    scheme: Scheme = "CR1",
    theta: int = -1,
    eta: float | Literal["auto"] = "auto",
    degree: int = 1,
    levels: int = 4,
    n0: int = 4,
    seed: int = 0,
    checks: dict[str, dict[str, Any]] | None = None,
    strang: bool = True,
    inf_sup: bool = True,
    export_systems: bool = False,
    overwrite: bool = False,
) -> ConvergenceReport:
    """Run a convergence study on a sequence of uniformly refined meshes.

    The coarsest mesh divides the unit square into n0 x n0 squares, each split into
    two triangles. Every further level halves h. On each level the system is
    assembled and solved and the errors, the consistency dual norm and, optionally,
    the inf-sup constant and the Strang bound are computed.

    The results are written to `out/report.csv` and `out/report.md`, the log to
    `out/study.log`.

    Args:
        problem:
            Name of a built-in problem, for example 'P1', or a problem instance.
            Run `dcr-fem list_problems` to see all built-in problems.
        out:
            Output directory.
        scheme:
            'CR1' for Crouzeix-Raviart with upwinding or 'IPG' for interior
            penalty methods.
        theta:
            Symmetrization parameter of IPG. -1 is SIPG, 0 is IIPG and 1 is NIPG.
        eta:
            Penalty parameter of IPG. 'auto' selects twice the stability bound on
            the coarsest mesh.
        degree:
            Polynomial degree of IPG, between 1 and 4.
        levels:
            Number of meshes, at least 2.
        n0:
            Subdivisions per side of the coarsest mesh.
        seed:
            Seed of the sampled boundedness constant in the Strang bound.
        checks:
            Acceptance checks, mapping a check name to bounds, for example
            `{"rate_l2": {"min": 1.85, "max": 2.15}}`.
        strang:
            Compute the Strang bound and the inf-sup constant on every level.
        inf_sup:
            Compute the inf-sup constant if strang is False.
        export_systems:
            Write the matrix and right-hand side of every level in MatrixMarket
            format.
        overwrite:
            Overwrite the output directory if it is not empty.

    Returns:
        The convergence report.

    Raises:
        AcceptanceCheckError: If any of the checks fails. The report files are
            written before.
    """
    config = validate.pydantic_model_validate(StudyConfig, locals())
    return study_from_config(config=config)


def study_from_config(config: StudyConfig) -> ConvergenceReport:
    config = validate.pydantic_model_validate(StudyConfig, dict(config))
    out_dir = common_helpers.get_out_dir(out=config.out, overwrite=config.overwrite)

    _logging.set_up_console_logging()
    _logging.set_up_file_logging(out_dir / STUDY_LOG)
    logger.info(
        f"Args: {common_helpers.pretty_format_args(args=config.model_dump())}"
    )
    logger.info(f"Using output directory '{out_dir}'.")
    _system.log_system_information(_system.get_system_information())

    thresholds = checks_helpers.get_thresholds(config.checks)
    p = get_problem(config.problem, degree=config.degree)
    if p.exact is None:
        raise ConfigError(f"Problem '{p.name}' has no exact solution to study.")
    method = MethodConfig(
        scheme=config.scheme, theta=config.theta, eta=config.eta, degree=config.degree
    )

    meshes = _get_meshes(p, n0=config.n0, levels=config.levels)
    _audit(p, meshes[0], method)
    if method.scheme == "IPG":
        method = resolve_eta(method, p, meshes[0])
    logger.info(f"Running {method.describe()} on '{p.name}': {p.description}.")

    report = ConvergenceReport(
        problem=p.name,
        method=method.describe(),
        strang_samples=Env.DCR_FEM_STRANG_SAMPLES.value if config.strang else None,
    )
    for level, m in enumerate(tqdm(meshes, desc="Levels", unit="level")):
        rng = np.random.default_rng([config.seed, level])
        row = _run_level(
            p=p,
            m=m,
            method=method,
            level=level,
            config=config,
            rng=rng,
            out_dir=out_dir,
        )
        report.rows.append(row)
        logger.info(
            f"Level {level}: h={row.h:.4g}, ndof={row.ndof}, "
            f"err_l2={row.err_l2:.4e}, err_h1b={row.err_h1b:.4e}."
        )

    report.checks = checks_helpers.evaluate_checks(report.rows, thresholds)
    write_csv(report, out_dir / REPORT_CSV)
    write_markdown(report, out_dir / REPORT_MD)
    logger.info(f"Wrote report to '{out_dir / REPORT_MD}'.")
    for check in report.checks:
        status = "passed" if check.passed else "failed"
        message = f"Check {check.name} {status}: {check.value} vs {check.expected}."
        if check.passed:
            logger.info(message)
        else:
            logger.warning(message)
    if not report.passed:
        raise AcceptanceCheckError(
            f"Checks {report.failed_checks} failed. See '{out_dir / REPORT_MD}'.",
            failed=report.failed_checks,
        )
    return report


def study_from_dictconfig(config: DictConfig) -> ConvergenceReport:
    """Runs a study from CLI arguments, optionally merged over a YAML file.

    `config=study.yaml` loads the file, all other keys override its values.
    """
    logger.debug(f"Running study with config: {config}")
    config_path = config.pop("config", None)
    if config_path is not None:
        config = omegaconf_utils.load_yaml_with_overrides(
            path=str(config_path), overrides=config
        )
    config_dict = omegaconf_utils.config_to_dict(config=config)
    study_cfg = validate.pydantic_model_validate(CLIStudyConfig, config_dict)
    return study_from_config(config=study_cfg)


class StudyConfig(PydanticConfig):
    problem: str | ProblemSpec
    out: PathLike
    scheme: Scheme = "CR1"
    theta: int = -1
    eta: float | Literal["auto"] = "auto"
    degree: int = 1
    levels: int = 4
    n0: int = 4
    seed: int = 0
    checks: dict[str, dict[str, Any]] | None = None
    strang: bool = True
    inf_sup: bool = True
    export_systems: bool = False
    overwrite: bool = False

    # Allows passing problem instances.
    model_config = ConfigDict(arbitrary_types_allowed=True)

    @field_validator("levels")
    @classmethod
    def _check_levels(cls, levels: int) -> int:
        if levels < 2:
            raise ValueError(f"levels must be at least 2, got {levels}")
        return levels

    @field_validator("n0")
    @classmethod
    def _check_n0(cls, n0: int) -> int:
        if n0 < 1:
            raise ValueError(f"n0 must be at least 1, got {n0}")
        return n0

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, theta: int) -> int:
        if theta not in (-1, 0, 1):
            raise ValueError(f"theta must be one of (-1, 0, 1), got {theta}")
        return theta

    @field_validator("eta")
    @classmethod
    def _check_eta(cls, eta: float | str) -> float | str:
        if not isinstance(eta, str) and not eta > 0:
            raise ValueError(f"eta must be positive or 'auto', got {eta}")
        return eta

    @field_validator("degree")
    @classmethod
    def _check_degree(cls, degree: int) -> int:
        if not 1 <= degree <= MAX_DEGREE:
            raise ValueError(f"degree must be in [1, {MAX_DEGREE}], got {degree}")
        return degree


class CLIStudyConfig(StudyConfig):
    # CLI configuration with simpler types for better error messages.
    problem: str
    out: str

    model_config = ConfigDict(arbitrary_types_allowed=False)


def _get_meshes(p: ProblemSpec, n0: int, levels: int) -> list[Mesh]:
    meshes = [generate_unit_square(n0, layout=p.layout)]
    for _ in range(levels - 1):
        meshes.append(refine_uniform(meshes[-1]))
    return meshes


def _audit(p: ProblemSpec, m: Mesh, method: MethodConfig) -> None:
    report = audit_conditions(p, m, dg=method.scheme == "IPG")
    if not report.passed:
        logger.warning(
            f"Problem '{p.name}' violates {report.failed_conditions} for "
            f"{method.scheme}. The error estimates may not apply."
        )


def _run_level(
    p: ProblemSpec,
    m: Mesh,
    method: MethodConfig,
    level: int,
    config: StudyConfig,
    rng: np.random.Generator,
    out_dir: Path,
) -> LevelRow:
    assert p.exact is not None
    start = time.perf_counter()
    kind = SpaceKind.CR1 if method.scheme == "CR1" else SpaceKind.BROKEN_P
    s = build_space(m, kind, degree=method.degree)
    system = assemble(p, m, s, method)
    if config.export_systems:
        export_system(system, *system_paths(out_dir, level))
    u_h = FeFunction(space=s, coefficients=solve(system))
    errors = error_norms(p.exact, u_h, s, p, method)

    M = residual_gram(s, p, method)
    cons_dual = consistency_norm(p, m, s, method, M=M)
    rhs_dual = rhs_dual_norm(p, m, s, method, M=M)
    alpha_h: float | None = None
    bound: float | None = None
    if config.strang:
        result = strang_bound(p, m, s, method, A=system.matrix, rng=rng)
        alpha_h, bound = result.alpha_h, result.bound
    elif config.inf_sup:
        alpha_h = inf_sup(system.matrix, M.matrix, M.matrix)

    return LevelRow(
        level=level,
        h=mesh_size(m),
        ndof=s.ndof,
        err_l2=errors.l2,
        err_h1b=errors.broken_h1,
        err_energy=errors.energy,
        cons_dual=cons_dual,
        alpha_h=alpha_h,
        strang_bound=bound,
        wall_ms=1000.0 * (time.perf_counter() - start),
        rhs_dual=rhs_dual,
    )
