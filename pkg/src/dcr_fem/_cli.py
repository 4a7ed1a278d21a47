#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import inspect
import logging
import os
import sys
from typing import Any, Callable

from omegaconf import DictConfig, OmegaConf
from pydantic import ValidationError

from dcr_fem import _logging
from dcr_fem._commands import list_problems, mesh_info, study
from dcr_fem._commands.checks import list_checks
from dcr_fem._commands.study import CLIStudyConfig
from dcr_fem._logging import DCR_FEM_LOG_LEVEL_ENV_VAR
from dcr_fem.errors import (
    AcceptanceCheckError,
    ConfigError,
    InvalidArgumentError,
    InvalidManufacturedSolutionError,
    MeshFormatError,
    NumericalError,
    UnresolvedAutoError,
)

logger = logging.getLogger(__name__)

EXIT_UNKNOWN_COMMAND = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
EXIT_CHECK_FAILED = 4

# Errors caused by user input rather than by the numerics.
_CONFIG_ERRORS = (
    ConfigError,
    InvalidArgumentError,
    InvalidManufacturedSolutionError,
    MeshFormatError,
    UnresolvedAutoError,
    ValidationError,
)

_HELP_COMMANDS = {"help", "--help", "-h"}
_HELP_MSG = """
    Commands:
        dcr-fem study          Run a convergence study on refined meshes.
        dcr-fem list_problems  List built-in problems and their condition audits.
        dcr-fem mesh_info      Show sizes, tags and consistency of a mesh file.
        dcr-fem help           Show help message.

    Run `dcr-fem <command> help` for more information on a specific command.

    Optional arguments:
        -v, --verbose  Run the command in verbose mode for detailed output.
    """

_study_cfg = CLIStudyConfig(problem="", out="")
_STUDY_HELP_MSG = f"""
    Run a convergence study on a sequence of uniformly refined meshes.

    Writes `report.csv`, `report.md` and `study.log` to the output directory. Exits
    with code {EXIT_CHECK_FAILED} if an acceptance check fails.

    Usage:
        dcr-fem study [options]

    Options:
        config (str):
            YAML file with study options. Options passed on the command line take
            precedence over the file.
        problem (str, required):
            Built-in problem, for example 'P1'. Run `dcr-fem list_problems` to see
            all problems.
        out (str, required):
            Output directory.
        scheme (str):
            'CR1' or 'IPG'. Default: {_study_cfg.scheme}
        theta (int):
            Symmetrization parameter of IPG, -1 (SIPG), 0 (IIPG) or 1 (NIPG).
            Default: {_study_cfg.theta}
        eta (float | "auto"):
            Penalty parameter of IPG. 'auto' selects twice the stability bound on
            the coarsest mesh. Default: {_study_cfg.eta}
        degree (int):
            Polynomial degree of IPG, between 1 and 4. Default: {_study_cfg.degree}
        levels (int):
            Number of meshes, at least 2. Default: {_study_cfg.levels}
        n0 (int):
            Subdivisions per side of the coarsest mesh. Default: {_study_cfg.n0}
        seed (int):
            Seed of all randomized estimates. Default: {_study_cfg.seed}
        checks (dict):
            Acceptance checks with bounds, for example
            `checks.rate_l2.min=1.85 checks.rate_l2.max=2.15`. Rate checks accept
            `pairs`, the number of trailing level pairs to check.
            Available checks: {", ".join(list_checks())}
        strang (bool):
            Compute the Strang bound and the inf-sup constant.
            Default: {_study_cfg.strang}
        inf_sup (bool):
            Compute the inf-sup constant if strang is false.
            Default: {_study_cfg.inf_sup}
        export_systems (bool):
            Write every system in MatrixMarket format.
            Default: {_study_cfg.export_systems}
        overwrite (bool):
            Overwrite a non-empty output directory. Default: {_study_cfg.overwrite}

    Optional arguments:
        -v, --verbose  Run the command in verbose mode for detailed output.

    Examples:
    # Crouzeix-Raviart on the Poisson problem
    dcr-fem study problem=P1 out=out/p1_cr levels=4 n0=8

    # SIPG of degree 2 with rate checks
    dcr-fem study problem=P1 scheme=IPG theta=-1 degree=2 out=out/p1_sipg \\
        checks.rate_energy.min=1.85 checks.rate_energy.max=2.15

    # Options from a file with overrides
    dcr-fem study config=study.yaml levels=5 seed=1 out=out/run
"""

_MESH_INFO_HELP_MSG = """
    Show sizes, boundary tags, the mesh size h, the shape regularity and the
    consistency violations of an ASCII mesh file.

    Usage:
        dcr-fem mesh_info mesh=<path>

    Options:
        mesh (str, required):
            Path to the mesh file.
"""

_VERBOSE_FLAGS = ["-v", "--verbose"]


def cli(config: DictConfig) -> None:
    keys = list(config.keys())

    # Any of -v, --verbose enables verbose mode.
    if any(flag in keys for flag in _VERBOSE_FLAGS):
        os.environ[DCR_FEM_LOG_LEVEL_ENV_VAR] = str(logging.DEBUG)
        config = OmegaConf.create(
            {k: v for k, v in config.items() if k not in _VERBOSE_FLAGS}
        )
        keys = list(config.keys())
    _logging.set_up_console_logging()

    if config.is_empty():
        _show_help()
        return

    # First argument is the command. For example `dcr-fem study ...`
    command = str(keys[0]).lower()
    help_if_config_empty = True
    command_fn: Callable[[DictConfig], Any]
    if command in _HELP_COMMANDS:
        _show_help()
        return
    elif command == "study":
        command_fn = study.study_from_dictconfig
        help_msg = _STUDY_HELP_MSG
    elif command == "mesh_info":
        command_fn = mesh_info.mesh_info_from_dictconfig
        help_msg = _MESH_INFO_HELP_MSG
    elif command == "list_problems":
        command_fn = list_problems.list_problems_from_dictconfig
        help_msg = ""
        help_if_config_empty = False
    else:
        _show_invalid_command_help(command=command)
        sys.exit(EXIT_UNKNOWN_COMMAND)

    config.pop(command)
    _run_command_fn(
        command_fn=command_fn,
        config=config,
        help_msg=help_msg,
        help_if_config_empty=help_if_config_empty,
    )


def _cli_entrypoint() -> None:
    # Entrypoint to CLI used in pyproject.toml
    cli(config=OmegaConf.from_cli())


def _run_command_fn(
    command_fn: Callable[[DictConfig], Any],
    config: DictConfig,
    help_msg: str,
    help_if_config_empty: bool,
) -> None:
    """Runs a subcommand function with the given config.

    Errors of the package are logged without traceback and turned into exit codes:
    2 for invalid user input such as configs, arguments and mesh files, 3 for
    numerical failures and 4 for failed acceptance checks. The traceback is logged
    at debug level.

    Args:
        command_fn:
            The function to run.
        config:
            Config passed to `command_fn`.
        help_msg:
            The help message to display if a help command is found in the config. For
            example in `dcr-fem study help`.
        help_if_config_empty:
            If yes, then show the help message if the config is empty. This is useful
            if a user runs `dcr-fem study` without any arguments.
    """
    if _is_help_command_in_config(config) or (
        config.is_empty() and help_if_config_empty
    ):
        _show_msg(help_msg)
        return

    try:
        command_fn(config)
    except _CONFIG_ERRORS as ex:
        _exit_with_error(ex, EXIT_CONFIG_ERROR)
    except NumericalError as ex:
        _exit_with_error(ex, EXIT_NUMERICAL_ERROR)
    except AcceptanceCheckError as ex:
        _exit_with_error(ex, EXIT_CHECK_FAILED)
    except Exception as ex:
        logger.error(ex)
        raise ex from None  # Shorten stacktrace


def _exit_with_error(ex: Exception, code: int) -> None:
    logger.debug("Traceback:", exc_info=ex)
    logger.error(ex)
    sys.exit(code)


def _is_help_command_in_config(config: DictConfig) -> bool:
    return any(help_command in config for help_command in _HELP_COMMANDS)


def _show_help() -> None:
    _show_msg(_HELP_MSG)


def _show_invalid_command_help(command: str) -> None:
    msg = _format_msg(
        f"""
        Unknown command '{command}':
            dcr-fem {command}
        """
    )
    msg += "\n"
    msg += _format_msg(_HELP_MSG.replace("Commands:", "Valid commands are:"))
    _show_msg(msg)


def _show_msg(msg: str) -> None:
    logger.info(_format_msg(msg))


def _format_msg(msg: str) -> str:
    # Inspect.cleandoc removes leading whitespaces from messages. This helps with
    # multiline strings.
    return inspect.cleandoc(msg)
