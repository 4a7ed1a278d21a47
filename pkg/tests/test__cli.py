#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import os
import re
from pathlib import Path

import pytest
from omegaconf import OmegaConf
from pytest import LogCaptureFixture
from pydantic import ValidationError
from pytest_mock import MockerFixture

from dcr_fem import _cli
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._commands.study import CLIStudyConfig
from dcr_fem._configs.config import PydanticConfig
from dcr_fem.errors import (
    AcceptanceCheckError,
    ConfigValidationError,
    InvalidArgumentError,
    InvalidManufacturedSolutionError,
    MeshFormatError,
    SingularSystemError,
    UnresolvedAutoError,
    UnsupportedDegreeError,
)

from . import helpers

_STUDY_ARGS = OmegaConf.create({"problem": "P1", "out": "out"})


@pytest.mark.parametrize(
    "command,msg",
    [
        (["help"], _cli._HELP_MSG),
        (["--help"], _cli._HELP_MSG),
        (["study"], _cli._STUDY_HELP_MSG),
        (["study", "help"], _cli._STUDY_HELP_MSG),
        (["mesh_info"], _cli._MESH_INFO_HELP_MSG),
        (["mesh_info", "help"], _cli._MESH_INFO_HELP_MSG),
    ],
)
def test_cli__help(command: list[str], msg: str, caplog: LogCaptureFixture) -> None:
    config = OmegaConf.from_cli(command)
    with caplog.at_level(level="INFO"):
        _cli.cli(config=config)
        assert _cli._format_msg(msg) == caplog.records[0].message


def test_cli__empty(caplog: LogCaptureFixture) -> None:
    with caplog.at_level(level="INFO"):
        _cli.cli(config=OmegaConf.create({}))
        assert _cli._format_msg(_cli._HELP_MSG) == caplog.records[0].message


def test_cli__study(mocker: MockerFixture) -> None:
    config = OmegaConf.from_cli(["study", "problem=P1", "out=out"])
    mock_study = mocker.patch.object(_cli.study, "study_from_dictconfig")
    _cli.cli(config=config)
    mock_study.assert_called_once_with(_STUDY_ARGS)


def test_cli__mesh_info(tmp_path: Path, caplog: LogCaptureFixture) -> None:
    path = helpers.write_mesh_file(tmp_path / "mesh.txt", helpers.unit_triangle_lines())
    with caplog.at_level(level="INFO"):
        _cli.cli(config=OmegaConf.from_cli(["mesh_info", f"mesh={path}"]))
    assert "The mesh is consistent." in caplog.text


def test_cli__list_problems(caplog: LogCaptureFixture) -> None:
    config = OmegaConf.from_cli(["list_problems"])
    with caplog.at_level(level="INFO"):
        _cli.cli(config=config)
        assert "    P1" in caplog.records[0].message
        assert "    P5" in caplog.records[0].message


def test_cli__unknown_command(caplog: LogCaptureFixture) -> None:
    config = OmegaConf.from_cli(["train", "out=out"])
    with caplog.at_level(level="INFO"):
        with pytest.raises(SystemExit) as ex_info:
            _cli.cli(config=config)
    assert ex_info.value.code == _cli.EXIT_UNKNOWN_COMMAND
    assert "Unknown command 'train'" in caplog.text
    assert "Valid commands are:" in caplog.text


@pytest.mark.parametrize(
    "error, code",
    [
        (ConfigValidationError("Missing key: 'out'"), _cli.EXIT_CONFIG_ERROR),
        (MeshFormatError("Mesh file is empty."), _cli.EXIT_CONFIG_ERROR),
        (InvalidArgumentError("Tolerance must be positive."), _cli.EXIT_CONFIG_ERROR),
        (UnsupportedDegreeError("Degree 5 is not supported."), _cli.EXIT_CONFIG_ERROR),
        (
            InvalidManufacturedSolutionError("Problem has no exact solution."),
            _cli.EXIT_CONFIG_ERROR,
        ),
        (UnresolvedAutoError("eta is still 'auto'."), _cli.EXIT_CONFIG_ERROR),
        (SingularSystemError("numerically singular"), _cli.EXIT_NUMERICAL_ERROR),
        (
            AcceptanceCheckError("Checks ['rate_l2'] failed.", failed=["rate_l2"]),
            _cli.EXIT_CHECK_FAILED,
        ),
    ],
)
def test_cli__exit_codes(
    mocker: MockerFixture, caplog: LogCaptureFixture, error: Exception, code: int
) -> None:
    mocker.patch.object(_cli.study, "study_from_dictconfig", side_effect=error)
    config = OmegaConf.from_cli(["study", "problem=P1", "out=out"])
    with caplog.at_level(level="INFO"):
        with pytest.raises(SystemExit) as ex_info:
            _cli.cli(config=config)
    assert ex_info.value.code == code
    assert str(error) in caplog.text


def test_cli__pydantic_validation_error(
    mocker: MockerFixture, caplog: LogCaptureFixture
) -> None:
    with pytest.raises(ValidationError) as validation_info:
        MethodConfig(degree=5)
    mocker.patch.object(
        _cli.study, "study_from_dictconfig", side_effect=validation_info.value
    )
    config = OmegaConf.from_cli(["study", "problem=P1", "out=out"])
    with caplog.at_level(level="INFO"):
        with pytest.raises(SystemExit) as ex_info:
            _cli.cli(config=config)
    assert ex_info.value.code == _cli.EXIT_CONFIG_ERROR
    assert "degree" in caplog.text


@pytest.mark.parametrize(
    "arg, msg",
    [
        ("degree=5", "degree must be in [1, 4]"),
        ("degree=0", "degree must be in [1, 4]"),
        ("eta=0", "eta must be positive"),
        ("eta=-1.5", "eta must be positive"),
    ],
)
def test_cli__study_invalid_method(
    tmp_path: Path, caplog: LogCaptureFixture, arg: str, msg: str
) -> None:
    out = tmp_path / "out"
    config = OmegaConf.from_cli(
        ["study", "problem=P1", f"out={out}", "scheme=IPG", "levels=2", arg]
    )
    with caplog.at_level(level="INFO"):
        with pytest.raises(SystemExit) as ex_info:
            _cli.cli(config=config)
    assert ex_info.value.code == _cli.EXIT_CONFIG_ERROR
    assert msg in caplog.text
    assert not out.exists()


def test_cli__unexpected_error(mocker: MockerFixture) -> None:
    mocker.patch.object(
        _cli.study, "study_from_dictconfig", side_effect=ValueError("boom")
    )
    config = OmegaConf.from_cli(["study", "problem=P1", "out=out"])
    with pytest.raises(ValueError, match="boom"):
        _cli.cli(config=config)


def test_cli__invalid_config(tmp_path: Path) -> None:
    config = OmegaConf.from_cli(["study", "problem=P1", f"out={tmp_path}", "levels=1"])
    with pytest.raises(SystemExit) as ex_info:
        _cli.cli(config=config)
    assert ex_info.value.code == _cli.EXIT_CONFIG_ERROR


def test_cli__missing_mesh(tmp_path: Path) -> None:
    config = OmegaConf.from_cli(["mesh_info", f"mesh={tmp_path / 'missing.txt'}"])
    with pytest.raises(SystemExit) as ex_info:
        _cli.cli(config=config)
    assert ex_info.value.code == _cli.EXIT_CONFIG_ERROR


@pytest.mark.parametrize("flag", ["-v", "--verbose"])
def test_cli__verbose(mocker: MockerFixture, flag: str) -> None:
    mocker.patch.dict(os.environ)
    mock_study = mocker.patch.object(_cli.study, "study_from_dictconfig")
    _cli.cli(config=OmegaConf.from_cli(["study", "problem=P1", "out=out", flag]))
    assert os.environ[_cli.DCR_FEM_LOG_LEVEL_ENV_VAR] == "10"
    mock_study.assert_called_once_with(_STUDY_ARGS)


def test__STUDY_HELP_MSG__parameters() -> None:
    """The study help message documents every parameter of CLIStudyConfig."""
    _assert_help_msg_contains_params(
        msg=_cli._STUDY_HELP_MSG, config=CLIStudyConfig(problem="", out="")
    )


def _assert_help_msg_contains_params(msg: str, config: PydanticConfig) -> None:
    for param in config.model_dump().keys():
        assert re.search(rf"{param} \(.*\):", msg), f"{param} is missing"
