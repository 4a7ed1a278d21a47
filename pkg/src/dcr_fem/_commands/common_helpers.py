#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any

from dcr_fem.errors import ConfigError
from dcr_fem.types import PathLike

logger = logging.getLogger(__name__)


def get_out_dir(out: PathLike, overwrite: bool) -> Path:
    out_dir = Path(out).resolve()
    logger.debug(f"Checking if output directory '{out_dir}' exists.")
    if out_dir.exists():
        if not out_dir.is_dir():
            raise ConfigError(f"Output '{out_dir}' is not a directory!")
        if any(out_dir.iterdir()) and not overwrite:
            raise ConfigError(
                f"Output '{out_dir}' is not empty! Set overwrite=True to overwrite the "
                "directory."
            )
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def get_in_path(path: PathLike) -> Path:
    in_path = Path(path).resolve()
    logger.debug(f"Making sure input '{in_path}' exists.")
    if not in_path.exists():
        raise ConfigError(f"Input '{in_path}' does not exist!")
    if not in_path.is_file():
        raise ConfigError(f"Input '{in_path}' is not a file!")
    return in_path


def pretty_format_args(args: dict[str, Any], indent: int = 4) -> str:
    return json.dumps(sanitize_config_dict(args), indent=indent, sort_keys=True)


def sanitize_config_dict(args: dict[str, Any]) -> dict[str, Any]:
    """Replaces values that are not JSON serializable with their string form."""
    return {key: _sanitize(value) for key, value in args.items()}


def _sanitize(value: Any) -> Any:
    if isinstance(value, dict):
        return sanitize_config_dict(value)
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)
