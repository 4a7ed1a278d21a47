#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from typing import Any

from omegaconf import DictConfig, OmegaConf, SCMode

from dcr_fem.errors import ConfigError
from dcr_fem.types import PathLike


def config_to_dict(config: DictConfig) -> dict[str, Any]:
    config_dict = OmegaConf.to_container(
        config,
        resolve=True,
        throw_on_missing=True,
        enum_to_str=False,
        structured_config_mode=SCMode.DICT,
    )
    assert isinstance(config_dict, dict)
    # to_container is typed loosely, keys of a DictConfig are always strings here.
    result: dict[str, Any] = config_dict  # type: ignore[assignment]
    return result


def load_yaml_with_overrides(path: PathLike, overrides: DictConfig) -> DictConfig:
    """Loads a YAML config file and merges the overrides on top of it.

    Args:
        path:
            Path to the YAML file. Its top level must be a mapping.
        overrides:
            Values that take precedence over the file, typically from the CLI.
    """
    try:
        file_config = OmegaConf.load(str(path))
    except FileNotFoundError:
        raise ConfigError(f"Config file '{path}' does not exist!") from None
    if not isinstance(file_config, DictConfig):
        raise ConfigError(f"Config file '{path}' must contain a mapping at top level.")
    merged = OmegaConf.merge(file_config, overrides)
    assert isinstance(merged, DictConfig)
    return merged
