#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from typing import Any, Iterable

from pydantic import BaseModel, ConfigDict


class PydanticConfig(BaseModel):
    """Base class for all command configs."""

    model_config = ConfigDict(
        extra="forbid",
        # Configs are resolved in place, e.g. eta="auto" is replaced by a number.
        frozen=False,
        strict=True,
        validate_assignment=True,
        validate_default=True,
    )

    def has_auto(self) -> bool:
        """Returns True if the config or any nested config has a value 'auto'."""
        return _has_auto(self)


def _has_auto(config: PydanticConfig | dict[str, Any]) -> bool:
    values: Iterable[Any]
    if isinstance(config, PydanticConfig):
        values = [getattr(config, field) for field in type(config).model_fields]
    else:
        values = config.values()

    for value in values:
        if isinstance(value, str) and value == "auto":
            return True
        if isinstance(value, (PydanticConfig, dict)) and _has_auto(value):
            return True
    return False
