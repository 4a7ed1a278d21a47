#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from pydantic import ValidationError
from pydantic_core import ErrorDetails
from typing_extensions import Any, Literal, Type, TypeVar

from dcr_fem._configs.config import PydanticConfig
from dcr_fem.errors import ConfigValidationError, UnresolvedAutoError

_PydanticConfig = TypeVar("_PydanticConfig", bound=PydanticConfig)


def pydantic_model_validate(
    model: Type[_PydanticConfig],
    obj: dict[str, Any],
) -> _PydanticConfig:
    """Validates a dict against a config class with readable error messages."""
    try:
        return model.model_validate(obj)
    except ValidationError as ex:
        errors = ex.errors()
        messages = "\n".join(f"  {_pydantic_error_msg(err)}" for err in errors)
        raise ConfigValidationError(
            f"Found {len(errors)} errors in the config!\n{messages}"
        ) from None


_T = TypeVar("_T")


def no_auto(v: _T | Literal["auto"]) -> _T:
    """Returns the value unless it is 'auto'."""
    if isinstance(v, str) and v == "auto":
        raise UnresolvedAutoError(
            "Got an unresolved 'auto' value. Resolve the config before using it."
        )
    return v


def assert_config_resolved(config: PydanticConfig) -> None:
    if config.has_auto():
        raise UnresolvedAutoError(
            f"Found unresolved 'auto' values in the config '{config!r}'."
        )


def _pydantic_error_msg(err: ErrorDetails) -> str:
    """Shortens a pydantic error to a single line.

    Example:
        ``Input should be a valid integer [type=int_type, input_value='1', ...]`` at
        location ``('levels',)`` becomes
        ``Invalid type for key 'levels': Input should be a valid integer but got '1'
        with type 'str'``.
    """
    type_ = err["type"]
    loc = _pydantic_loc_to_dot_sep(err["loc"])
    input_ = err["input"]

    if type_ == "missing":
        return f"Missing key: '{loc}'"
    if type_ == "extra_forbidden":
        return f"Unknown key: '{loc}'"
    if type_.endswith("_type") or type_ in ("literal_error", "is_instance_of"):
        if type_ == "is_instance_of":
            # The last location entry is a long internal validator description.
            loc = _pydantic_loc_to_dot_sep(err["loc"][:-1])
            err_class = err.get("ctx", {}).get("class")
            if err_class:
                loc += f".{err_class}"
        return (
            f"Invalid type for key '{loc}': {err['msg']} but got {input_!r} "
            f"with type '{type(input_).__name__}'"
        )
    return f"Error for key '{loc}': {err['msg']} (error_type={type_}, input={input_!r})"


def _pydantic_loc_to_dot_sep(loc: tuple[str | int, ...]) -> str:
    parts: list[str] = []
    for x in loc:
        if isinstance(x, int):
            parts.append(f"[{x}]")
        elif isinstance(x, str):
            parts.append(x if not parts else f".{x}")
        else:
            raise TypeError(f"Unexpected location entry {x!r}")
    return "".join(parts)
