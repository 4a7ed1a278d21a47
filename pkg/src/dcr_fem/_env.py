#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

T = TypeVar("T")


@dataclass(frozen=True)
class EnvVar(Generic[T]):
    name: str
    default: T
    type_: Callable[[str], T]
    # Treat `MY_VAR=` and `MY_VAR=""` as unset.
    convert_empty_str_to_default: bool = True

    @property
    def value(self) -> T:
        """Returns the value of the environment variable converted to its type."""
        raw = os.getenv(self.name)
        if raw is None or (self.convert_empty_str_to_default and raw == ""):
            return self.default
        return self.type_(raw)

    @property
    def raw_value(self) -> str | None:
        """Returns the raw string value, or the default as string if unset."""
        raw = os.getenv(self.name)
        if raw is not None:
            return raw
        return None if self.default is None else str(self.default)


class Env:
    # Console log level. Either a level name (DEBUG, INFO, ...) or its number.
    DCR_FEM_LOG_LEVEL: EnvVar[str] = EnvVar(
        name="DCR_FEM_LOG_LEVEL",
        default="INFO",
        type_=str,
    )
    # Largest number of unknowns for which inf-sup and eigenvalue computations use
    # dense factorizations. Larger problems switch to sparse iterative eigensolvers.
    DCR_FEM_DENSE_MAX_NDOF: EnvVar[int] = EnvVar(
        name="DCR_FEM_DENSE_MAX_NDOF",
        default=4000,
        type_=int,
    )
    # Number of random pairs used to sample the boundedness constant of the
    # Strang bound.
    DCR_FEM_STRANG_SAMPLES: EnvVar[int] = EnvVar(
        name="DCR_FEM_STRANG_SAMPLES",
        default=200,
        type_=int,
    )
