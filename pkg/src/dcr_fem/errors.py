#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations


class DcrFemError(Exception):
    pass


class ConfigError(DcrFemError):
    pass


class ConfigValidationError(ConfigError):
    pass


class UnknownProblemError(ConfigError):
    pass


class UnresolvedAutoError(DcrFemError):
    pass


class InvalidArgumentError(DcrFemError):
    pass


class UnsupportedDegreeError(InvalidArgumentError):
    pass


class InvalidManufacturedSolutionError(DcrFemError):
    pass


class MeshFormatError(DcrFemError):
    pass


class NumericalError(DcrFemError):
    pass


class SingularSystemError(NumericalError):
    def __init__(self, message: str, pivot_info: str | None = None) -> None:
        super().__init__(message)
        self.pivot_info = pivot_info


class RankDeficientGramError(NumericalError):
    pass


class IndefiniteGramError(NumericalError):
    pass


class AcceptanceCheckError(DcrFemError):
    def __init__(self, message: str, failed: list[str]) -> None:
        super().__init__(message)
        self.failed = failed
