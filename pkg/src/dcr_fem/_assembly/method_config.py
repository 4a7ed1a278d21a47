#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from typing import Literal

import numpy as np
from pydantic import field_validator

from dcr_fem._assembly.trace_constant import estimate_trace_constant
from dcr_fem._configs.config import PydanticConfig
from dcr_fem._configs.validate import no_auto
from dcr_fem._fespace.basis import MAX_DEGREE
from dcr_fem._fespace.quadrature import triangle_rule
from dcr_fem._mesh.mesh import Mesh
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import ConfigError

logger = logging.getLogger(__name__)

Scheme = Literal["CR1", "IPG"]
THETAS = (-1, 0, 1)
THETA_NAMES = {-1: "SIPG", 0: "IIPG", 1: "NIPG"}

# Faces per triangle.
_NUM_FACES = 3
# eta="auto" uses this multiple of the stability bound.
AUTO_ETA_FACTOR = 2.0
# Penalty for theta = 1, where the stability bound vanishes.
NIPG_DEFAULT_ETA = 1.0


class MethodConfig(PydanticConfig):
    """Discretization parameters.

    theta, eta and degree are only used by the interior penalty scheme.
    """

    scheme: Scheme = "CR1"
    theta: int = -1
    eta: float | Literal["auto"] = "auto"
    degree: int = 1

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, theta: int) -> int:
        if theta not in THETAS:
            raise ValueError(f"theta must be one of {THETAS}, got {theta}")
        return theta

    @field_validator("eta")
    @classmethod
    def _check_eta(cls, eta: float | str) -> float | str:
        if not isinstance(eta, str) and not eta > 0:
            raise ValueError(f"eta must be positive, got {eta}")
        return eta

    @field_validator("degree")
    @classmethod
    def _check_degree(cls, degree: int) -> int:
        if not 1 <= degree <= MAX_DEGREE:
            raise ValueError(f"degree must be in [1, {MAX_DEGREE}], got {degree}")
        return degree

    def describe(self) -> str:
        if self.scheme == "CR1":
            return "CR1"
        name = THETA_NAMES.get(self.theta, f"theta={self.theta}")
        return f"{name}(k={self.degree}, eta={self.eta})"


def check_ipg_config(cfg: MethodConfig) -> tuple[int, float]:
    """Returns theta and the resolved eta of an interior penalty config."""
    if cfg.scheme != "IPG":
        raise ConfigError(f"Expected an IPG method config, got scheme '{cfg.scheme}'.")
    if cfg.theta not in THETAS:
        raise ConfigError(f"theta must be one of {THETAS}, got {cfg.theta}.")
    eta = float(no_auto(cfg.eta))
    if not eta > 0:
        raise ConfigError(f"eta must be positive, got {eta}.")
    return cfg.theta, eta


def max_diffusion(p: ProblemSpec, m: Mesh) -> float:
    """Largest spectral norm of K sampled at element quadrature points."""
    points = m.map_to_elements(triangle_rule(4).points)
    return float(np.linalg.norm(p.K(points), ord=2, axis=(-2, -1)).max())


def stability_bound(theta: int, trace_constant: float, k_max: float) -> float:
    """Penalty threshold (1 - theta) * 3 * C_tr^2 * |K|_inf / 4 for triangles."""
    return (1 - theta) * _NUM_FACES * trace_constant**2 * k_max / 4.0


def check_stability(cfg: MethodConfig, p: ProblemSpec, m: Mesh) -> bool:
    """Warns if eta is below the stability bound. Returns True if it is above."""
    theta, eta = check_ipg_config(cfg)
    if theta == 1:
        return True
    bound = stability_bound(
        theta, estimate_trace_constant(m, cfg.degree), max_diffusion(p, m)
    )
    if not eta > bound:
        logger.warning(
            f"Penalty eta={eta:.4g} does not exceed the stability bound "
            f"{bound:.4g} of {cfg.describe()}. The discrete problem may be unstable."
        )
        return False
    return True


def resolve_eta(cfg: MethodConfig, p: ProblemSpec, m: Mesh) -> MethodConfig:
    """Returns a copy of cfg with eta="auto" replaced by a number.

    The automatic penalty is twice the stability bound, or 1 for theta = 1.
    """
    if cfg.eta != "auto":
        return cfg
    bound = stability_bound(
        cfg.theta, estimate_trace_constant(m, cfg.degree), max_diffusion(p, m)
    )
    eta = AUTO_ETA_FACTOR * bound if cfg.theta != 1 else NIPG_DEFAULT_ETA
    logger.debug(f"Resolved eta='auto' to {eta:.6g} (stability bound {bound:.6g}).")
    return cfg.model_copy(update={"eta": eta})
