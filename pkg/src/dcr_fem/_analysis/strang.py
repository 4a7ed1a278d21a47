#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from dcr_fem._analysis.best_approximation import best_approximation
from dcr_fem._analysis.consistency import consistency_norm
from dcr_fem._assembly.assemble import assemble
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._env import Env
from dcr_fem._fespace.space import DiscreteSpace
from dcr_fem._linalg.gram import GramMatrix, NormKind, gram
from dcr_fem._linalg.spectral import inf_sup
from dcr_fem._mesh.mesh import Mesh
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import InvalidManufacturedSolutionError

logger = logging.getLogger(__name__)

# Safety factor on the sampled boundedness constant.
BOUNDEDNESS_FACTOR = 1.5


@dataclass(frozen=True)
class StrangBound:
    bound: float
    alpha_h: float
    # Sampled surrogate of the boundedness constant, a lower estimate times 1.5.
    boundedness: float
    approximation: float
    consistency: float
    trial_norm: NormKind
    test_norm: NormKind


def strang_norm_kinds(cfg: MethodConfig) -> tuple[NormKind, NormKind]:
    """Trial and test norms of the error bound."""
    if cfg.scheme == "CR1":
        return NormKind.BROKEN_H1_SEMI, NormKind.BROKEN_H1_SEMI
    return NormKind.EXTENDED_VH, NormKind.ENERGY_VH


def sampled_boundedness(
    A: sparse.spmatrix,
    M_U: GramMatrix,
    M_V: GramMatrix,
    rng: np.random.Generator,
    samples: int | None = None,
) -> float:
    """Largest |v^T A w| / (|w|_U |v|_V) over random pairs times 1.5."""
    samples = Env.DCR_FEM_STRANG_SAMPLES.value if samples is None else samples
    n = A.shape[1]
    w = rng.standard_normal((n, samples))
    v = rng.standard_normal((A.shape[0], samples))
    pairing = np.abs(np.sum(v * (A @ w), axis=0))
    norm_w = np.sqrt(np.sum(w * (M_U.matrix @ w), axis=0))
    norm_v = np.sqrt(np.sum(v * (M_V.matrix @ v), axis=0))
    return BOUNDEDNESS_FACTOR * float(np.max(pairing / (norm_w * norm_v)))


def strang_bound(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    A: sparse.spmatrix | None = None,
    rng: np.random.Generator | None = None,
) -> StrangBound:
    """Error bound (M/alpha_h + 1) inf_w |u - w| + consistency / alpha_h.

    Args:
        A:
            System matrix of the scheme on s. Assembled if not given.
        rng:
            Generator for sampling the boundedness constant. Defaults to seed 0.
    """
    if p.exact is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' has no exact solution."
        )
    A = assemble(p, m, s, cfg).matrix if A is None else A
    rng = np.random.default_rng(0) if rng is None else rng
    trial_kind, test_kind = strang_norm_kinds(cfg)
    M_U = gram(s, trial_kind, p, cfg)
    M_V = M_U if test_kind is trial_kind else gram(s, test_kind, p, cfg)
    # The inf-sup constant is taken in the discrete test norm on both sides.
    alpha_h = inf_sup(A, M_V, M_V)
    boundedness = sampled_boundedness(A, M_U, M_V, rng)
    _, distance = best_approximation(p.exact, s, trial_kind, p, cfg, M=M_U)
    consistency = consistency_norm(p, m, s, cfg, M=M_V)
    bound = (boundedness / alpha_h + 1.0) * distance + consistency / alpha_h
    logger.debug(
        f"Strang bound {bound:.6e}: alpha_h={alpha_h:.4e}, M~={boundedness:.4e}, "
        f"approximation={distance:.4e}, consistency={consistency:.4e}."
    )
    return StrangBound(
        bound=bound,
        alpha_h=alpha_h,
        boundedness=boundedness,
        approximation=distance,
        consistency=consistency,
        trial_norm=trial_kind,
        test_norm=test_kind,
    )
