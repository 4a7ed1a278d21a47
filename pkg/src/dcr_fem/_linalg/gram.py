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
from enum import Enum

import numpy as np
from scipy import sparse

from dcr_fem._assembly.assemble import classified, form_value
from dcr_fem._assembly.fields import BasisFunctions, FieldSet
from dcr_fem._assembly.forms import (
    BilinearForm,
    FaceTerm,
    VolumeTerm,
    integrate_bilinear,
)
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._configs.validate import no_auto
from dcr_fem._fespace.space import DiscreteSpace
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.problem import ProblemSpec

logger = logging.getLogger(__name__)


class NormKind(Enum):
    L2 = "L2"
    BROKEN_H1_SEMI = "BrokenH1Semi"
    BROKEN_H1 = "BrokenH1"
    ENERGY_VH = "EnergyVh"
    EXTENDED_VH = "ExtendedVh"

    @property
    def needs_eta(self) -> bool:
        return self in (NormKind.ENERGY_VH, NormKind.EXTENDED_VH)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    norm_kind: NormKind
    matrix: sparse.csr_matrix

    def norm(self, coefficients: np.ndarray) -> float:  # type: ignore[type-arg]
        return float(np.sqrt(max(coefficients @ (self.matrix @ coefficients), 0.0)))


def _energy_faces() -> dict[FaceKind, tuple[FaceTerm, ...]]:
    return {
        FaceKind.INTERIOR: (FaceTerm.PENALTY, FaceTerm.ABS_CONV_JUMP),
        FaceKind.GAMMA3: (FaceTerm.PENALTY, FaceTerm.ABS_CONV_JUMP),
        FaceKind.GAMMA1: (FaceTerm.ABS_CONV_JUMP,),
        FaceKind.GAMMA21: (FaceTerm.ABS_CONV_JUMP,),
        FaceKind.GAMMA22: (FaceTerm.ROBIN_ENERGY,),
    }


def norm_form(kind: NormKind, eta: float = 1.0) -> BilinearForm:
    """Inner product of the given norm as a bilinear form."""
    if kind is NormKind.L2:
        return BilinearForm(volume=(VolumeTerm.MASS,))
    if kind is NormKind.BROKEN_H1_SEMI:
        return BilinearForm(volume=(VolumeTerm.GRAD,))
    if kind is NormKind.BROKEN_H1:
        return BilinearForm(volume=(VolumeTerm.GRAD, VolumeTerm.MASS))
    volume = (VolumeTerm.DIFFUSION, VolumeTerm.ENERGY_REACTION)
    faces = _energy_faces()
    if kind is NormKind.EXTENDED_VH:
        for face_kind in FaceKind:
            if face_kind in (FaceKind.UNTAGGED, FaceKind.GAMMA2):
                continue
            extra = [FaceTerm.EXTENDED_CONVECTION]
            if face_kind in (FaceKind.INTERIOR, FaceKind.GAMMA3):
                extra.insert(0, FaceTerm.EXTENDED_FLUX)
            faces[face_kind] = faces.get(face_kind, ()) + tuple(extra)
    return BilinearForm(volume=volume, faces=faces, eta=eta)


def norm_eta(kind: NormKind, cfg: MethodConfig) -> float:
    if not kind.needs_eta:
        return 1.0
    return float(no_auto(cfg.eta))


def gram(
    space: DiscreteSpace, norm_kind: NormKind, p: ProblemSpec, cfg: MethodConfig
) -> GramMatrix:
    """Gram matrix M[i, j] = <phi_j, phi_i> of the given norm."""
    m = classified(p, space.mesh)
    basis = BasisFunctions(space)
    matrix = integrate_bilinear(
        norm_form(norm_kind, eta=norm_eta(norm_kind, cfg)),
        p,
        m,
        basis,
        basis,
        space.quad_degree,
    )
    logger.debug(
        f"Assembled {norm_kind.value} Gram matrix with {matrix.nnz} nonzeros."
    )
    return GramMatrix(norm_kind=norm_kind, matrix=matrix)


def norm_of(
    kind: NormKind,
    p: ProblemSpec,
    m: Mesh,
    w: FieldSet,
    quad_degree: int,
    eta: float = 1.0,
) -> float:
    """Norm of a single function, e.g. an error u - u_h."""
    value = form_value(norm_form(kind, eta=eta), p, m, w, w, quad_degree)
    return float(np.sqrt(max(value, 0.0)))
