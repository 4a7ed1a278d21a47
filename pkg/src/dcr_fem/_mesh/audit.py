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
from typing import Protocol

import numpy as np

from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem.types import Field

logger = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-12


@dataclass(frozen=True)
class MeshViolation:
    kind: str  # "face-multiplicity", "orientation", "normal" or "tag-gap"
    message: str
    index: int


def verify_consistency(m: Mesh) -> list[MeshViolation]:
    """Checks that the mesh is a consistent partition.

    Returns:
        One entry per violation, empty for valid meshes.
    """
    violations: list[MeshViolation] = []
    for face_id in np.flatnonzero(m.face_multiplicity > 2):
        violations.append(
            MeshViolation(
                kind="face-multiplicity",
                message=(
                    f"Face {face_id} {tuple(m.face_vertices[face_id])} is shared by "
                    f"{m.face_multiplicity[face_id]} triangles."
                ),
                index=int(face_id),
            )
        )
    for tri in np.flatnonzero(m.signed_areas <= 0.0):
        violations.append(
            MeshViolation(
                kind="orientation",
                message=(
                    f"Triangle {tri} has signed area {m.signed_areas[tri]:.3e}, "
                    "expected a positive counterclockwise area."
                ),
                index=int(tri),
            )
        )
    outward = np.einsum(
        "fd,fd->f",
        m.face_normal,
        m.face_midpoints - m.centroids[m.face_owner],
    )
    unit_error = np.abs(np.linalg.norm(m.face_normal, axis=1) - 1.0)
    for face_id in np.flatnonzero((outward <= 0.0) | ~(unit_error <= 1e-14)):
        violations.append(
            MeshViolation(
                kind="normal",
                message=f"Face {face_id} has no outward unit normal.",
                index=int(face_id),
            )
        )
    for face_id in np.flatnonzero(
        m.boundary_mask & (m.face_kind == int(FaceKind.UNTAGGED))
    ):
        violations.append(
            MeshViolation(
                kind="tag-gap",
                message=(
                    f"Boundary face {face_id} {tuple(m.face_vertices[face_id])} has no "
                    "boundary tag."
                ),
                index=int(face_id),
            )
        )
    return violations


class BoundaryCoefficients(Protocol):
    @property
    def alpha_tilde(self) -> Field: ...

    @property
    def c(self) -> Field: ...


def classify_boundary(
    m: Mesh, p: BoundaryCoefficients, tol: float = CLASSIFY_TOL
) -> Mesh:
    """Splits the Robin faces into GAMMA21 and GAMMA22.

    A face becomes GAMMA21 if alpha_tilde equals nu.c at its midpoint within tol.
    Faces on which alpha_tilde - nu.c changes between zero and nonzero along the
    face cannot be tagged faithfully. They are classified by the midpoint and
    reported as a warning.
    """
    robin = m.faces_of_kind(FaceKind.GAMMA2, FaceKind.GAMMA21, FaceKind.GAMMA22)
    if len(robin) == 0:
        return m

    endpoints = m.vertices[m.face_vertices[robin]]  # (nr, 2, 2)
    samples = np.stack(
        [endpoints[:, 0], endpoints.mean(axis=1), endpoints[:, 1]], axis=1
    )  # (nr, 3, 2)
    normals = m.face_normal[robin][:, None, :]
    gap = np.abs(p.alpha_tilde(samples) - np.sum(normals * p.c(samples), axis=-1))
    on_gamma21 = gap <= tol

    face_kind = np.array(m.face_kind, copy=True)
    face_kind[robin] = np.where(
        on_gamma21[:, 1], int(FaceKind.GAMMA21), int(FaceKind.GAMMA22)
    )
    mixed = robin[on_gamma21.any(axis=1) & ~on_gamma21.all(axis=1)]
    if len(mixed) > 0:
        logger.warning(
            f"{len(mixed)} Robin faces change between alpha_tilde = nu.c and "
            f"alpha_tilde != nu.c along the face (face ids {mixed[:10].tolist()}). "
            "They are classified by their midpoint."
        )
    logger.debug(
        f"Classified {int(on_gamma21[:, 1].sum())} GAMMA21 and "
        f"{int((~on_gamma21[:, 1]).sum())} GAMMA22 faces."
    )
    return m.with_face_kinds(face_kind)
