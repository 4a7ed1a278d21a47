#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging

import numpy as np
from scipy import linalg

from dcr_fem._fespace.basis import LagrangeBasis
from dcr_fem._fespace.quadrature import face_rule, triangle_rule
from dcr_fem._mesh.mesh import Mesh
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)

# Reference coordinates of the endpoints of local face i, opposite vertex i.
_REFERENCE_FACES = np.array(
    [
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.0]],
    ]
)
# Decimals used to group elements into similarity classes.
_SHAPE_DECIMALS = 8


def estimate_trace_constant(m: Mesh, k: int) -> float:
    """Estimates C_tr in |v|_F <= C_tr h_F^(-1/2) |v|_K for v in P_k.

    For every similarity class of elements the largest generalized eigenvalue of
    the face mass matrix relative to the element mass matrix is computed. The
    estimate is the square root of the largest such eigenvalue times h_F.
    """
    lengths = m.edge_lengths
    # Similar triangles share their edge lengths up to scaling.
    shapes = np.round(lengths / lengths.max(axis=1, keepdims=True), _SHAPE_DECIMALS)
    _, representatives = np.unique(shapes, axis=0, return_index=True)
    corners = m.vertices[m.triangles[representatives]]
    constant = max(trace_constant_of_element(c, k) for c in corners)
    logger.debug(
        f"Estimated trace constant {constant:.6g} for k={k} from "
        f"{len(representatives)} element shapes."
    )
    return constant


def trace_constant_of_element(corners: NDArrayFloat, k: int) -> float:
    """Trace constant of P_k on the triangle with the given corners (3, 2)."""
    basis = LagrangeBasis(k)
    rule = triangle_rule(2 * k)
    phi = basis.values(rule.reference_points)
    jacobian = np.stack([corners[1] - corners[0], corners[2] - corners[0]], axis=1)
    det = abs(float(np.linalg.det(jacobian)))
    element_mass = det * (phi * rule.weights) @ phi.T

    frule = face_rule(2 * k)
    best = 0.0
    for i, (start, end) in enumerate(_REFERENCE_FACES):
        points = start + frule.points[:, None] * (end - start)
        phi_face = basis.values(points)
        h_face = float(np.linalg.norm(corners[(i + 2) % 3] - corners[(i + 1) % 3]))
        face_mass = h_face * (phi_face * frule.weights) @ phi_face.T
        largest = linalg.eigh(face_mass, element_mass, eigvals_only=True)[-1]
        best = max(best, float(largest) * h_face)
    return float(np.sqrt(best))
