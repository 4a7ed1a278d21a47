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
from typing import Callable, Literal, Optional

import numpy as np

from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem.errors import InvalidArgumentError
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)

Side = Literal["left", "right", "bottom", "top"]
SIDES: tuple[Side, ...] = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class BoundaryLayout:
    """Assigns a tag to every boundary edge of the unit square.

    Args:
        left, right, bottom, top:
            Tag of the edges on the respective side.
        rule:
            Optional override called with the side and the edge midpoint. Returning
            None keeps the side tag.
    """

    left: FaceKind = FaceKind.GAMMA3
    right: FaceKind = FaceKind.GAMMA3
    bottom: FaceKind = FaceKind.GAMMA3
    top: FaceKind = FaceKind.GAMMA3
    rule: Optional[Callable[[Side, NDArrayFloat], Optional[FaceKind]]] = None

    @classmethod
    def uniform(cls, kind: FaceKind) -> BoundaryLayout:
        return cls(left=kind, right=kind, bottom=kind, top=kind)

    def tag(self, side: Side, midpoint: NDArrayFloat) -> FaceKind:
        if self.rule is not None:
            kind = self.rule(side, midpoint)
            if kind is not None:
                return kind
        tag: FaceKind = getattr(self, side)
        return tag

    def describe(self) -> str:
        return ", ".join(f"{side}={getattr(self, side).name}" for side in SIDES)


def generate_unit_square(n: int, layout: BoundaryLayout | None = None) -> Mesh:
    """Structured criss-cross triangulation of the unit square.

    Each of the n x n cells is split by one diagonal whose direction alternates
    like a checkerboard, giving 2n^2 triangles on (n+1)^2 vertices.

    Args:
        n:
            Number of subdivisions per side, at least 1.
        layout:
            Boundary tags. Defaults to Dirichlet (GAMMA3) on all sides.
    """
    if n < 1:
        raise InvalidArgumentError(f"Number of subdivisions must be >= 1, got {n}.")
    layout = BoundaryLayout() if layout is None else layout

    coords = np.linspace(0.0, 1.0, n + 1)
    xx, yy = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.stack([xx.ravel(), yy.ravel()], axis=1)

    def index(i: int, j: int) -> int:
        return j * (n + 1) + i

    triangles: list[tuple[int, int, int]] = []
    for j in range(n):
        for i in range(n):
            v00, v10 = index(i, j), index(i + 1, j)
            v01, v11 = index(i, j + 1), index(i + 1, j + 1)
            if (i + j) % 2 == 0:
                triangles += [(v00, v10, v11), (v00, v11, v01)]
            else:
                triangles += [(v00, v10, v01), (v10, v11, v01)]

    boundary_tags: dict[tuple[int, int], FaceKind] = {}
    for k in range(n):
        edges: dict[Side, tuple[int, int]] = {
            "bottom": (index(k, 0), index(k + 1, 0)),
            "top": (index(k, n), index(k + 1, n)),
            "left": (index(0, k), index(0, k + 1)),
            "right": (index(n, k), index(n, k + 1)),
        }
        for side, (a, b) in edges.items():
            midpoint = 0.5 * (vertices[a] + vertices[b])
            boundary_tags[(a, b)] = layout.tag(side, midpoint)

    mesh = Mesh.from_arrays(
        vertices=vertices,
        triangles=np.array(triangles, dtype=np.int64),
        boundary_tags=boundary_tags,
        level=0,
    )
    logger.debug(
        f"Generated unit square mesh n={n} with {mesh.num_triangles} triangles "
        f"({layout.describe()})."
    )
    return mesh


def refine_uniform(m: Mesh) -> Mesh:
    """Red refinement: splits every triangle into four similar children.

    The midpoint of face f becomes vertex nv + f. Children of triangle t are stored
    at indices 4t..4t+3 and boundary edges inherit the tag of their parent face.
    """
    nv = m.num_vertices
    midpoints = m.face_midpoints
    vertices = np.concatenate([m.vertices, midpoints], axis=0)

    v0, v1, v2 = (m.triangles[:, i] for i in range(3))
    m0, m1, m2 = (nv + m.triangle_faces[:, i] for i in range(3))
    children = np.stack(
        [
            np.stack([v0, m2, m1], axis=1),
            np.stack([m2, v1, m0], axis=1),
            np.stack([m1, m0, v2], axis=1),
            np.stack([m0, m1, m2], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3)

    boundary_tags: dict[tuple[int, int], FaceKind] = {}
    for face_id, kind in m.boundary_tags.items():
        a, b = (int(v) for v in m.face_vertices[face_id])
        mid = nv + face_id
        boundary_tags[(a, mid)] = kind
        boundary_tags[(mid, b)] = kind

    refined = Mesh.from_arrays(
        vertices=vertices,
        triangles=children,
        boundary_tags=boundary_tags,
        level=m.level + 1,
    )
    logger.debug(
        f"Refined mesh to level {refined.level} with {refined.num_triangles} "
        "triangles."
    )
    return refined
