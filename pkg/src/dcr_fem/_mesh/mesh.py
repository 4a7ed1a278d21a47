#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping

import numpy as np

from dcr_fem.types import NDArrayBool, NDArrayFloat, NDArrayInt


class FaceKind(IntEnum):
    """Classification of a mesh face.

    GAMMA2 is the coarse tag of a Robin face before it is split into GAMMA21
    (alpha_tilde equals nu.c) and GAMMA22 by classify_boundary. The numeric values
    match the tags of the ASCII mesh format.
    """

    UNTAGGED = -1
    INTERIOR = 0
    GAMMA1 = 1
    GAMMA2 = 2
    GAMMA3 = 3
    GAMMA21 = 21
    GAMMA22 = 22

    @property
    def is_robin(self) -> bool:
        return self in (FaceKind.GAMMA2, FaceKind.GAMMA21, FaceKind.GAMMA22)


@dataclass(frozen=True)
class Face:
    id: int
    endpoints: tuple[int, int]
    owner: int
    neighbor: int | None
    normal: tuple[float, float]
    length: float
    kind: FaceKind


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming triangulation with face adjacency.

    Faces are numbered by their sorted vertex pair. The owner of a face is the
    adjacent triangle with the lower index and the normal points out of it. Local
    face i of a triangle is the edge opposite its vertex i.

    Use Mesh.from_arrays to build a mesh. All arrays are read-only.
    """

    vertices: NDArrayFloat  # (nv, 2)
    triangles: NDArrayInt  # (nt, 3), counterclockwise
    triangle_faces: NDArrayInt  # (nt, 3), face opposite local vertex i
    face_vertices: NDArrayInt  # (nf, 2), oriented counterclockwise w.r.t. owner
    face_owner: NDArrayInt  # (nf,)
    face_owner_local: NDArrayInt  # (nf,)
    face_neighbor: NDArrayInt  # (nf,), -1 on boundary faces
    face_neighbor_local: NDArrayInt  # (nf,), -1 on boundary faces
    face_multiplicity: NDArrayInt  # (nf,), number of triangles sharing the face
    face_normal: NDArrayFloat  # (nf, 2)
    face_length: NDArrayFloat  # (nf,)
    face_kind: NDArrayInt  # (nf,), FaceKind values
    level: int = 0

    @classmethod
    def from_arrays(
        cls,
        vertices: NDArrayFloat,
        triangles: NDArrayInt,
        boundary_tags: Mapping[tuple[int, int], FaceKind],
        level: int = 0,
    ) -> Mesh:
        """Builds the face structure of a triangulation.

        Args:
            vertices:
                Vertex coordinates with shape (nv, 2).
            triangles:
                Vertex indices with shape (nt, 3).
            boundary_tags:
                Tag per boundary edge, keyed by the vertex pair in any order.
                Boundary faces without a tag get FaceKind.UNTAGGED.
            level:
                Refinement depth of the mesh.
        """
        vertices = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)
        triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        nt = len(triangles)

        # Edge opposite local vertex i runs from vertex i+1 to vertex i+2.
        local_edges = np.stack(
            [triangles[:, [(i + 1) % 3, (i + 2) % 3]] for i in range(3)], axis=1
        ).reshape(-1, 2)
        keys = np.sort(local_edges, axis=1)
        unique_keys, inverse, counts = np.unique(
            keys, axis=0, return_inverse=True, return_counts=True
        )
        inverse = inverse.reshape(-1)
        nf = len(unique_keys)

        order = np.argsort(inverse, kind="stable")
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        owner_occurrence = order[starts]
        has_neighbor = counts >= 2
        neighbor_occurrence = np.full(nf, -1, dtype=np.int64)
        neighbor_occurrence[has_neighbor] = order[starts[has_neighbor] + 1]

        face_vertices = local_edges[owner_occurrence]
        tangent = vertices[face_vertices[:, 1]] - vertices[face_vertices[:, 0]]
        face_length = np.linalg.norm(tangent, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            face_normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1) / (
                face_length[:, None]
            )

        face_kind = np.full(nf, int(FaceKind.INTERIOR), dtype=np.int64)
        normalized_tags = {
            (min(a, b), max(a, b)): FaceKind(kind)
            for (a, b), kind in boundary_tags.items()
        }
        for face_id in np.flatnonzero(~has_neighbor):
            a, b = (int(v) for v in unique_keys[face_id])
            face_kind[face_id] = int(normalized_tags.get((a, b), FaceKind.UNTAGGED))

        neighbor = np.where(has_neighbor, neighbor_occurrence // 3, -1)
        neighbor_local = np.where(has_neighbor, neighbor_occurrence % 3, -1)
        return cls(
            vertices=_read_only(vertices),
            triangles=_read_only(triangles),
            triangle_faces=_read_only(inverse.reshape(nt, 3).astype(np.int64)),
            face_vertices=_read_only(face_vertices),
            face_owner=_read_only(owner_occurrence // 3),
            face_owner_local=_read_only(owner_occurrence % 3),
            face_neighbor=_read_only(neighbor.astype(np.int64)),
            face_neighbor_local=_read_only(neighbor_local.astype(np.int64)),
            face_multiplicity=_read_only(counts.astype(np.int64)),
            face_normal=_read_only(face_normal),
            face_length=_read_only(face_length),
            face_kind=_read_only(face_kind),
            level=level,
        )

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def num_faces(self) -> int:
        return len(self.face_owner)

    @property
    def boundary_mask(self) -> NDArrayBool:
        return self.face_neighbor < 0

    @property
    def boundary_tags(self) -> dict[int, FaceKind]:
        """Tag per boundary face id."""
        return {
            int(face_id): FaceKind(int(self.face_kind[face_id]))
            for face_id in np.flatnonzero(self.boundary_mask)
        }

    def faces_of_kind(self, *kinds: FaceKind) -> NDArrayInt:
        return np.flatnonzero(np.isin(self.face_kind, [int(k) for k in kinds]))

    def face(self, face_id: int) -> Face:
        neighbor = int(self.face_neighbor[face_id])
        a, b = self.face_vertices[face_id]
        nx, ny = self.face_normal[face_id]
        return Face(
            id=face_id,
            endpoints=(int(a), int(b)),
            owner=int(self.face_owner[face_id]),
            neighbor=None if neighbor < 0 else neighbor,
            normal=(float(nx), float(ny)),
            length=float(self.face_length[face_id]),
            kind=FaceKind(int(self.face_kind[face_id])),
        )

    @property
    def signed_areas(self) -> NDArrayFloat:
        p0, p1, p2 = (self.vertices[self.triangles[:, i]] for i in range(3))
        e1, e2 = p1 - p0, p2 - p0
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @property
    def areas(self) -> NDArrayFloat:
        return np.abs(self.signed_areas)

    @property
    def edge_lengths(self) -> NDArrayFloat:
        """Length of local face i of every triangle, shape (nt, 3)."""
        return np.asarray(self.face_length[self.triangle_faces])

    @property
    def diameters(self) -> NDArrayFloat:
        return np.asarray(self.edge_lengths.max(axis=1))

    @property
    def face_midpoints(self) -> NDArrayFloat:
        return np.asarray(self.vertices[self.face_vertices].mean(axis=1))

    @property
    def centroids(self) -> NDArrayFloat:
        return np.asarray(self.vertices[self.triangles].mean(axis=1))

    @property
    def jacobians(self) -> NDArrayFloat:
        """Affine map Jacobians with columns v1 - v0 and v2 - v0, shape (nt, 2, 2)."""
        corners = self.vertices[self.triangles]
        return np.stack(
            [corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0]], axis=2
        )

    def map_to_elements(self, barycentric: NDArrayFloat) -> NDArrayFloat:
        """Physical points of barycentric coordinates (nq, 3), shape (nt, nq, 2)."""
        return np.asarray(
            np.einsum("qk,tkd->tqd", barycentric, self.vertices[self.triangles])
        )

    def map_to_faces(self, params: NDArrayFloat) -> NDArrayFloat:
        """Physical points of face parameters (nq,) in [0, 1], shape (nf, nq, 2)."""
        start = self.vertices[self.face_vertices[:, 0]][:, None, :]
        end = self.vertices[self.face_vertices[:, 1]][:, None, :]
        return np.asarray(start + params[None, :, None] * (end - start))

    def with_face_kinds(self, face_kind: NDArrayInt) -> Mesh:
        return dataclasses.replace(
            self, face_kind=_read_only(np.asarray(face_kind, dtype=np.int64))
        )


def mesh_size(m: Mesh) -> float:
    """Maximum element diameter, i.e. the longest edge of the mesh."""
    return float(m.diameters.max())


def shape_ratios(m: Mesh) -> NDArrayFloat:
    """Circumradius over inradius for every triangle.

    Equals 2 for the equilateral triangle and grows as triangles degenerate.
    """
    lengths = m.edge_lengths
    area = m.areas
    circumradius = lengths.prod(axis=1) / (4.0 * area)
    inradius = area / (0.5 * lengths.sum(axis=1))
    return np.asarray(circumradius / inradius)


def _read_only(array: np.ndarray) -> np.ndarray:  # type: ignore[type-arg]
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array
