#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
"""Plain text mesh format.

Line 1 holds ``nv nt nb``, followed by nv lines ``x y``, nt lines ``i j k`` with
0-based vertex indices and nb lines ``i j tag`` with tag in {1, 2, 21, 22, 3}.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem.errors import MeshFormatError
from dcr_fem.types import PathLike

logger = logging.getLogger(__name__)

_FILE_TAGS = {
    1: FaceKind.GAMMA1,
    2: FaceKind.GAMMA2,
    21: FaceKind.GAMMA21,
    22: FaceKind.GAMMA22,
    3: FaceKind.GAMMA3,
}


def read_mesh(path: PathLike) -> Mesh:
    path = Path(path)
    if not path.is_file():
        raise MeshFormatError(f"Mesh file '{path}' does not exist!")
    lines = [line.split() for line in path.read_text(encoding="utf-8").splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise MeshFormatError(f"Mesh file '{path}' is empty.")

    nv, nt, nb = _parse_ints(lines[0], 3, path, 1)
    expected = 1 + nv + nt + nb
    if len(lines) != expected:
        raise MeshFormatError(
            f"Mesh file '{path}' has {len(lines)} non-empty lines, expected "
            f"{expected} for nv={nv} nt={nt} nb={nb}."
        )

    vertices = np.array(
        [_parse_floats(lines[1 + i], path, 2 + i) for i in range(nv)],
        dtype=np.float64,
    ).reshape(-1, 2)
    offset = 1 + nv
    triangles = np.array(
        [_parse_ints(lines[offset + i], 3, path, offset + i + 1) for i in range(nt)],
        dtype=np.int64,
    ).reshape(-1, 3)
    if triangles.size and (triangles.min() < 0 or triangles.max() >= nv):
        raise MeshFormatError(f"Mesh file '{path}' references unknown vertices.")

    offset += nt
    boundary_tags: dict[tuple[int, int], FaceKind] = {}
    for i in range(nb):
        a, b, tag = _parse_ints(lines[offset + i], 3, path, offset + i + 1)
        if tag not in _FILE_TAGS:
            raise MeshFormatError(
                f"Invalid boundary tag {tag} in '{path}' line {offset + i + 1}, "
                f"valid tags are {sorted(_FILE_TAGS)}."
            )
        boundary_tags[(a, b)] = _FILE_TAGS[tag]

    logger.debug(f"Read mesh with {nv} vertices and {nt} triangles from '{path}'.")
    return Mesh.from_arrays(vertices, triangles, boundary_tags)


def write_mesh(m: Mesh, path: PathLike) -> None:
    boundary = np.flatnonzero(m.boundary_mask)
    lines = [f"{m.num_vertices} {m.num_triangles} {len(boundary)}"]
    lines += [f"{x!r} {y!r}" for x, y in m.vertices.tolist()]
    lines += [f"{i} {j} {k}" for i, j, k in m.triangles.tolist()]
    for face_id in boundary:
        a, b = m.face_vertices[face_id]
        lines.append(f"{a} {b} {int(m.face_kind[face_id])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_ints(tokens: list[str], count: int, path: Path, line: int) -> list[int]:
    if len(tokens) != count:
        raise MeshFormatError(
            f"Expected {count} integers in '{path}' line {line}, got {tokens}."
        )
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise MeshFormatError(
            f"Expected integers in '{path}' line {line}, got {tokens}."
        ) from None


def _parse_floats(tokens: list[str], path: Path, line: int) -> list[float]:
    if len(tokens) != 2:
        raise MeshFormatError(
            f"Expected 2 coordinates in '{path}' line {line}, got {tokens}."
        )
    try:
        return [float(token) for token in tokens]
    except ValueError:
        raise MeshFormatError(
            f"Expected decimal coordinates in '{path}' line {line}, got {tokens}."
        ) from None
