#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

from omegaconf import DictConfig

from dcr_fem._commands import common_helpers
from dcr_fem._configs import omegaconf_utils, validate
from dcr_fem._configs.config import PydanticConfig
from dcr_fem._mesh.audit import MeshViolation, verify_consistency
from dcr_fem._mesh.mesh import FaceKind, mesh_size, shape_ratios
from dcr_fem._mesh.mesh_io import read_mesh
from dcr_fem.types import PathLike

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeshInfo:
    num_vertices: int
    num_triangles: int
    num_faces: int
    tag_counts: dict[str, int]
    h: float
    max_shape_ratio: float
    violations: list[MeshViolation]


def mesh_info(mesh: PathLike) -> MeshInfo:
    """Log sizes, boundary tags and consistency violations of an ASCII mesh file.

    Args:
        mesh:
            Path to the mesh file.
    """
    config = validate.pydantic_model_validate(MeshInfoConfig, locals())
    return mesh_info_from_config(config=config)


def mesh_info_from_config(config: MeshInfoConfig) -> MeshInfo:
    path = common_helpers.get_in_path(config.mesh)
    m = read_mesh(path)
    kinds = Counter(FaceKind(kind).name for kind in m.face_kind.tolist())
    info = MeshInfo(
        num_vertices=m.num_vertices,
        num_triangles=m.num_triangles,
        num_faces=m.num_faces,
        tag_counts=dict(sorted(kinds.items())),
        h=mesh_size(m),
        max_shape_ratio=float(shape_ratios(m).max()),
        violations=verify_consistency(m),
    )
    lines = [
        f"Mesh '{path}':",
        f"    vertices:  {info.num_vertices}",
        f"    triangles: {info.num_triangles}",
        f"    faces:     {info.num_faces}",
        f"    h:         {info.h:.6g}",
        f"    max circumradius/inradius: {info.max_shape_ratio:.6g}",
        "    face kinds:",
        *(f"        {kind:<9}{count}" for kind, count in info.tag_counts.items()),
    ]
    logger.info("\n".join(lines))
    if info.violations:
        logger.warning(f"Found {len(info.violations)} consistency violations:")
        for violation in info.violations:
            logger.warning(f"    [{violation.kind}] {violation.message}")
    else:
        logger.info("The mesh is consistent.")
    return info


def mesh_info_from_dictconfig(config: DictConfig) -> MeshInfo:
    config_dict = omegaconf_utils.config_to_dict(config=config)
    info_cfg = validate.pydantic_model_validate(MeshInfoConfig, config_dict)
    return mesh_info_from_config(config=info_cfg)


class MeshInfoConfig(PydanticConfig):
    mesh: PathLike
