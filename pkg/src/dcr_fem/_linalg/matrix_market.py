#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from scipy import io, sparse

from dcr_fem._assembly.assemble import SparseSystem
from dcr_fem.types import PathLike

logger = logging.getLogger(__name__)


def export_system(sys: SparseSystem, matrix_path: PathLike, rhs_path: PathLike) -> None:
    """Writes matrix and right-hand side as MatrixMarket text files."""
    io.mmwrite(str(matrix_path), sparse.coo_matrix(sys.matrix), precision=17)
    io.mmwrite(str(rhs_path), sys.rhs.reshape(-1, 1), precision=17)
    logger.debug(f"Exported system to '{matrix_path}' and '{rhs_path}'.")


def import_system(matrix_path: PathLike, rhs_path: PathLike) -> SparseSystem:
    matrix = sparse.csr_matrix(io.mmread(str(matrix_path)))
    matrix.sort_indices()
    rhs = np.asarray(io.mmread(str(rhs_path)), dtype=np.float64).reshape(-1)
    return SparseSystem(matrix=matrix, rhs=rhs)


def system_paths(out_dir: Path, level: int) -> tuple[Path, Path]:
    return (
        out_dir / f"level_{level}_matrix.mtx",
        out_dir / f"level_{level}_rhs.mtx",
    )
