#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
import time

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from dcr_fem._assembly.assemble import SparseSystem
from dcr_fem.errors import SingularSystemError
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)

# Relative residual above which a solution is reported as inaccurate.
RESIDUAL_TOL = 1e-10


def solve(sys: SparseSystem) -> NDArrayFloat:
    """Solves the system with a sparse LU factorization with partial pivoting.

    Raises:
        SingularSystemError: If the matrix is not square or numerically singular.
    """
    return solve_matrix(sys.matrix, sys.rhs)


def solve_matrix(matrix: sparse.spmatrix, rhs: NDArrayFloat) -> NDArrayFloat:
    n_rows, n_cols = matrix.shape
    if n_rows != n_cols:
        raise SingularSystemError(
            f"Cannot solve a non-square system of shape {matrix.shape}."
        )
    if n_rows == 0:
        return np.zeros(0)
    start = time.perf_counter()
    try:
        lu = sparse_linalg.splu(sparse.csc_matrix(matrix))
    except RuntimeError as ex:
        # SuperLU reports exactly singular matrices with the failing column.
        raise SingularSystemError(
            f"Sparse LU factorization failed for a {n_rows}x{n_cols} system.",
            pivot_info=str(ex),
        ) from None
    pivots = np.abs(lu.U.diagonal())
    smallest = int(np.argmin(pivots))
    pivot_info = (
        f"smallest pivot {pivots[smallest]:.3e} at column {smallest}, "
        f"largest pivot {pivots.max():.3e}"
    )
    if not pivots[smallest] > np.finfo(np.float64).eps * pivots.max():
        raise SingularSystemError(
            f"Matrix of size {n_rows} is numerically singular ({pivot_info}).",
            pivot_info=pivot_info,
        )
    solution = np.asarray(lu.solve(np.asarray(rhs, dtype=np.float64)))
    if not np.all(np.isfinite(solution)):
        raise SingularSystemError(
            "Sparse LU produced a non-finite solution.", pivot_info=pivot_info
        )

    residual = float(np.linalg.norm(matrix @ solution - rhs))
    scale = float(sparse_linalg.norm(matrix)) * float(
        np.linalg.norm(solution)
    ) + float(np.linalg.norm(rhs))
    if residual > RESIDUAL_TOL * scale:
        logger.warning(
            f"Large relative residual {residual / scale:.3e} in sparse solve "
            f"({pivot_info})."
        )
    logger.debug(
        f"Solved system with {n_rows} unknowns in "
        f"{time.perf_counter() - start:.3f}s ({pivot_info})."
    )
    return solution
