#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from typing import Union

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as sparse_linalg

from dcr_fem._env import Env
from dcr_fem._linalg.gram import GramMatrix
from dcr_fem.errors import (
    IndefiniteGramError,
    NumericalError,
    RankDeficientGramError,
    SingularSystemError,
)
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)

MatrixLike = Union[GramMatrix, sparse.spmatrix, NDArrayFloat]

# Relative tolerance for negative values of r^T M^-1 r caused by round-off.
_NEGATIVE_TOL = 1e-12

# Lanczos settings for the sparse eigenvalue paths. maxiter counts restarts.
EIGSH_TOL = 1e-10
EIGSH_MAXITER = 500
EIGSH_NCV = 32


def dual_norm(r: NDArrayFloat, M: MatrixLike) -> float:
    """Dual norm sup_v |r.v| / |v|_M = sqrt(r^T M^-1 r).

    Raises:
        RankDeficientGramError: If M is singular.
        IndefiniteGramError: If r^T M^-1 r is clearly negative.
    """
    r = np.asarray(r, dtype=np.float64)
    if not np.any(r):
        return 0.0
    lu = _factorize(M)
    x = lu.solve(r)
    value = float(r @ x)
    if value < -_NEGATIVE_TOL * float(np.linalg.norm(r) * np.linalg.norm(x)):
        raise IndefiniteGramError(
            f"Gram matrix is indefinite: r^T M^-1 r = {value:.3e} < 0."
        )
    return float(np.sqrt(max(value, 0.0)))


def inf_sup(A: MatrixLike, M_U: MatrixLike, M_V: MatrixLike) -> float:
    """Discrete inf-sup constant inf_w sup_v v^T A w / (|w|_U |v|_V).

    A[i, j] pairs trial function j with test function i. The constant is the
    smallest singular value of L_V^-1 A L_U^-T with Cholesky factors M = L L^T.

    Large problems run Lanczos on the generalized pencil M_U w = mu N w with
    N = A^T M_V^-1 A and return 1 / sqrt(mu_max). Only solves with A and M_V are
    needed, so no sparse Cholesky factor of M_U is formed.

    Raises:
        SingularSystemError: If A cannot be factorized.
        IndefiniteGramError: If a Gram matrix is not positive definite.
        NumericalError: If Lanczos does not converge.
    """
    a = _matrix(A)
    n = a.shape[1]
    if n <= Env.DCR_FEM_DENSE_MAX_NDOF.value:
        l_u = _cholesky(_dense(M_U))
        l_v = _cholesky(_dense(M_V))
        whitened = linalg.solve_triangular(l_v, _dense(a), lower=True)
        whitened = linalg.solve_triangular(l_u, whitened.T, lower=True).T
        return float(linalg.svdvals(whitened).min())

    a_csc = sparse.csc_matrix(a)
    try:
        a_lu = sparse_linalg.splu(a_csc)
    except RuntimeError as ex:
        raise SingularSystemError(
            f"Sparse LU factorization of the {n}x{n} system matrix failed.",
            pivot_info=str(ex),
        ) from None
    m_v = sparse.csc_matrix(_matrix(M_V))
    m_v_lu = _factorize(m_v)

    def normal_matvec(x: NDArrayFloat) -> NDArrayFloat:
        return np.asarray(a_csc.T @ m_v_lu.solve(a_csc @ x))

    def inverse_matvec(x: NDArrayFloat) -> NDArrayFloat:
        # (A^T M_V^-1 A)^-1 = A^-1 M_V A^-T
        return np.asarray(a_lu.solve(m_v @ a_lu.solve(x, trans="T")))

    normal = sparse_linalg.LinearOperator((n, n), matvec=normal_matvec)
    normal_inv = sparse_linalg.LinearOperator((n, n), matvec=inverse_matvec)
    values = _eigsh(
        sparse.csc_matrix(_matrix(M_U)),
        M=normal,
        Minv=normal_inv,
        which="LA",
        what="inf-sup constant",
    )
    mu = float(values[0])
    if not mu > 0.0:
        raise IndefiniteGramError(
            f"Inf-sup pencil has a non-positive largest eigenvalue {mu:.3e}."
        )
    return float(1.0 / np.sqrt(mu))


def min_sym_eig(A: MatrixLike, M: MatrixLike) -> float:
    """Smallest eigenvalue of the symmetric part of A relative to M.

    The value is the algebraic minimum, also when the symmetric part is
    indefinite. Large problems use Lanczos in M-inner product.

    Raises:
        IndefiniteGramError: If M is not positive definite.
        NumericalError: If Lanczos does not converge.
    """
    a = _matrix(A)
    sym = 0.5 * (a + a.T)
    n = a.shape[0]
    if n <= Env.DCR_FEM_DENSE_MAX_NDOF.value:
        try:
            values = linalg.eigh(
                _dense(sym), _dense(M), subset_by_index=[0, 0], eigvals_only=True
            )
        except linalg.LinAlgError as ex:
            raise IndefiniteGramError(
                f"Generalized eigenproblem failed, the Gram matrix is not positive "
                f"definite: {ex}"
            ) from None
        return float(values[0])
    m = sparse.csc_matrix(_matrix(M))
    m_lu = _factorize(m)
    m_inv = sparse_linalg.LinearOperator(
        (n, n), matvec=lambda x: np.asarray(m_lu.solve(np.asarray(x)))
    )
    values = _eigsh(
        sparse.csc_matrix(sym),
        M=m,
        Minv=m_inv,
        which="SA",
        what="smallest eigenvalue of the symmetric part",
    )
    return float(values[0])


def _eigsh(
    matrix: sparse.spmatrix | sparse_linalg.LinearOperator,
    M: sparse.spmatrix | sparse_linalg.LinearOperator,
    Minv: sparse_linalg.LinearOperator,
    which: str,
    what: str,
) -> NDArrayFloat:
    n = matrix.shape[0]
    try:
        values = np.asarray(
            sparse_linalg.eigsh(
                matrix,
                k=1,
                M=M,
                Minv=Minv,
                which=which,
                ncv=min(n, EIGSH_NCV),
                maxiter=EIGSH_MAXITER,
                tol=EIGSH_TOL,
                return_eigenvectors=False,
            )
        )
    except sparse_linalg.ArpackNoConvergence as ex:
        raise NumericalError(
            f"Lanczos iteration for the {what} did not converge within "
            f"{EIGSH_MAXITER} restarts on {n} unknowns: {ex}"
        ) from None
    logger.debug(
        f"Lanczos for the {what} on {n} unknowns converged to {values[0]:.6e}."
    )
    return values


def _matrix(M: MatrixLike) -> sparse.spmatrix | NDArrayFloat:
    if isinstance(M, GramMatrix):
        return M.matrix
    return M


def _dense(M: MatrixLike) -> NDArrayFloat:
    matrix = _matrix(M)
    if sparse.issparse(matrix):
        return np.asarray(matrix.toarray())
    return np.asarray(matrix, dtype=np.float64)


def _cholesky(M: NDArrayFloat) -> NDArrayFloat:
    try:
        return np.asarray(linalg.cholesky(M, lower=True))
    except linalg.LinAlgError as ex:
        raise IndefiniteGramError(
            f"Cholesky factorization failed, the Gram matrix is not positive "
            f"definite: {ex}"
        ) from None


def _factorize(M: MatrixLike) -> sparse_linalg.SuperLU:
    matrix = sparse.csc_matrix(_matrix(M))
    try:
        lu = sparse_linalg.splu(matrix)
    except RuntimeError as ex:
        raise RankDeficientGramError(f"Gram matrix is singular: {ex}") from None
    pivots = np.abs(lu.U.diagonal())
    if not pivots.min() > 1e3 * np.finfo(np.float64).eps * pivots.max():
        raise RankDeficientGramError(
            f"Gram matrix is numerically singular (pivot ratio "
            f"{pivots.min() / pivots.max():.3e})."
        )
    return lu
