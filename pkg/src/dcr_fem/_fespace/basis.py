#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from dcr_fem.errors import UnsupportedDegreeError
from dcr_fem.types import NDArrayFloat

MAX_DEGREE = 4

# Gradients of the barycentric coordinates on the reference triangle with
# vertices (0, 0), (1, 0), (0, 1).
_BARYCENTRIC_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


class ReferenceBasis(ABC):
    """Shape functions on the reference triangle.

    Points are reference coordinates (s, t) with shape (nq, 2).
    """

    @property
    @abstractmethod
    def num_functions(self) -> int: ...

    @property
    @abstractmethod
    def nodes(self) -> NDArrayFloat:
        """Reference points at which the basis is nodal, shape (n, 2)."""
        ...

    @abstractmethod
    def values(self, points: NDArrayFloat) -> NDArrayFloat:
        """Shape function values with shape (n, nq)."""
        ...

    @abstractmethod
    def gradients(self, points: NDArrayFloat) -> NDArrayFloat:
        """Reference gradients with shape (n, nq, 2)."""
        ...


class CrouzeixRaviartBasis(ReferenceBasis):
    """phi_i = 1 - 2 lambda_i, equal to one at the midpoint of local face i."""

    @property
    def num_functions(self) -> int:
        return 3

    @property
    def nodes(self) -> NDArrayFloat:
        return np.array([[0.5, 0.5], [0.0, 0.5], [0.5, 0.0]])

    def values(self, points: NDArrayFloat) -> NDArrayFloat:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        s, t = points[:, 0], points[:, 1]
        barycentric = np.stack([1.0 - s - t, s, t], axis=0)
        return 1.0 - 2.0 * barycentric

    def gradients(self, points: NDArrayFloat) -> NDArrayFloat:
        nq = len(np.asarray(points).reshape(-1, 2))
        grads = -2.0 * _BARYCENTRIC_GRADIENTS
        return np.repeat(grads[:, None, :], nq, axis=1)


class LagrangeBasis(ReferenceBasis):
    """Nodal P_k basis on the principal lattice.

    Node (i/k, j/k) with i + j <= k is numbered with j in the outer and i in the
    inner loop, so for k = 1 the basis functions are the barycentric coordinates.
    """

    def __init__(self, degree: int) -> None:
        if degree < 1 or degree > MAX_DEGREE:
            raise UnsupportedDegreeError(
                f"Polynomial degree must be in [1, {MAX_DEGREE}], got {degree}."
            )
        self.degree = degree
        self._exponents = np.array(
            [(a, b) for b in range(degree + 1) for a in range(degree + 1 - b)],
            dtype=np.int64,
        )
        self._nodes = self._exponents.astype(np.float64) / degree
        vandermonde = self._monomials(self._nodes)
        # Column n holds the monomial coefficients of basis function n.
        self._coefficients = np.linalg.inv(vandermonde)

    @property
    def num_functions(self) -> int:
        return len(self._exponents)

    @property
    def nodes(self) -> NDArrayFloat:
        return self._nodes.copy()

    def values(self, points: NDArrayFloat) -> NDArrayFloat:
        monomials = self._monomials(points)
        return np.asarray((monomials @ self._coefficients).T)

    def gradients(self, points: NDArrayFloat) -> NDArrayFloat:
        ds, dt = self._monomial_derivatives(points)
        return np.stack(
            [(ds @ self._coefficients).T, (dt @ self._coefficients).T], axis=-1
        )

    def _monomials(self, points: NDArrayFloat) -> NDArrayFloat:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        a, b = self._exponents[:, 0], self._exponents[:, 1]
        return np.asarray(points[:, :1] ** a * points[:, 1:] ** b)

    def _monomial_derivatives(
        self, points: NDArrayFloat
    ) -> tuple[NDArrayFloat, NDArrayFloat]:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        s, t = points[:, :1], points[:, 1:]
        a, b = self._exponents[:, 0], self._exponents[:, 1]
        ds = a * s ** np.maximum(a - 1, 0) * t**b
        dt = b * s**a * t ** np.maximum(b - 1, 0)
        return np.asarray(ds), np.asarray(dt)
