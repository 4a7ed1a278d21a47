#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from dcr_fem.errors import UnsupportedDegreeError
from dcr_fem.types import NDArrayFloat

MAX_QUADRATURE_DEGREE = 10


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Quadrature on the reference triangle or the reference face.

    Triangle rules store barycentric coordinates (nq, 3) with respect to the
    vertices (0, 0), (1, 0), (0, 1) and weights summing to 1/2. Face rules store
    parameters in [0, 1] with shape (nq,) and weights summing to 1.
    """

    points: NDArrayFloat
    weights: NDArrayFloat
    degree: int

    @property
    def num_points(self) -> int:
        return len(self.weights)

    @property
    def reference_points(self) -> NDArrayFloat:
        """Cartesian reference coordinates (s, t) of a triangle rule."""
        return np.asarray(self.points[:, 1:])


def _num_gauss_points(degree: int) -> int:
    if degree < 0 or degree > MAX_QUADRATURE_DEGREE:
        raise UnsupportedDegreeError(
            f"Quadrature degree must be in [0, {MAX_QUADRATURE_DEGREE}], got {degree}."
        )
    return max(1, (degree + 2) // 2)


@functools.lru_cache(maxsize=None)
def triangle_rule(degree: int) -> QuadratureRule:
    """Collapsed Gauss rule exact for polynomials up to the given degree.

    The square [0, 1]^2 is mapped onto the triangle by s = a, t = (1 - a) b. The
    Jacobian factor 1 - a is absorbed by a Gauss-Jacobi rule in a.
    """
    n = _num_gauss_points(degree)
    xa, wa = roots_jacobi(n, 1.0, 0.0)
    xb, wb = roots_legendre(n)
    a = 0.5 * (1.0 + xa)
    b = 0.5 * (1.0 + xb)
    s = np.repeat(a, n)
    t = (1.0 - s) * np.tile(b, n)
    weights = np.outer(wa / 4.0, wb / 2.0).ravel()
    points = np.stack([1.0 - s - t, s, t], axis=1)
    return QuadratureRule(points=points, weights=weights, degree=degree)


@functools.lru_cache(maxsize=None)
def face_rule(degree: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1] exact up to the given degree."""
    n = _num_gauss_points(degree)
    x, w = roots_legendre(n)
    return QuadratureRule(points=0.5 * (1.0 + x), weights=0.5 * w, degree=degree)
