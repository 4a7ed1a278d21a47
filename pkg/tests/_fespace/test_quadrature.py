#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from math import factorial

import numpy as np
import pytest

from dcr_fem._fespace.quadrature import (
    MAX_QUADRATURE_DEGREE,
    face_rule,
    triangle_rule,
)
from dcr_fem.errors import UnsupportedDegreeError


def _monomial_integral(a: int, b: int) -> float:
    # Integral of s^a t^b over the reference triangle.
    return factorial(a) * factorial(b) / factorial(a + b + 2)


@pytest.mark.parametrize("degree", range(MAX_QUADRATURE_DEGREE + 1))
def test_triangle_rule(degree: int) -> None:
    rule = triangle_rule(degree)
    assert rule.weights.sum() == pytest.approx(0.5, abs=1e-14)
    np.testing.assert_allclose(rule.points.sum(axis=1), 1.0, atol=1e-14)
    s, t = rule.reference_points.T
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            assert rule.weights @ (s**a * t**b) == pytest.approx(
                _monomial_integral(a, b), rel=1e-12, abs=1e-15
            )


@pytest.mark.parametrize("degree", range(MAX_QUADRATURE_DEGREE + 1))
def test_face_rule(degree: int) -> None:
    rule = face_rule(degree)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert ((rule.points > 0) & (rule.points < 1)).all()
    for a in range(degree + 1):
        assert rule.weights @ rule.points**a == pytest.approx(1 / (a + 1), rel=1e-12)


def test_triangle_rule__points_inside() -> None:
    rule = triangle_rule(6)
    assert (rule.points > 0).all()
    assert rule.num_points == len(rule.weights)


@pytest.mark.parametrize("degree", [-1, MAX_QUADRATURE_DEGREE + 1])
def test_rules__unsupported_degree(degree: int) -> None:
    with pytest.raises(UnsupportedDegreeError):
        triangle_rule(degree)
    with pytest.raises(UnsupportedDegreeError):
        face_rule(degree)
