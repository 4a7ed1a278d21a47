#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from dcr_fem._fespace.quadrature import face_rule, triangle_rule
from dcr_fem._mesh.audit import classify_boundary
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.problem import CoercivityKind, CoercivityMode, ProblemSpec
from dcr_fem.types import NDArrayFloat

logger = logging.getLogger(__name__)

AUDIT_SLACK = 1e-12
AUDIT_QUADRATURE_DEGREE = 4


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    # Point with the smallest margin and the margin itself. None if the condition
    # has no sample points, e.g. an empty boundary piece.
    worst_point: tuple[float, float] | None = None
    worst_value: float | None = None

    def describe(self) -> str:
        status = "ok" if self.passed else "FAILED"
        if self.worst_point is None or self.worst_value is None:
            return f"{self.name}: {status} (vacuous)"
        x, y = self.worst_point
        return (
            f"{self.name}: {status} (worst margin {self.worst_value:.3e} at "
            f"({x:.4f}, {y:.4f}))"
        )


@dataclass(frozen=True)
class AuditReport:
    problem: str
    mode: CoercivityMode
    results: list[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed_conditions(self) -> list[str]:
        return [result.name for result in self.results if not result.passed]

    def result(self, name: str) -> ConditionResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)


ELLIPTICITY = "K >= k0 I"
REACTION = "r + div(c)/2 >= 0"
GAMMA1_INFLOW = "nu.c <= 0 on Gamma1"
GAMMA21_OUTFLOW = "nu.c >= 0 on Gamma21"
GAMMA22_ROBIN = "alpha_tilde - nu.c/2 >= 0 on Gamma22"
GAMMA3_INFLOW = "nu.c <= 0 on Gamma3"
DIRICHLET_MEASURE = "Gamma3 has positive measure"
REACTION_LOWER_BOUND = "r + div(c)/2 >= r0"


def audit_conditions(
    p: ProblemSpec,
    m: Mesh,
    mode: CoercivityMode | None = None,
    dg: bool = False,
) -> AuditReport:
    """Checks the sign and coercivity conditions of p at quadrature points.

    Coarse GAMMA2 faces of m are split into GAMMA21 and GAMMA22 first. Every
    condition is written as margin >= 0 and passes if the smallest sampled margin
    is at least -1e-12.

    Args:
        p:
            Problem to audit.
        m:
            Mesh providing the sample points and the boundary tags.
        mode:
            Additional coercivity condition. Defaults to p.coercivity.
        dg:
            Also check the inflow condition nu.c <= 0 on Gamma3, which the
            discontinuous Galerkin analysis needs.
    """
    mode = p.coercivity if mode is None else mode
    if len(m.faces_of_kind(FaceKind.GAMMA2)):
        m = classify_boundary(m, p)

    element_points = m.map_to_elements(
        triangle_rule(AUDIT_QUADRATURE_DEGREE).points
    ).reshape(-1, 2)
    face_points = m.map_to_faces(face_rule(AUDIT_QUADRATURE_DEGREE).points)
    face_normals = np.broadcast_to(m.face_normal[:, None, :], face_points.shape)

    def on_faces(kind: FaceKind) -> tuple[NDArrayFloat, NDArrayFloat]:
        faces = m.faces_of_kind(kind)
        return face_points[faces].reshape(-1, 2), face_normals[faces].reshape(-1, 2)

    def normal_flow(kind: FaceKind) -> tuple[NDArrayFloat, NDArrayFloat]:
        points, normals = on_faces(kind)
        return points, np.sum(normals * p.c(points), axis=-1)

    reaction = p.r(element_points) + 0.5 * p.div_c(element_points)
    stiffness = np.linalg.eigvalsh(p.K(element_points))[:, 0]

    results = [
        _check(ELLIPTICITY, element_points, stiffness - p.k0),
        _check(REACTION, element_points, reaction),
    ]
    points, flow = normal_flow(FaceKind.GAMMA1)
    results.append(_check(GAMMA1_INFLOW, points, -flow))
    points, flow = normal_flow(FaceKind.GAMMA21)
    results.append(_check(GAMMA21_OUTFLOW, points, flow))
    points, flow = normal_flow(FaceKind.GAMMA22)
    results.append(
        _check(GAMMA22_ROBIN, points, p.alpha_tilde(points) - 0.5 * flow)
    )
    if dg:
        points, flow = normal_flow(FaceKind.GAMMA3)
        results.append(_check(GAMMA3_INFLOW, points, -flow))

    if mode.kind is CoercivityKind.DIRICHLET_MEASURE:
        dirichlet = m.faces_of_kind(FaceKind.GAMMA3)
        measure = float(m.face_length[dirichlet].sum())
        results.append(
            ConditionResult(
                name=DIRICHLET_MEASURE,
                passed=measure > 0.0,
                worst_point=None,
                worst_value=None,
            )
        )
    else:
        results.append(_check(REACTION_LOWER_BOUND, element_points, reaction - mode.r0))

    report = AuditReport(problem=p.name, mode=mode, results=results)
    for result in results:
        logger.debug(f"Audit of '{p.name}': {result.describe()}")
    return report


def _check(name: str, points: NDArrayFloat, margin: NDArrayFloat) -> ConditionResult:
    margin = np.asarray(margin, dtype=np.float64).reshape(-1)
    if len(margin) == 0:
        return ConditionResult(name=name, passed=True)
    worst = int(np.argmin(margin))
    return ConditionResult(
        name=name,
        passed=bool(margin[worst] >= -AUDIT_SLACK),
        worst_point=(float(points[worst, 0]), float(points[worst, 1])),
        worst_value=float(margin[worst]),
    )
