#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import logging
from dataclasses import dataclass

from dcr_fem._assembly import forms
from dcr_fem._assembly.assemble import (
    assemble,
    assemble_adjoint,
    bilinear_form,
    form_value,
    functional_value,
    linear_form,
)
from dcr_fem._assembly.fields import (
    AnalyticFunction,
    DiscreteFunction,
    FieldSet,
    difference,
)
from dcr_fem._assembly.method_config import MethodConfig
from dcr_fem._fespace.space import DiscreteSpace, FeFunction
from dcr_fem._linalg.solve import solve
from dcr_fem._mesh.mesh import Mesh
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.errors import InvalidManufacturedSolutionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualityReport:
    """Decomposition of <u - u_h, g> through the adjoint solution v_g.

    With e = u - u_h and eps = v_g - v_gh:
    term1 = a_h(e, eps), term2 = -[a_h(e, v_g) - <e, g>],
    term3 = -[a_h(u, eps) - l_h(eps)] and
    term4 = (a_h - a)(u, v_g) - (l_h - l)(v_g).
    """

    term1: float
    term2: float
    term3: float
    term4: float
    pairing: float
    reconstruction_gap: float
    # (a - a_h)(u, v_g) on its own.
    form_difference: float

    @property
    def terms(self) -> tuple[float, float, float, float]:
        return self.term1, self.term2, self.term3, self.term4

    @property
    def relative_gap(self) -> float:
        scale = abs(self.pairing) + sum(abs(t) for t in self.terms)
        return self.reconstruction_gap / scale if scale > 0 else 0.0


def aubin_nitsche(
    p: ProblemSpec,
    m: Mesh,
    s: DiscreteSpace,
    cfg: MethodConfig,
    u_h: FeFunction | None = None,
    v_gh: FeFunction | None = None,
) -> DualityReport:
    """Evaluates the four terms of the duality argument.

    Args:
        p:
            Problem with exact primal solution, exact adjoint solution and adjoint
            source.
        u_h, v_gh:
            Discrete primal and adjoint solutions. Computed if not given.
    """
    if p.exact is None or p.adjoint_exact is None or p.adjoint_source is None:
        raise InvalidManufacturedSolutionError(
            f"Problem '{p.name}' needs exact primal and adjoint solutions."
        )
    if u_h is None:
        u_h = FeFunction(space=s, coefficients=solve(assemble(p, m, s, cfg)))
    if v_gh is None:
        v_gh = FeFunction(space=s, coefficients=solve(assemble_adjoint(p, m, s, cfg)))

    degree = s.quad_degree
    a_h = bilinear_form(cfg)
    a = forms.continuous_bilinear_form()
    l_h = linear_form(p, cfg)
    ell = forms.continuous_linear_form(p)
    g = forms.source_form(p.adjoint_source)

    u = AnalyticFunction(p.exact.u, p.exact.grad_u)
    v_g = AnalyticFunction(p.adjoint_exact.u, p.adjoint_exact.grad_u)
    e = difference(u, DiscreteFunction(u_h))
    eps = difference(v_g, DiscreteFunction(v_gh))

    def bilinear(form: forms.BilinearForm, w: FieldSet, v: FieldSet) -> float:
        return form_value(form, p, m, w, v, degree)

    def linear(form: forms.LinearForm, v: FieldSet) -> float:
        return functional_value(form, p, m, v, degree)

    pairing = linear(g, e)
    a_h_u_vg = bilinear(a_h, u, v_g)
    a_u_vg = bilinear(a, u, v_g)
    term1 = bilinear(a_h, e, eps)
    term2 = -(bilinear(a_h, e, v_g) - pairing)
    term3 = -(bilinear(a_h, u, eps) - linear(l_h, eps))
    term4 = (a_h_u_vg - a_u_vg) - (linear(l_h, v_g) - linear(ell, v_g))
    report = DualityReport(
        term1=term1,
        term2=term2,
        term3=term3,
        term4=term4,
        pairing=pairing,
        reconstruction_gap=abs(pairing - (term1 + term2 + term3 + term4)),
        form_difference=a_u_vg - a_h_u_vg,
    )
    logger.debug(
        f"Duality terms of {cfg.describe()}: {report.terms}, pairing "
        f"{pairing:.6e}, gap {report.reconstruction_gap:.3e}."
    )
    return report
