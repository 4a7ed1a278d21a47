#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from typing import Union

import numpy as np

from dcr_fem._mesh.mesh import Face
from dcr_fem.types import NDArrayFloat

Trace = Union[float, NDArrayFloat]


def jump_average(
    face: Face, trace_owner: Trace, trace_neighbor: Trace | None = None
) -> tuple[Trace, Trace]:
    """Jump and average of a two-sided trace at one face point.

    Scalar traces have a vector jump v_K nu_K + v_K' nu_K' and a scalar average.
    Vector traces (shape (2,)) have a scalar jump p_K.nu_K + p_K'.nu_K' and a
    vector average. On boundary faces the jump is the owner trace times nu_K and
    the average is the owner trace.

    Args:
        face:
            The face, its normal points out of the owner.
        trace_owner:
            Trace from the owner element.
        trace_neighbor:
            Trace from the neighbor element. Ignored on boundary faces.
    """
    normal = np.asarray(face.normal, dtype=np.float64)
    owner = np.asarray(trace_owner, dtype=np.float64)
    is_vector = owner.shape == (2,)
    if face.neighbor is None or trace_neighbor is None:
        if is_vector:
            return float(owner @ normal), owner
        return owner * normal, float(owner)

    neighbor = np.asarray(trace_neighbor, dtype=np.float64)
    if is_vector:
        return float((owner - neighbor) @ normal), 0.5 * (owner + neighbor)
    return (owner - neighbor) * normal, float(0.5 * (owner + neighbor))
