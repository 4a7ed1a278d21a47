#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import math
from typing import Optional, Sequence


def rates(rows: Sequence[tuple[float, Optional[float]]]) -> list[Optional[float]]:
    """Observed convergence rates between consecutive (h, value) rows.

    rate_i = log(value_i / value_(i+1)) / log(h_i / h_(i+1)). Rates involving a
    missing, zero or negative value are undefined and returned as None.
    """
    result: list[Optional[float]] = []
    for (h0, v0), (h1, v1) in zip(rows[:-1], rows[1:]):
        if v0 is None or v1 is None or not v0 > 0 or not v1 > 0 or h0 == h1:
            result.append(None)
            continue
        result.append(math.log(v0 / v1) / math.log(h0 / h1))
    return result
