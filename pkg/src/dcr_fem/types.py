#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

from pathlib import Path
from typing import Callable, Union

import numpy as np
from numpy.typing import NDArray

NDArrayFloat = NDArray[np.float64]
NDArrayInt = NDArray[np.int64]
NDArrayBool = NDArray[np.bool_]

# Fields take points of shape (..., 2) and return values of shape (...),
# (..., 2) or (..., 2, 2) depending on whether they are scalar, vector or matrix
# valued.
Field = Callable[[NDArrayFloat], NDArrayFloat]

PathLike = Union[str, Path]
