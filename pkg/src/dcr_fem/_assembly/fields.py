#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
"""Functions that the form kernels can evaluate on elements.

A field set is a group of n functions per element, either the local basis
functions of a discrete space or a single function (n = 1) like an exact
solution, a discrete solution or a linear combination of those. Form kernels
evaluate trial and test field sets at the same physical points, so one kernel
produces matrices, residual vectors and scalar form values.
"""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from dcr_fem._fespace.space import DiscreteSpace, FeFunction
from dcr_fem.errors import InvalidArgumentError
from dcr_fem.types import Field, NDArrayFloat, NDArrayInt


class FieldSet(Protocol):
    @property
    def n(self) -> int:
        """Number of functions per element."""
        ...

    @property
    def ndof(self) -> int:
        """Number of global functions, the size of the assembled dimension."""
        ...

    def dofs(self, elements: NDArrayInt) -> NDArrayInt:
        """Global indices with shape (m, n). Negative entries are dropped."""
        ...

    def values(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        """Values with shape (m, n, nq).

        Args:
            elements:
                Triangle indices with shape (m,).
            ref:
                Reference coordinates with shape (m, nq, 2).
            phys:
                Physical coordinates with shape (m, nq, 2).
        """
        ...

    def grads(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        """Physical gradients with shape (m, n, nq, 2)."""
        ...


class BasisFunctions:
    def __init__(self, space: DiscreteSpace) -> None:
        self.space = space

    @property
    def n(self) -> int:
        return self.space.num_local

    @property
    def ndof(self) -> int:
        return self.space.ndof

    def dofs(self, elements: NDArrayInt) -> NDArrayInt:
        return np.asarray(self.space.element_dofs[elements])

    def values(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        m, nq = ref.shape[:2]
        values = self.space.basis.values(ref.reshape(-1, 2))
        return np.asarray(values.reshape(self.n, m, nq).transpose(1, 0, 2))

    def grads(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        m, nq = ref.shape[:2]
        ref_grads = self.space.basis.gradients(ref.reshape(-1, 2))
        ref_grads = ref_grads.reshape(self.n, m, nq, 2).transpose(1, 0, 2, 3)
        inv_jt = self.space.inverse_jacobians_t[elements]
        return np.asarray(np.einsum("mab,mnqb->mnqa", inv_jt, ref_grads))


class AnalyticFunction:
    """A function given by callables, e.g. a manufactured solution."""

    def __init__(self, u: Field, grad: Field | None = None) -> None:
        self.u = u
        self.grad = grad

    @property
    def n(self) -> int:
        return 1

    @property
    def ndof(self) -> int:
        return 1

    def dofs(self, elements: NDArrayInt) -> NDArrayInt:
        return np.zeros((len(elements), 1), dtype=np.int64)

    def values(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        return np.asarray(self.u(phys), dtype=np.float64)[:, None, :]

    def grads(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        if self.grad is None:
            raise InvalidArgumentError(
                "The form needs gradients but the analytic function has none."
            )
        return np.asarray(self.grad(phys), dtype=np.float64)[:, None, :, :]


class DiscreteFunction:
    """A single finite element function, e.g. a discrete solution."""

    def __init__(self, fn: FeFunction) -> None:
        self.fn = fn
        self._basis = BasisFunctions(fn.space)
        self._local = fn.local_coefficients()

    @property
    def n(self) -> int:
        return 1

    @property
    def ndof(self) -> int:
        return 1

    def dofs(self, elements: NDArrayInt) -> NDArrayInt:
        return np.zeros((len(elements), 1), dtype=np.int64)

    def values(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        basis = self._basis.values(elements, ref, phys)
        return np.einsum("mn,mnq->mq", self._local[elements], basis)[:, None, :]

    def grads(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        basis = self._basis.grads(elements, ref, phys)
        return np.einsum("mn,mnqd->mqd", self._local[elements], basis)[:, None]


class Combination:
    """Linear combination of single functions, e.g. the error u - u_h."""

    def __init__(self, terms: Sequence[tuple[float, FieldSet]]) -> None:
        for _, term in terms:
            if term.n != 1:
                raise InvalidArgumentError(
                    f"Combinations need single functions, got a set of {term.n}."
                )
        self.terms = list(terms)

    @property
    def n(self) -> int:
        return 1

    @property
    def ndof(self) -> int:
        return 1

    def dofs(self, elements: NDArrayInt) -> NDArrayInt:
        return np.zeros((len(elements), 1), dtype=np.int64)

    def values(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        return np.asarray(
            sum(coef * term.values(elements, ref, phys) for coef, term in self.terms)
        )

    def grads(
        self, elements: NDArrayInt, ref: NDArrayFloat, phys: NDArrayFloat
    ) -> NDArrayFloat:
        return np.asarray(
            sum(coef * term.grads(elements, ref, phys) for coef, term in self.terms)
        )


def difference(first: FieldSet, second: FieldSet) -> Combination:
    return Combination([(1.0, first), (-1.0, second)])
