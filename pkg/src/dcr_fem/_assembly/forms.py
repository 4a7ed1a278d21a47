#
# Copyright (c) dcr-fem authors.
# All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.
#
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping

import numpy as np
from scipy import sparse

from dcr_fem._assembly.fields import FieldSet
from dcr_fem._fespace.quadrature import QuadratureRule, face_rule, triangle_rule
from dcr_fem._mesh.mesh import FaceKind, Mesh
from dcr_fem._problems.problem import ProblemSpec
from dcr_fem.types import Field, NDArrayFloat, NDArrayInt

logger = logging.getLogger(__name__)

# Upper bound for the number of entries of one batch of local evaluations.
_BATCH_ENTRIES = 2_000_000


class VolumeTerm(Enum):
    DIFFUSION = "diffusion"  # (K grad w, grad v)
    CONVECTION = "convection"  # -(c w, grad v)
    REACTION = "reaction"  # (r w, v)
    ENERGY_REACTION = "energy_reaction"  # ((r + div(c)/2) w, v)
    MASS = "mass"  # (w, v)
    GRAD = "grad"  # (grad w, grad v)


class FaceTerm(Enum):
    CONSISTENCY = "consistency"  # -({K grad w}, [v])
    SYMMETRY = "symmetry"  # theta ({K grad v}, [w])
    PENALTY = "penalty"  # eta / h_F ([w], [v])
    UPWIND = "upwind"  # (c_up(w), [v])
    ROBIN = "robin"  # (alpha_tilde w, v)
    ABS_CONV_JUMP = "abs_conv_jump"  # 1/2 (|c.nu| [w], [v])
    ROBIN_ENERGY = "robin_energy"  # 1/2 ((2 alpha_tilde - c.nu) w, v)
    EXTENDED_FLUX = "extended_flux"  # h_F / eta ({grad w}, K {grad v})
    EXTENDED_CONVECTION = "extended_convection"  # h_F / eta (c w, c v), both traces


class DataTerm(Enum):
    NEUMANN = "neumann"  # (g1, v)
    ROBIN_DATA = "robin_data"  # (g2, v)
    NITSCHE = "nitsche"  # (eta / h_F v + theta K grad v.nu - c.nu v, g3)


@dataclass(frozen=True)
class BilinearForm:
    volume: tuple[VolumeTerm, ...] = ()
    faces: Mapping[FaceKind, tuple[FaceTerm, ...]] = field(default_factory=dict)
    theta: float = 0.0
    eta: float = 1.0


@dataclass(frozen=True)
class LinearForm:
    # Volume source. None means no volume term.
    source: Field | None = None
    faces: Mapping[FaceKind, tuple[DataTerm, ...]] = field(default_factory=dict)
    theta: float = 0.0
    eta: float = 1.0


def integrate_bilinear(
    form: BilinearForm,
    p: ProblemSpec,
    mesh: Mesh,
    trial: FieldSet,
    test: FieldSet,
    quad_degree: int,
) -> sparse.csr_matrix:
    """Assembles form(w, v) for all trial w and test v.

    Returns:
        Matrix of shape (test.ndof, trial.ndof) with entry [i, j] equal to
        form(w_j, v_i). Local contributions are accumulated in element then face
        order, so repeated calls give bitwise identical results.
    """
    rows: list[NDArrayInt] = []
    cols: list[NDArrayInt] = []
    data: list[NDArrayFloat] = []

    def add(test_dofs: NDArrayInt, trial_dofs: NDArrayInt, local: NDArrayFloat) -> None:
        r = np.broadcast_to(test_dofs[:, :, None], local.shape).ravel()
        c = np.broadcast_to(trial_dofs[:, None, :], local.shape).ravel()
        keep = (r >= 0) & (c >= 0)
        rows.append(r[keep])
        cols.append(c[keep])
        data.append(local.ravel()[keep])

    if form.volume:
        rule = triangle_rule(quad_degree)
        per_element = trial.n * test.n * rule.num_points
        for elements in _batches(np.arange(mesh.num_triangles), per_element):
            ev = _ElementBatch(mesh, elements, rule)
            w, v = ev.side(trial), ev.side(test)
            local = np.zeros((len(elements), test.n, trial.n))
            for term in form.volume:
                local += _volume_term(term, p, ev, w, v)
            add(v.dofs, w.dofs, local)

    inv_j = _inverse_jacobians(mesh)
    frule = face_rule(quad_degree)
    for kind in sorted(form.faces):
        terms = form.faces[kind]
        faces = mesh.faces_of_kind(kind)
        if not terms or len(faces) == 0:
            continue
        per_face = 4 * trial.n * test.n * frule.num_points
        for batch in _batches(faces, per_face):
            fb = _FaceBatch(mesh, batch, frule, inv_j)
            w, v = fb.side(trial), fb.side(test)
            local = np.zeros((len(batch), v.size, w.size))
            for term in terms:
                local += _face_term(term, form, p, fb, w, v)
            add(v.dofs, w.dofs, local)

    matrix = sparse.coo_matrix(
        (
            np.concatenate(data) if data else np.zeros(0),
            (
                np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64),
                np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64),
            ),
        ),
        shape=(test.ndof, trial.ndof),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


def integrate_linear(
    form: LinearForm,
    p: ProblemSpec,
    mesh: Mesh,
    test: FieldSet,
    quad_degree: int,
) -> NDArrayFloat:
    """Assembles form(v) for all test functions v, shape (test.ndof,)."""
    vector = np.zeros(test.ndof)

    def add(test_dofs: NDArrayInt, local: NDArrayFloat) -> None:
        keep = test_dofs >= 0
        vector[:] += np.bincount(
            test_dofs[keep], weights=local[keep], minlength=test.ndof
        )

    if form.source is not None:
        rule = triangle_rule(quad_degree)
        batches = _batches(np.arange(mesh.num_triangles), test.n * rule.num_points)
        for elements in batches:
            ev = _ElementBatch(mesh, elements, rule)
            v = ev.side(test)
            source = form.source(ev.phys)
            add(v.dofs, np.einsum("mq,miq,mq->mi", source, v.values, ev.dx))

    inv_j = _inverse_jacobians(mesh)
    frule = face_rule(quad_degree)
    for kind in sorted(form.faces):
        terms = form.faces[kind]
        faces = mesh.faces_of_kind(kind)
        if not terms or len(faces) == 0:
            continue
        for batch in _batches(faces, 2 * test.n * frule.num_points):
            fb = _FaceBatch(mesh, batch, frule, inv_j)
            v = fb.side(test)
            local = np.zeros((len(batch), v.size))
            for term in terms:
                local += _data_term(term, form, p, fb, v)
            add(v.dofs, local)
    return vector


def _batches(items: NDArrayInt, entries_per_item: int) -> Iterator[NDArrayInt]:
    size = max(1, _BATCH_ENTRIES // max(1, entries_per_item))
    for start in range(0, len(items), size):
        yield items[start : start + size]


def _inverse_jacobians(mesh: Mesh) -> NDArrayFloat:
    return np.asarray(np.linalg.inv(mesh.jacobians))


class _Side:
    """Lazily evaluated traces of a field set on a batch of elements or faces.

    On faces, `inner` holds the owner trace and `outer` the neighbor trace. On
    interior faces both are padded with zeros to the combined set of owner and
    neighbor functions. On boundary faces `outer` is zero.
    """

    def __init__(
        self,
        fields: FieldSet,
        owner: NDArrayInt,
        owner_ref: NDArrayFloat,
        phys: NDArrayFloat,
        neighbor: NDArrayInt | None = None,
        neighbor_ref: NDArrayFloat | None = None,
    ) -> None:
        self.fields = fields
        self.owner = owner
        self.owner_ref = owner_ref
        self.phys = phys
        self.neighbor = neighbor
        self.neighbor_ref = neighbor_ref

    @property
    def size(self) -> int:
        return self.fields.n * (1 if self.neighbor is None else 2)

    @functools.cached_property
    def dofs(self) -> NDArrayInt:
        dofs = self.fields.dofs(self.owner)
        if self.neighbor is None:
            return dofs
        return np.concatenate([dofs, self.fields.dofs(self.neighbor)], axis=1)

    @functools.cached_property
    def _owner_values(self) -> NDArrayFloat:
        return self.fields.values(self.owner, self.owner_ref, self.phys)

    @functools.cached_property
    def _owner_grads(self) -> NDArrayFloat:
        return self.fields.grads(self.owner, self.owner_ref, self.phys)

    @functools.cached_property
    def values(self) -> NDArrayFloat:
        """Values on elements, shape (m, n, nq)."""
        return self._owner_values

    @functools.cached_property
    def grads(self) -> NDArrayFloat:
        return self._owner_grads

    @functools.cached_property
    def inner(self) -> NDArrayFloat:
        if self.neighbor is None:
            return self._owner_values
        return np.concatenate(
            [self._owner_values, np.zeros_like(self._owner_values)], axis=1
        )

    @functools.cached_property
    def outer(self) -> NDArrayFloat:
        if self.neighbor is None or self.neighbor_ref is None:
            return np.zeros_like(self._owner_values)
        values = self.fields.values(self.neighbor, self.neighbor_ref, self.phys)
        return np.concatenate([np.zeros_like(values), values], axis=1)

    @functools.cached_property
    def inner_grad(self) -> NDArrayFloat:
        if self.neighbor is None:
            return self._owner_grads
        return np.concatenate(
            [self._owner_grads, np.zeros_like(self._owner_grads)], axis=1
        )

    @functools.cached_property
    def outer_grad(self) -> NDArrayFloat:
        if self.neighbor is None or self.neighbor_ref is None:
            return np.zeros_like(self._owner_grads)
        grads = self.fields.grads(self.neighbor, self.neighbor_ref, self.phys)
        return np.concatenate([np.zeros_like(grads), grads], axis=1)

    @functools.cached_property
    def jump(self) -> NDArrayFloat:
        """Scalar jump w_K - w_K', the jump vector is jump times nu_K."""
        return self.inner - self.outer


class _ElementBatch:
    def __init__(self, mesh: Mesh, elements: NDArrayInt, rule: QuadratureRule) -> None:
        corners = mesh.vertices[mesh.triangles[elements]]
        self.elements = elements
        self.phys = np.einsum("qk,mkd->mqd", rule.points, corners)
        self.ref = np.broadcast_to(
            rule.reference_points, (len(elements), rule.num_points, 2)
        )
        self.dx = rule.weights[None, :] * (2.0 * mesh.areas[elements])[:, None]

    def side(self, fields: FieldSet) -> _Side:
        return _Side(fields, owner=self.elements, owner_ref=self.ref, phys=self.phys)


class _FaceBatch:
    def __init__(
        self,
        mesh: Mesh,
        faces: NDArrayInt,
        rule: QuadratureRule,
        inv_j: NDArrayFloat,
    ) -> None:
        start = mesh.vertices[mesh.face_vertices[faces, 0]]
        end = mesh.vertices[mesh.face_vertices[faces, 1]]
        self.phys = start[:, None, :] + rule.points[None, :, None] * (end - start)[
            :, None, :
        ]
        self.normal = np.asarray(mesh.face_normal[faces])
        self.normals = np.broadcast_to(self.normal[:, None, :], self.phys.shape)
        self.h = np.asarray(mesh.face_length[faces])
        self.ds = rule.weights[None, :] * self.h[:, None]
        self.owner = np.asarray(mesh.face_owner[faces])
        self.owner_ref = _reference_coordinates(mesh, inv_j, self.owner, self.phys)
        neighbor = np.asarray(mesh.face_neighbor[faces])
        # Batches contain faces of one kind, so either all or none are interior.
        self.interior = bool(np.all(neighbor >= 0))
        self.neighbor = neighbor if self.interior else None
        self.neighbor_ref = (
            _reference_coordinates(mesh, inv_j, neighbor, self.phys)
            if self.interior
            else None
        )
        # Weights of owner and neighbor traces in averages.
        self.avg = (0.5, 0.5) if self.interior else (1.0, 0.0)

    def side(self, fields: FieldSet) -> _Side:
        return _Side(
            fields,
            owner=self.owner,
            owner_ref=self.owner_ref,
            phys=self.phys,
            neighbor=self.neighbor,
            neighbor_ref=self.neighbor_ref,
        )

    def flux(self, K: NDArrayFloat, side: _Side) -> NDArrayFloat:
        """Average {K grad w}.nu_K with shape (f, N, nq)."""
        a0, a1 = self.avg
        grad = a0 * side.inner_grad
        if self.interior:
            grad = grad + a1 * side.outer_grad
        return np.asarray(np.einsum("fqab,fnqb,fa->fnq", K, grad, self.normal))

    def average_grad(self, side: _Side) -> NDArrayFloat:
        a0, a1 = self.avg
        if self.interior:
            return a0 * side.inner_grad + a1 * side.outer_grad
        return a0 * side.inner_grad


def _reference_coordinates(
    mesh: Mesh, inv_j: NDArrayFloat, elements: NDArrayInt, phys: NDArrayFloat
) -> NDArrayFloat:
    origin = mesh.vertices[mesh.triangles[elements, 0]]
    return np.asarray(
        np.einsum("fab,fqb->fqa", inv_j[elements], phys - origin[:, None, :])
    )


def _pair(w: NDArrayFloat, v: NDArrayFloat, weight: NDArrayFloat) -> NDArrayFloat:
    """Local matrix sum_q weight * w_j * v_i with shape (m, Nv, Nw)."""
    return np.asarray(np.einsum("mjq,miq,mq->mij", w, v, weight))


def _volume_term(
    term: VolumeTerm, p: ProblemSpec, ev: _ElementBatch, w: _Side, v: _Side
) -> NDArrayFloat:
    x = ev.phys
    if term is VolumeTerm.DIFFUSION:
        return np.asarray(
            np.einsum("mqab,mjqb,miqa,mq->mij", p.K(x), w.grads, v.grads, ev.dx)
        )
    if term is VolumeTerm.GRAD:
        return np.asarray(np.einsum("mjqa,miqa,mq->mij", w.grads, v.grads, ev.dx))
    if term is VolumeTerm.CONVECTION:
        return -np.asarray(
            np.einsum("mqa,mjq,miqa,mq->mij", p.c(x), w.values, v.grads, ev.dx)
        )
    if term is VolumeTerm.REACTION:
        return _pair(w.values, v.values, p.r(x) * ev.dx)
    if term is VolumeTerm.ENERGY_REACTION:
        return _pair(w.values, v.values, (p.r(x) + 0.5 * p.div_c(x)) * ev.dx)
    if term is VolumeTerm.MASS:
        return _pair(w.values, v.values, ev.dx)
    raise ValueError(f"Unknown volume term {term}.")


def _face_term(
    term: FaceTerm,
    form: BilinearForm,
    p: ProblemSpec,
    fb: _FaceBatch,
    w: _Side,
    v: _Side,
) -> NDArrayFloat:
    x = fb.phys
    if term is FaceTerm.CONSISTENCY:
        return -_pair(fb.flux(p.K(x), w), v.jump, fb.ds)
    if term is FaceTerm.SYMMETRY:
        return form.theta * _pair(w.jump, fb.flux(p.K(x), v), fb.ds)
    if term is FaceTerm.PENALTY:
        return _pair(w.jump, v.jump, (form.eta / fb.h)[:, None] * fb.ds)
    if term is FaceTerm.UPWIND:
        c_nu = _normal_convection(p, fb)
        # c.nu = 0 takes the neighbor branch, which is zero on boundary faces.
        upwind = np.where(c_nu[:, None, :] > 0.0, w.inner, w.outer)
        return _pair(upwind, v.jump, c_nu * fb.ds)
    if term is FaceTerm.ROBIN:
        return _pair(w.inner, v.inner, p.alpha_tilde(x) * fb.ds)
    if term is FaceTerm.ABS_CONV_JUMP:
        return _pair(w.jump, v.jump, 0.5 * np.abs(_normal_convection(p, fb)) * fb.ds)
    if term is FaceTerm.ROBIN_ENERGY:
        weight = 0.5 * (2.0 * p.alpha_tilde(x) - _normal_convection(p, fb))
        return _pair(w.inner, v.inner, weight * fb.ds)
    if term is FaceTerm.EXTENDED_FLUX:
        scale = (fb.h / form.eta)[:, None] * fb.ds
        return np.asarray(
            np.einsum(
                "fjqa,fqab,fiqb,fq->fij",
                fb.average_grad(w),
                p.K(x),
                fb.average_grad(v),
                scale,
            )
        )
    if term is FaceTerm.EXTENDED_CONVECTION:
        c = p.c(x)
        weight = (fb.h / form.eta)[:, None] * np.sum(c * c, axis=-1) * fb.ds
        return _pair(w.inner, v.inner, weight) + _pair(w.outer, v.outer, weight)
    raise ValueError(f"Unknown face term {term}.")


def _data_term(
    term: DataTerm, form: LinearForm, p: ProblemSpec, fb: _FaceBatch, v: _Side
) -> NDArrayFloat:
    x = fb.phys
    if term is DataTerm.NEUMANN:
        g1 = p.g1(x, fb.normals)
        return np.asarray(np.einsum("fq,fiq,fq->fi", g1, v.inner, fb.ds))
    if term is DataTerm.ROBIN_DATA:
        g2 = p.g2(x, fb.normals)
        return np.asarray(np.einsum("fq,fiq,fq->fi", g2, v.inner, fb.ds))
    if term is DataTerm.NITSCHE:
        test = (
            (form.eta / fb.h)[:, None, None] * v.inner
            + form.theta * fb.flux(p.K(x), v)
            - _normal_convection(p, fb)[:, None, :] * v.inner
        )
        return np.asarray(np.einsum("fq,fiq,fq->fi", p.g3(x, fb.normals), test, fb.ds))
    raise ValueError(f"Unknown data term {term}.")


def _normal_convection(p: ProblemSpec, fb: _FaceBatch) -> NDArrayFloat:
    return np.asarray(np.einsum("fqa,fa->fq", p.c(fb.phys), fb.normal))


def cr_bilinear_form() -> BilinearForm:
    return BilinearForm(
        volume=(VolumeTerm.DIFFUSION, VolumeTerm.CONVECTION, VolumeTerm.REACTION),
        faces={
            FaceKind.INTERIOR: (FaceTerm.UPWIND,),
            FaceKind.GAMMA3: (FaceTerm.UPWIND,),
            FaceKind.GAMMA2: (FaceTerm.ROBIN,),
            FaceKind.GAMMA21: (FaceTerm.ROBIN,),
            FaceKind.GAMMA22: (FaceTerm.ROBIN,),
        },
    )


def ipg_bilinear_form(theta: float, eta: float) -> BilinearForm:
    return BilinearForm(
        volume=(VolumeTerm.DIFFUSION, VolumeTerm.CONVECTION, VolumeTerm.REACTION),
        faces={
            FaceKind.INTERIOR: (
                FaceTerm.CONSISTENCY,
                FaceTerm.SYMMETRY,
                FaceTerm.PENALTY,
                FaceTerm.UPWIND,
            ),
            FaceKind.GAMMA3: (
                FaceTerm.CONSISTENCY,
                FaceTerm.SYMMETRY,
                FaceTerm.PENALTY,
            ),
            FaceKind.GAMMA21: (FaceTerm.UPWIND,),
            FaceKind.GAMMA22: (FaceTerm.ROBIN,),
        },
        theta=theta,
        eta=eta,
    )


def continuous_bilinear_form() -> BilinearForm:
    """a(w, v) of the model problem with the Robin term on all of Gamma2."""
    return BilinearForm(
        volume=(VolumeTerm.DIFFUSION, VolumeTerm.CONVECTION, VolumeTerm.REACTION),
        faces={
            FaceKind.GAMMA21: (FaceTerm.ROBIN,),
            FaceKind.GAMMA22: (FaceTerm.ROBIN,),
        },
    )


def cr_linear_form(p: ProblemSpec) -> LinearForm:
    return LinearForm(
        source=p.f,
        faces={
            FaceKind.GAMMA1: (DataTerm.NEUMANN,),
            FaceKind.GAMMA2: (DataTerm.ROBIN_DATA,),
            FaceKind.GAMMA21: (DataTerm.ROBIN_DATA,),
            FaceKind.GAMMA22: (DataTerm.ROBIN_DATA,),
        },
    )


def ipg_linear_form(p: ProblemSpec, theta: float, eta: float) -> LinearForm:
    return LinearForm(
        source=p.f,
        faces={
            FaceKind.GAMMA1: (DataTerm.NEUMANN,),
            FaceKind.GAMMA21: (DataTerm.ROBIN_DATA,),
            FaceKind.GAMMA22: (DataTerm.ROBIN_DATA,),
            FaceKind.GAMMA3: (DataTerm.NITSCHE,),
        },
        theta=theta,
        eta=eta,
    )


def continuous_linear_form(p: ProblemSpec) -> LinearForm:
    return LinearForm(
        source=p.f,
        faces={
            FaceKind.GAMMA1: (DataTerm.NEUMANN,),
            FaceKind.GAMMA21: (DataTerm.ROBIN_DATA,),
            FaceKind.GAMMA22: (DataTerm.ROBIN_DATA,),
        },
    )


def source_form(source: Field) -> LinearForm:
    """(source, v) without boundary terms."""
    return LinearForm(source=source)
