"""Extrinsic geometry of hypersurface charts in a space form.

Conventions: ``B_ij = <P(∂_i∂_jΦ), η>`` with ``P`` the projection onto
``T_pN``; the shape operator is stored with mixed indices, ``A = g⁻¹B``, and
``f = trace(A)/m``. Flipping ``η`` flips ``A`` and ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ambient
from .calculus import (
    ChartGrid,
    Jet2,
    MetricField,
    christoffel_from_dg,
    isothermal_anisotropy,
    jet,
    metric,
    metric_derivatives,
    partial,
)
from .errors import DegenerateFrameError, InputError, PreconditionError

FRAME_FLOOR = 1e-10
ISOTHERMAL_TOL = 1e-6


@dataclass
class ShapeFrame:
    """Per-node extrinsic data; every array may carry leading node axes."""

    g: np.ndarray
    g_inv: np.ndarray
    det_g: np.ndarray
    eta: np.ndarray
    B: np.ndarray
    A: np.ndarray
    f: np.ndarray
    lam: np.ndarray
    normA2: np.ndarray

    @property
    def dim(self) -> int:
        return self.A.shape[-1]


def _cross_normal(vectors):
    """Generalised cross product of ``N-1`` vectors in R^N (batched).

    Component ``k`` is ``det[v_1; ...; v_{N-1}; e_k]``; the result is
    Euclidean-orthogonal to every ``v_i`` and varies smoothly with them.
    """
    N = vectors.shape[-1]
    out = np.empty(vectors.shape[:-2] + (N,))
    eye = np.eye(N)
    for k in range(N):
        mat = np.concatenate(
            [vectors, np.broadcast_to(eye[k], vectors.shape[:-2] + (1, N))], axis=-2
        )
        out[..., k] = np.linalg.det(mat)
    return out


def unit_normal(jet2: Jet2, space, orientation: int = 1) -> np.ndarray:
    """Unit normal of the chart inside ``T_pN`` (model inner product).

    The raw normal is the Hodge dual of ``∂_1Φ ∧ ... ∧ ∂_mΦ`` (and ``∧ p`` for
    curved models), so its sign is continuous across a grid; ``orientation``
    multiplies it by ±1.
    """
    if orientation not in (1, -1):
        raise InputError("orientation must be +1 or -1")
    d1 = jet2.d1
    m, N = d1.shape[-2:]
    need = m + 1 if space.curvature == 0 else m + 2
    if N != need or N != space.embedding_dim:
        raise InputError(f"a {m}-dimensional chart is not a hypersurface of {space.name}")
    vecs = d1 if space.curvature == 0 else np.concatenate([d1, jet2.value[..., None, :]], axis=-2)
    w = _cross_normal(vecs)
    eta = w * space.gram  # model-orthogonal where w is Euclidean-orthogonal
    scale = np.prod(np.linalg.norm(vecs, axis=-1), axis=-1)
    nrm2 = ambient.inner(space, eta, eta)
    rel = np.sqrt(np.abs(nrm2)) / scale
    if np.any(~(rel > FRAME_FLOOR)) or np.any(~(nrm2 > 0)):
        raise DegenerateFrameError(
            f"tangent frame degenerates (rejection norm {float(np.nanmin(rel)):.3e})",
            residual=float(np.nanmin(rel)),
        )
    return orientation * eta / np.sqrt(nrm2)[..., None]


def shape_operator(jet2: Jet2, eta, space, met: MetricField = None) -> ShapeFrame:
    if met is None:
        met = metric(jet2, space)
    m = jet2.dim
    d2t = ambient.project_tangent(space, jet2.value[..., None, None, :], jet2.d2)
    B = ambient.inner(space, d2t, eta[..., None, None, :])
    B = 0.5 * (B + np.swapaxes(B, -1, -2))
    A = np.einsum("...ik,...kj->...ij", met.g_inv, B)
    f = np.trace(A, axis1=-2, axis2=-1) / m
    # eigenvalues of the symmetric similar matrix g^{-1/2} B g^{-1/2}
    w, V = np.linalg.eigh(met.g)
    g_mhalf = np.einsum("...ik,...k,...jk->...ij", V, 1.0 / np.sqrt(w), V)
    S = g_mhalf @ B @ g_mhalf
    S = 0.5 * (S + np.swapaxes(S, -1, -2))
    lam = np.linalg.eigvalsh(S)[..., ::-1]
    normA2 = np.sum(lam**2, axis=-1)
    return ShapeFrame(met.g, met.g_inv, met.det, eta, B, A, f, lam, normA2)


def frame_at(immersion, point, space, h, orientation=1, richardson=True) -> ShapeFrame:
    """Convenience: jet, normal and shape operator at one point or a batch."""
    j = jet(immersion, point, h, richardson=richardson)
    eta = unit_normal(j, space, orientation)
    return shape_operator(j, eta, space)


def stress_bienergy(frame: ShapeFrame) -> np.ndarray:
    """S₂ = −(m²/2)|H|² I + 2m A_H with ``A_H = f A`` and ``|H|² = f²``."""
    m = frame.dim
    f = frame.f[..., None, None]
    return -0.5 * m**2 * f**2 * np.eye(m) + 2.0 * m * f * frame.A


def tensor_norm2(S, met_g, met_g_inv):
    """``|S|² = trace(S Sᵗ)`` for g-self-adjoint (1,1) tensors, metric-correct."""
    return np.einsum("...ij,...jk,...kl,...li->...", S, met_g_inv, np.swapaxes(S, -1, -2), met_g, optimize=True)


def hopf_function(frame: ShapeFrame, grid: ChartGrid, richardson=False, iso_tol=ISOTHERMAL_TOL):
    """``q = <A_H ∂_z, ∂_z>`` on an isothermal chart and its CR residual.

    With ``z = u + iv`` and ``∂_z = (∂_u − i∂_v)/2`` the complex-bilinear
    contraction gives ``q = (f/4)(B_11 − B_22 − 2i B_12)``; on an isothermal
    chart ``B = λA`` this is ``(λf/4)[(A_11 − A_22) − i(A_12 + A_21)]``.
    The CR residual is ``|∂q/∂z̄| = |∂_u q + i∂_v q|/2``.

    Returns
    -------
    q : complex array over the grid
    cr : real array, NaN on non-periodic boundary layers
    """
    if frame.dim != 2:
        raise PreconditionError("the Hopf function needs a surface (m = 2)")
    aniso = isothermal_anisotropy(frame.g)
    worst = float(np.max(aniso))
    if worst > iso_tol:
        raise PreconditionError(f"chart is not isothermal (anisotropy {worst:.3e} > {iso_tol:.0e})")
    B = frame.B
    q = 0.25 * frame.f * ((B[..., 0, 0] - B[..., 1, 1]) - 2j * B[..., 0, 1])
    dre_u = partial(q.real, grid, 0, richardson)
    dim_u = partial(q.imag, grid, 0, richardson)
    dre_v = partial(q.real, grid, 1, richardson)
    dim_v = partial(q.imag, grid, 1, richardson)
    cr = 0.5 * np.hypot(dre_u - dim_v, dim_u + dre_v)
    return q, cr


@dataclass
class SurfaceFields:
    """All first-order data of a chart sampled on a grid."""

    grid: ChartGrid
    space: object
    coords: np.ndarray
    jet: Jet2
    met: MetricField
    gamma: np.ndarray
    frame: ShapeFrame
    orientation: int

    @property
    def m(self) -> int:
        return self.grid.dim

    @property
    def f(self):
        return self.frame.f

    @property
    def A(self):
        return self.frame.A


def sample_surface(immersion, space, grid: ChartGrid, orientation=1, h=None, richardson=True) -> SurfaceFields:
    """Jets, metric, Christoffels and shape frames at every node of ``grid``.

    ``h`` is the local jet step (default: the grid spacing, per axis).
    """
    coords = grid.coords()
    if h is None:
        h = grid.spacing
    j = jet(immersion, coords, h, richardson=richardson)
    res = np.max(ambient.manifold_residual(space, j.value))
    if res > space.tol:
        from .errors import GeometryError

        raise GeometryError(f"chart leaves {space.name} (residual {res:.3e})", residual=float(res))
    met = metric(j, space)
    gamma = christoffel_from_dg(metric_derivatives(j, space), met.g_inv)
    eta = unit_normal(j, space, orientation)
    frame = shape_operator(j, eta, space, met)
    return SurfaceFields(grid, space, coords, j, met, gamma, frame, orientation)
