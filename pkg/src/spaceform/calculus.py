"""Chart calculus on rectangular grids.

Two kinds of finite differences live here:

* :func:`jet` differentiates an immersion *callable* with local stencils of
  step ``h`` around arbitrary points (order 4, optional Richardson step).
* :func:`partial` / :func:`partial2` differentiate *sampled fields* on a
  :class:`ChartGrid` with the same order-4 stencils at grid spacing.
  Periodic axes wrap; on the others the outermost layers become NaN, which
  is how margins propagate through nested operators.

Field arrays keep node axes first and component axes last, e.g. a metric on
a 65x65 grid has shape ``(65, 65, 2, 2)``.

Laplacians follow the geometers' sign, ``Δf = -div grad f``; on the unit
circle ``Δ sin(ku) = k² sin(ku)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateChartError, EvaluationError, InputError

# order-4 central stencils
D1_OFFSETS = (-2, -1, 1, 2)
D1_COEFFS = (1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12)
D2_OFFSETS = (-2, -1, 0, 1, 2)
D2_COEFFS = (-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12)

DET_FLOOR = 1e-14


@dataclass(frozen=True)
class ChartGrid:
    """Rectangular grid in chart coordinates.

    Non-periodic axes include both endpoints, ``h = (hi - lo)/(n - 1)``.
    Periodic axes sample the half-open period ``[lo, hi)``, ``h = (hi - lo)/n``,
    so that wrapping by one node lands exactly on ``lo``.
    """

    ranges: tuple
    counts: tuple
    periodic: tuple = None
    margin: tuple = None

    def __post_init__(self):
        ranges = tuple((float(lo), float(hi)) for lo, hi in self.ranges)
        counts = tuple(int(n) for n in self.counts)
        m = len(ranges)
        if len(counts) != m:
            raise InputError("ranges and counts disagree on the chart dimension")
        periodic = tuple(bool(p) for p in (self.periodic or (False,) * m))
        margin = tuple(int(k) for k in (self.margin or (0,) * m))
        if len(periodic) != m or len(margin) != m:
            raise InputError("periodic/margin must have one entry per axis")
        for (lo, hi), n, per, mg in zip(ranges, counts, periodic, margin):
            if not hi > lo:
                raise InputError(f"empty chart range [{lo}, {hi}]")
            if n < 9:
                raise InputError(f"each axis needs at least 9 samples, got {n}")
            if not per and n - 2 * mg < 1:
                raise InputError("margins leave no interior nodes")
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "periodic", periodic)
        object.__setattr__(self, "margin", tuple(0 if p else k for p, k in zip(periodic, margin)))

    @property
    def dim(self) -> int:
        return len(self.ranges)

    @property
    def shape(self) -> tuple:
        return self.counts

    @property
    def spacing(self) -> tuple:
        return tuple(
            (hi - lo) / (n if per else n - 1)
            for (lo, hi), n, per in zip(self.ranges, self.counts, self.periodic)
        )

    def axes(self):
        return [
            lo + h * np.arange(n)
            for (lo, _), n, h in zip(self.ranges, self.counts, self.spacing)
        ]

    def coords(self) -> np.ndarray:
        """Node coordinates, shape ``counts + (dim,)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def interior_mask(self) -> np.ndarray:
        mask = np.ones(self.counts, dtype=bool)
        for ax, (n, k) in enumerate(zip(self.counts, self.margin)):
            if k:
                idx = [slice(None)] * self.dim
                idx[ax] = np.r_[0:k, n - k:n]
                mask[tuple(idx)] = False
        return mask

    def with_margin(self, margin) -> "ChartGrid":
        return ChartGrid(self.ranges, self.counts, self.periodic, margin)

    def refined(self) -> "ChartGrid":
        """Same ranges with the spacing halved on every axis."""
        counts = tuple(2 * n if per else 2 * n - 1 for n, per in zip(self.counts, self.periodic))
        margin = tuple(2 * k for k in self.margin)
        return ChartGrid(self.ranges, counts, self.periodic, margin)

    def summary(self) -> dict:
        return {
            "dim": self.dim,
            "ranges": [list(r) for r in self.ranges],
            "counts": list(self.counts),
            "spacing": list(self.spacing),
            "periodic": list(self.periodic),
            "margin": list(self.margin),
        }


@dataclass
class Jet2:
    """Value, first and second chart derivatives of an immersion.

    Shapes (with optional leading batch axes): ``value (..., N)``,
    ``d1 (..., m, N)``, ``d2 (..., m, m, N)``; ``d2`` is symmetric in its two
    chart indices by construction.
    """

    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    @property
    def dim(self) -> int:
        return self.d1.shape[-2]


@dataclass
class MetricField:
    g: np.ndarray
    g_inv: np.ndarray
    det: np.ndarray
    sqrt_det: np.ndarray = field(init=False)

    def __post_init__(self):
        self.sqrt_det = np.sqrt(self.det)


def _as_steps(h, m):
    h = np.broadcast_to(np.asarray(h, dtype=float), (m,))
    if np.any(h <= 0):
        raise InputError("stencil step must be positive")
    return h


def _evaluate(immersion, pts):
    vals = np.asarray(immersion(pts), dtype=float)
    bad = ~np.all(np.isfinite(vals), axis=-1)
    if np.any(bad):
        node = np.argwhere(bad)[0]
        where = pts[tuple(node)] if pts.ndim > 1 else pts
        raise EvaluationError(
            f"immersion is not finite at chart point {np.round(where, 12).tolist()}",
            node=tuple(int(i) for i in node),
        )
    return vals


def _jet_level(immersion, point, step, center):
    """Order-4 central jet at one step size.

    Sums are formed from differences such as ``Φ(h) − Φ(−h)`` and
    ``(Φ(h) − Φ₀) + (Φ(−h) − Φ₀)`` so large common parts cancel before
    scaling; this keeps the roundoff floor near ``ε|Φ|/h²``.
    """
    m = point.shape[-1]
    N = center.shape[-1]
    eye = np.eye(m)
    cache = {}

    def at(offset):
        key = tuple(np.round(offset).astype(int))
        if key not in cache:
            cache[key] = _evaluate(immersion, point + np.asarray(key) * step)
        return cache[key]

    def first(base, j):
        return (8.0 * (at(base + eye[j]) - at(base - eye[j])) - (at(base + 2 * eye[j]) - at(base - 2 * eye[j]))) / (
            12.0 * step[j]
        )

    d1 = np.empty(point.shape[:-1] + (m, N))
    d2 = np.empty(point.shape[:-1] + (m, m, N))
    for i in range(m):
        p1, m1, p2, m2 = at(eye[i]), at(-eye[i]), at(2 * eye[i]), at(-2 * eye[i])
        d1[..., i, :] = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * step[i])
        d2[..., i, i, :] = (16.0 * ((p1 - center) + (m1 - center)) - ((p2 - center) + (m2 - center))) / (
            12.0 * step[i] ** 2
        )
    for i, j in itertools.combinations(range(m), 2):
        mixed = (
            8.0 * (first(eye[i], j) - first(-eye[i], j)) - (first(2 * eye[i], j) - first(-2 * eye[i], j))
        ) / (12.0 * step[i])
        d2[..., i, j, :] = mixed
        d2[..., j, i, :] = mixed
    return d1, d2


MAX_RICHARDSON = 3


def jet(immersion, point, h, richardson=False) -> Jet2:
    """Order-4 finite-difference jet of ``immersion`` at ``point``.

    Parameters
    ----------
    immersion : callable
        Maps chart coordinates ``(..., m)`` to embedding vectors ``(..., N)``.
    point : array_like
        One point ``(m,)`` or a batch ``(..., m)``.
    h : float or sequence
        Stencil step, scalar or per axis.
    richardson : bool or int
        Number of Richardson levels (``True`` means 1). Steps ``h, 2h, 4h, ...``
        are combined in a tableau eliminating the ``h⁴, h⁶, h⁸`` error terms.
    """
    levels = int(richardson)
    if not 0 <= levels <= MAX_RICHARDSON:
        raise InputError(f"richardson levels must be in [0, {MAX_RICHARDSON}]")
    point = np.asarray(point, dtype=float)
    m = point.shape[-1]
    h = _as_steps(h, m)
    center = _evaluate(immersion, point)
    table = [_jet_level(immersion, point, h * 2.0**k, center) for k in range(levels + 1)]
    for lev in range(levels):
        fac = 2.0 ** (4 + 2 * lev)
        table = [
            tuple((fac * fine - coarse) / (fac - 1.0) for fine, coarse in zip(table[k], table[k + 1]))
            for k in range(len(table) - 1)
        ]
    d1, d2 = table[0]
    d2 = 0.5 * (d2 + np.swapaxes(d2, -2, -3))
    return Jet2(center, d1, d2)


def metric(jet2: Jet2, space) -> MetricField:
    """Induced metric ``g_ij = <∂_iΦ, ∂_jΦ>`` with inverse and determinant."""
    G = space.gram
    g = np.einsum("...ia,...ja,a->...ij", jet2.d1, jet2.d1, G)
    g = 0.5 * (g + np.swapaxes(g, -1, -2))
    det = np.linalg.det(g)
    if np.any(~(det > DET_FLOOR)):
        worst = float(np.nanmin(det))
        raise DegenerateChartError(f"induced metric degenerates (det g = {worst:.3e})", residual=worst)
    return MetricField(g, np.linalg.inv(g), det)


def metric_derivatives(jet2: Jet2, space) -> np.ndarray:
    """``∂_k g_ij`` by the product rule on the jet, shape ``(..., k, i, j)``."""
    G = space.gram
    t = np.einsum("...kia,...ja,a->...kij", jet2.d2, jet2.d1, G)
    return t + np.swapaxes(t, -1, -2)


def christoffel_from_dg(dg, g_inv) -> np.ndarray:
    """Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij), shape ``(..., k, i, j)``."""
    # dg[..., a, b, c] = ∂_a g_bc
    first = 0.5 * (
        np.einsum("...ijl->...ijl", dg)
        + np.einsum("...jil->...ijl", dg)
        - np.einsum("...lij->...ijl", dg)
    )
    gamma = np.einsum("...kl,...ijl->...kij", g_inv, first)
    return 0.5 * (gamma + np.swapaxes(gamma, -1, -2))


def christoffel(immersion, point, h, space, richardson=False) -> np.ndarray:
    j = jet(immersion, point, h, richardson=richardson)
    met = metric(j, space)
    return christoffel_from_dg(metric_derivatives(j, space), met.g_inv)


# ---------------------------------------------------------------- grid stencils


def _shift(a, axis, k, periodic):
    """``out[i] = a[i + k]`` along ``axis``; NaN where a non-periodic axis runs out."""
    if periodic:
        return np.roll(a, -k, axis=axis)
    out = np.full_like(a, np.nan)
    n = a.shape[axis]
    src = [slice(None)] * a.ndim
    dst = [slice(None)] * a.ndim
    if k >= 0:
        src[axis], dst[axis] = slice(k, n), slice(0, n - k)
    else:
        src[axis], dst[axis] = slice(0, n + k), slice(-k, n)
    out[tuple(dst)] = a[tuple(src)]
    return out


def _d1(a, axis, h, periodic, scale):
    out = np.zeros_like(a)
    for k, c in zip(D1_OFFSETS, D1_COEFFS):
        out += c * _shift(a, axis, k * scale, periodic)
    return out / (h * scale)


def _d2(a, axis, h, periodic, scale):
    out = np.zeros_like(a)
    for k, c in zip(D2_OFFSETS, D2_COEFFS):
        out += c * _shift(a, axis, k * scale, periodic)
    return out / (h * scale) ** 2


def partial(fld, grid: ChartGrid, axis: int, richardson=False):
    """∂ along one chart axis of a sampled field (node axes first)."""
    fld = np.asarray(fld, dtype=float)
    h, per = grid.spacing[axis], grid.periodic[axis]
    d = _d1(fld, axis, h, per, 1)
    if richardson:
        d = (16.0 * d - _d1(fld, axis, h, per, 2)) / 15.0
    return d


def partial2(fld, grid: ChartGrid, i: int, j: int, richardson=False):
    fld = np.asarray(fld, dtype=float)
    hs, per = grid.spacing, grid.periodic

    def level(s):
        if i == j:
            return _d2(fld, i, hs[i], per[i], s)
        return _d1(_d1(fld, j, hs[j], per[j], s), i, hs[i], per[i], s)

    d = level(1)
    if richardson:
        d = (16.0 * d - level(2)) / 15.0
    return d


def gradient_components(fld, grid, richardson=False):
    """Covector ``∂_i f`` stacked on a trailing axis of length ``grid.dim``."""
    return np.stack([partial(fld, grid, a, richardson) for a in range(grid.dim)], axis=-1)


def jet_of_field(fld, grid, richardson=False):
    """First and second chart derivatives of a scalar field: (``df``, ``ddf``)."""
    m = grid.dim
    df = gradient_components(fld, grid, richardson)
    ddf = np.empty(fld.shape + (m, m))
    for i in range(m):
        for j in range(i, m):
            ddf[..., i, j] = partial2(fld, grid, i, j, richardson)
            ddf[..., j, i] = ddf[..., i, j]
    return df, ddf


# ------------------------------------------------------------ intrinsic operators


def grad(fld, grid, met: MetricField, richardson=False):
    """Gradient vector ``(grad f)^i = g^ij ∂_j f`` and ``|grad f|²``."""
    df = gradient_components(fld, grid, richardson)
    vec = np.einsum("...ij,...j->...i", met.g_inv, df)
    return vec, np.einsum("...i,...i->...", df, vec)


def divergence_vec(X, grid, met: MetricField, richardson=False):
    """``div X = (1/√det g) ∂_i(√det g X^i)`` for a vector field ``(..., m)``."""
    acc = np.zeros(X.shape[:-1])
    for i in range(grid.dim):
        acc = acc + partial(met.sqrt_det * X[..., i], grid, i, richardson)
    return acc / met.sqrt_det


def laplace_beltrami(fld, grid, met: MetricField, richardson=False):
    """Geometers' Laplacian, divergence form: ``−(1/√g) ∂_i(√g g^ij ∂_j f)``.

    Vector-valued fields (trailing component axis) are handled componentwise
    when ``fld.ndim == grid.dim + 1``.
    """
    fld = np.asarray(fld, dtype=float)
    if fld.ndim == grid.dim + 1:
        return np.stack(
            [laplace_beltrami(fld[..., k], grid, met, richardson) for k in range(fld.shape[-1])],
            axis=-1,
        )
    vec, _ = grad(fld, grid, met, richardson)
    return -divergence_vec(vec, grid, met, richardson)


def hessian(fld, grid, gamma, richardson=False):
    """``(Hess f)_ij = ∂_i∂_j f − Γ^k_ij ∂_k f``, symmetric."""
    df, ddf = jet_of_field(fld, grid, richardson)
    hess = ddf - np.einsum("...kij,...k->...ij", gamma, df)
    return 0.5 * (hess + np.swapaxes(hess, -1, -2))


def covariant_derivative_operator(A, grid, gamma, met: MetricField, richardson=False):
    """∇A for a (1,1) field ``A[..., j, k]`` and ``|∇A|²``.

    ``nabla[..., i, j, k] = ∂_i A^j_k + Γ^j_il A^l_k − A^j_l Γ^l_ik``.
    """
    m = grid.dim
    dA = np.stack([partial(A, grid, i, richardson) for i in range(m)], axis=-3)
    nabla = (
        dA
        + np.einsum("...jil,...lk->...ijk", gamma, A)
        - np.einsum("...jl,...lik->...ijk", A, gamma)
    )
    norm2 = np.einsum(
        "...ijk,...ia,...jc,...kd,...acd->...",
        nabla, met.g_inv, met.g, met.g_inv, nabla,
        optimize=True,
    )
    return nabla, norm2


def divergence_op(S, grid, gamma, met: MetricField, richardson=False):
    """Divergence of a (1,1) tensor as a covector: ``(Div S)_k = (∇_i S)^i_k``."""
    nabla, _ = covariant_derivative_operator(S, grid, gamma, met, richardson)
    return np.einsum("...iik->...k", nabla)


def christoffel_from_metric(g, grid, richardson=False):
    """Christoffel symbols of a sampled metric field (intrinsic route)."""
    m = grid.dim
    dg = np.stack([partial(g, grid, a, richardson) for a in range(m)], axis=-3)
    return christoffel_from_dg(dg, np.linalg.inv(g))


def gaussian_curvature(grid, met: MetricField, gamma, richardson=False):
    """K = R_1212 / det g for m = 2, from Christoffels and their derivatives."""
    if grid.dim != 2:
        raise InputError("Gaussian curvature needs a two-dimensional chart")
    dgam = np.stack([partial(gamma, grid, a, richardson) for a in range(2)], axis=-4)
    # R^l_{122} = ∂_1Γ^l_22 − ∂_2Γ^l_12 + Γ^l_1p Γ^p_22 − Γ^l_2p Γ^p_12
    r = (
        dgam[..., 0, :, 1, 1]
        - dgam[..., 1, :, 0, 1]
        + np.einsum("...lp,...p->...l", gamma[..., :, 0, :], gamma[..., :, 1, 1])
        - np.einsum("...lp,...p->...l", gamma[..., :, 1, :], gamma[..., :, 0, 1])
    )
    return np.einsum("...l,...l->...", met.g[..., 0, :], r) / met.det


def gaussian_curvature_conformal(lam, grid, richardson=False):
    """K of ``λ(du² + dv²)``: ``−(∂_u² + ∂_v²) log λ / (2λ)``."""
    loglam = np.log(lam)
    flat = partial2(loglam, grid, 0, 0, richardson) + partial2(loglam, grid, 1, 1, richardson)
    return -flat / (2.0 * lam)


def isothermal_anisotropy(g):
    """Relative deviation of a 2x2 metric field from a multiple of the identity."""
    tr = 0.5 * (g[..., 0, 0] + g[..., 1, 1])
    dev = np.hypot(g[..., 0, 0] - g[..., 1, 1], 2.0 * g[..., 0, 1])
    return dev / tr


def pairwise_sum(values) -> float:
    """Order-fixed accurate sum, independent of how the array was produced."""
    return math.fsum(np.ravel(values).tolist())
