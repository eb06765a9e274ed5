"""Nodewise residuals of the biharmonic/biconservative equations and identities.

Every check produces one or more :class:`Entry` objects: a residual field
reduced over the reportable nodes of the grid. A node is reportable when it
lies inside the grid margin, is not excluded by the surface (coordinate
degeneracies), and every stencil feeding the residual stayed inside the grid
(non-periodic stencils that run off the grid produce NaN, which is counted
as excluded rather than reported).

Relative values divide by ``max(1, largest term magnitude)`` per node.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from . import ambient
from .calculus import (
    covariant_derivative_operator,
    divergence_op,
    divergence_vec,
    gaussian_curvature,
    gaussian_curvature_conformal,
    grad,
    gradient_components,
    hessian,
    isothermal_anisotropy,
    laplace_beltrami,
    pairwise_sum,
)
from .errors import PreconditionError
from .shape import ISOTHERMAL_TOL, SurfaceFields, hopf_function, stress_bienergy, tensor_norm2

# calibrated on bicons_r3(1): "mean" leaves ~1e-6, "trace" leaves ~16
HESSIAN_CONVENTION = "mean"
HESSIAN_CONVENTIONS = ("mean", "trace")
CMC_THRESHOLD = 1e-6
MINIMAL_THRESHOLD = 1e-8
LEVEL_CURVE_THRESHOLD = 1e-2


@dataclass
class Entry:
    """Aggregated statistics of one residual field."""

    name: str
    max_abs: float
    max_rel: float
    l2_mean: float
    worst_node: list
    scale: float
    n_nodes: int
    n_excluded: int
    note: str = ""
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Verdict:
    claim: str
    status: str  # "pass" | "fail" | "skipped"
    tolerance: float | None
    value: float | None = None
    entry: str | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ResidualReport:
    surface_id: str
    params: dict
    grid: dict
    entries: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def entry(self, name: str) -> Entry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def verdict(self, claim: str) -> Verdict:
        for v in self.verdicts:
            if v.claim == claim:
                return v
        raise KeyError(claim)

    @property
    def passed(self) -> bool:
        return all(v.status != "fail" for v in self.verdicts)

    def scalars(self) -> dict:
        """Flat ``{entry.stat: value}`` map of every numeric report value."""
        out = {}
        for e in self.entries:
            for key in ("max_abs", "max_rel", "l2_mean"):
                out[f"{e.name}.{key}"] = getattr(e, key)
            for key, val in e.extras.items():
                if isinstance(val, (int, float)):
                    out[f"{e.name}.{key}"] = float(val)
        return out

    def to_dict(self, include_meta=True) -> dict:
        out = {
            "schema": "1",
            "surface": self.surface_id,
            "params": self.params,
            "grid": self.grid,
            "entries": [e.to_dict() for e in self.entries],
            "verdicts": [v.to_dict() for v in self.verdicts],
        }
        if include_meta:
            out["meta"] = self.meta
        return out


def _dilate(mask, grid, reach):
    """Grow ``mask`` by ``reach`` nodes along every axis (wrapping periodic axes)."""
    out = mask.copy()
    for axis, per in enumerate(grid.periodic):
        grown = out.copy()
        for k in range(1, reach + 1):
            for s in (k, -k):
                if per:
                    grown |= np.roll(out, s, axis=axis)
                else:
                    shifted = np.zeros_like(out)
                    src = [slice(None)] * out.ndim
                    dst = [slice(None)] * out.ndim
                    n = out.shape[axis]
                    src[axis], dst[axis] = (slice(0, n - s), slice(s, n)) if s > 0 else (slice(-s, n), slice(0, n + s))
                    shifted[tuple(dst)] = out[tuple(src)]
                    grown |= shifted
        out = grown
    return out


def _norm_vec(X, g):
    return np.sqrt(np.abs(np.einsum("...i,...ij,...j->...", X, g, X)))


def _norm_covec(w, g_inv):
    return np.sqrt(np.abs(np.einsum("...i,...ij,...j->...", w, g_inv, w)))


class SurfaceAnalysis:
    """Derived fields of one sampled surface, computed on first use.

    Parameters
    ----------
    fields : SurfaceFields
        Output of :func:`spaceform.shape.sample_surface`.
    exclude : bool array over the grid, optional
        Nodes to leave out of every entry (coordinate degeneracies).
    richardson : bool
        Richardson extrapolation for grid derivatives.
    """

    def __init__(self, fields: SurfaceFields, exclude=None, richardson=True):
        self.fields = fields
        self.grid = fields.grid
        self.space = fields.space
        self.met = fields.met
        self.gamma = fields.gamma
        self.frame = fields.frame
        self.m = fields.m
        self.c = fields.space.curvature
        self.richardson = richardson
        mask = self.grid.interior_mask()
        if exclude is not None:
            mask = mask & ~np.asarray(exclude, dtype=bool)
        self.mask = mask

    # ---------------------------------------------------------------- fields
    @property
    def f(self):
        return self.frame.f

    @property
    def A(self):
        return self.frame.A

    @cached_property
    def grad_f(self):
        return grad(self.f, self.grid, self.met, self.richardson)

    @cached_property
    def grad_f_norm(self):
        return np.sqrt(np.abs(self.grad_f[1]))

    @cached_property
    def lap_f(self):
        return laplace_beltrami(self.f, self.grid, self.met, self.richardson)

    @cached_property
    def hess_f(self):
        return hessian(self.f, self.grid, self.gamma, self.richardson)

    @cached_property
    def A_grad_f(self):
        return np.einsum("...ij,...j->...i", self.A, self.grad_f[0])

    @cached_property
    def nabla_A(self):
        return covariant_derivative_operator(self.A, self.grid, self.gamma, self.met, self.richardson)

    @cached_property
    def S2(self):
        return stress_bienergy(self.frame)

    @cached_property
    def isothermal(self) -> bool:
        return self.m == 2 and float(np.max(isothermal_anisotropy(self.met.g))) <= ISOTHERMAL_TOL

    @cached_property
    def K(self):
        """Intrinsic Gaussian curvature from the metric alone (m = 2)."""
        if self.m != 2:
            raise PreconditionError("Gaussian curvature needs a surface (m = 2)")
        if self.isothermal:
            lam = 0.5 * (self.met.g[..., 0, 0] + self.met.g[..., 1, 1])
            return gaussian_curvature_conformal(lam, self.grid, self.richardson)
        return gaussian_curvature(self.grid, self.met, self.gamma, self.richardson)

    @cached_property
    def grad_K(self):
        return grad(self.K, self.grid, self.met, self.richardson)

    @cached_property
    def lap_K(self):
        return laplace_beltrami(self.K, self.grid, self.met, self.richardson)

    def node_coords(self, flat_index):
        return [float(x) for x in self.fields.coords.reshape(-1, self.m)[flat_index]]

    def sup_grad_f(self) -> float:
        vals = self.grad_f_norm[self.mask]
        vals = vals[np.isfinite(vals)]
        return float(np.max(vals)) if vals.size else 0.0

    # ---------------------------------------------------------------- entries
    def entry(self, name, residual, terms=(), note="", exclude=None, extras=None) -> Entry:
        residual = np.abs(np.asarray(residual, dtype=float))
        scale = np.ones_like(residual)
        for t in terms:
            scale = np.maximum(scale, np.abs(np.asarray(t, dtype=float)))
        valid = self.mask & np.isfinite(residual) & np.isfinite(scale)
        if exclude is not None:
            valid &= ~exclude
        n = int(np.count_nonzero(valid))
        total = int(self.mask.size)
        if n == 0:
            raise PreconditionError(f"{name}: no reportable nodes")
        res = np.where(valid, residual, -1.0)
        rel = np.where(valid, residual / scale, -1.0)
        worst = int(np.argmax(rel))
        return Entry(
            name=name,
            max_abs=float(np.max(res)),
            max_rel=float(rel.ravel()[worst]),
            l2_mean=math.sqrt(pairwise_sum(residual[valid] ** 2) / n),
            worst_node=self.node_coords(worst),
            scale=float(scale.ravel()[worst]),
            n_nodes=n,
            n_excluded=total - n,
            note=note,
            extras=dict(extras or {}),
        )


# ------------------------------------------------------------------- checks


def manifold_entry(an: SurfaceAnalysis) -> Entry:
    res = ambient.manifold_residual(an.space, an.fields.jet.value)
    return an.entry("manifold_residual", res)


def grad_f_entry(an: SurfaceAnalysis) -> Entry:
    """``|grad f|`` itself; its maximum separates CMC from non-CMC charts."""
    return an.entry("grad_f_norm", an.grad_f_norm)


def biharmonic_residual(an: SurfaceAnalysis) -> list:
    m, c, f = an.m, an.c, an.f
    growth = (an.frame.normA2 - m * c) * f
    normal = an.lap_f + growth
    two_a = 2.0 * an.A_grad_f
    mfg = m * f[..., None] * an.grad_f[0]
    tangent = _norm_vec(two_a + mfg, an.met.g)
    return [
        an.entry("biharmonic_normal", normal, terms=(an.lap_f, an.frame.normA2 * f, m * c * f)),
        an.entry(
            "biharmonic_tangent",
            tangent,
            terms=(_norm_vec(two_a, an.met.g), _norm_vec(mfg, an.met.g)),
        ),
    ]


def biconservative_residual(an: SurfaceAnalysis) -> Entry:
    half = 0.5 * an.m * an.f[..., None] * an.grad_f[0]
    res = _norm_vec(an.A_grad_f + half, an.met.g)
    return an.entry(
        "biconservative",
        res,
        terms=(_norm_vec(an.A_grad_f, an.met.g), _norm_vec(half, an.met.g)),
    )


def s2_identities(an: SurfaceAnalysis) -> list:
    """Trace, divergence and norm identities of the stress-bienergy tensor.

    ``s2_divergence`` compares ``Div S₂`` with ``−(m²/2) grad f² + 2m Div(fA)``
    (both covectors); ``s2_conservation`` compares ``Div S₂`` with
    ``2m (A grad f + (m/2) f grad f)``, which holds through Codazzi.
    """
    m, f = an.m, an.f
    S2 = an.S2
    tr = np.trace(S2, axis1=-2, axis2=-1)
    target = m**2 * f**2 * (2.0 - 0.5 * m)
    out = [an.entry("s2_trace", tr - target, terms=(tr, target))]

    div_s2 = divergence_op(S2, an.grid, an.gamma, an.met, an.richardson)
    df2 = gradient_components(f**2, an.grid, an.richardson)
    div_ah = divergence_op(f[..., None, None] * an.A, an.grid, an.gamma, an.met, an.richardson)
    rhs = -0.5 * m**2 * df2 + 2.0 * m * div_ah
    gi = an.met.g_inv
    out.append(
        an.entry(
            "s2_divergence",
            _norm_covec(div_s2 - rhs, gi),
            terms=(_norm_covec(div_s2, gi), _norm_covec(0.5 * m**2 * df2, gi), _norm_covec(2 * m * div_ah, gi)),
        )
    )
    cons = 2.0 * m * np.einsum("...ij,...j->...i", an.met.g, an.A_grad_f + 0.5 * m * f[..., None] * an.grad_f[0])
    out.append(
        an.entry(
            "s2_conservation",
            _norm_covec(div_s2 - cons, gi),
            terms=(_norm_covec(div_s2, gi), _norm_covec(cons, gi)),
        )
    )

    norm_s2 = tensor_norm2(S2, an.met.g, an.met.g_inv)
    a_h2 = f**2 * an.frame.normA2
    rhs_n = m**4 * f**4 * (0.25 * m - 2.0) + 4.0 * m**2 * a_h2
    out.append(
        an.entry("s2_norm", norm_s2 - rhs_n, terms=(norm_s2, m**4 * f**4 * (0.25 * m - 2.0), 4 * m**2 * a_h2))
    )
    return out


def gauss_equation(an: SurfaceAnalysis) -> Entry:
    """``K − (det A + c)`` with K from the metric alone (m = 2)."""
    detA = np.linalg.det(an.A)
    return an.entry("gauss_equation", an.K - detA - an.c, terms=(an.K, detA, an.c))


def intrinsic_surface_invariants(an: SurfaceAnalysis, threshold=LEVEL_CURVE_THRESHOLD) -> list:
    """Intrinsic invariants of non-CMC biconservative surfaces in ``N³(c)``.

    ``cmop_curvature``: ``K + 3f² − c``.
    ``cmop_level_curves``: ``|div(grad K/|grad K|)| − 3|grad K|/(8(c − K))``
    in absolute value; nodes with ``|grad K| < threshold · sup|grad K|``, and
    nodes whose divergence stencil reaches one, are excluded and counted (the
    unit field flips across critical points of K).
    ``cmop_pde``: ``(c − K)ΔK − |grad K|² − (8/3)K(c − K)²`` (geometers' Δ).
    """
    if an.m != 2:
        raise PreconditionError("intrinsic invariants need a surface (m = 2)")
    c, K, f = an.c, an.K, an.f
    out = [an.entry("cmop_curvature", K + 3.0 * f**2 - c, terms=(K, 3.0 * f**2, c))]
    vecK, gK2 = an.grad_K
    gK = np.sqrt(np.abs(gK2))
    sup = np.nanmax(np.where(an.mask, gK, np.nan))
    if not sup > 1e-8:
        raise PreconditionError(f"grad K vanishes (sup |grad K| = {sup:.3e}); level curves undefined")
    low = ~(gK >= threshold * sup)
    unit = vecK / np.where(low, 1.0, gK)[..., None]
    low_reach = _dilate(low, an.grid, 4 if an.richardson else 2)
    geod = np.abs(divergence_vec(unit, an.grid, an.met, an.richardson))
    law = 3.0 * gK / (8.0 * np.abs(c - K))
    out.append(
        an.entry(
            "cmop_level_curves",
            geod - law,
            terms=(geod, law),
            exclude=low_reach,
            note="absolute values of the geodesic curvature are compared",
            extras={"threshold": threshold * float(sup)},
        )
    )
    t1 = (c - K) * an.lap_K
    t3 = 8.0 / 3.0 * K * (c - K) ** 2
    out.append(an.entry("cmop_pde", t1 - gK2 - t3, terms=(t1, gK2, t3)))
    return out


def weingarten_check(an: SurfaceAnalysis) -> Entry:
    """``min(|3λ₁ + λ₂|, |3λ₂ + λ₁|)``, insensitive to ordering and orientation."""
    if an.m != 2:
        raise PreconditionError("the linear Weingarten check needs a surface (m = 2)")
    l1, l2 = an.frame.lam[..., 0], an.frame.lam[..., 1]
    res = np.minimum(np.abs(3 * l1 + l2), np.abs(3 * l2 + l1))
    return an.entry("weingarten", res, terms=(3 * l1, 3 * l2))


def chen_coefficient(m: int) -> float:
    return m**2 * (m + 26) / (4.0 * (m - 1))


def chen_inequality_margin(an: SurfaceAnalysis) -> Entry:
    """Violation ``max(0, −margin)`` with ``margin = |∇A|² − k_m |grad f|²``.

    The minimum margin itself is kept in ``extras["min_margin"]``.
    """
    m = an.m
    _, nab2 = an.nabla_A
    term = chen_coefficient(m) * an.grad_f[1]
    margin = nab2 - term
    e = an.entry(
        "chen_margin", np.maximum(0.0, -margin), terms=(nab2, term), extras={"coefficient": chen_coefficient(m)}
    )
    ok = an.mask & np.isfinite(margin)
    e.extras["min_margin"] = float(np.min(margin[ok]))
    return e


def simons_wellknown_residual(an: SurfaceAnalysis) -> Entry:
    """``½Δ|A|² + |∇A|² + m Div(A grad f) − m²|grad f|² + ½Σ(λᵢ−λⱼ)²(c + λᵢλⱼ)``."""
    m, c = an.m, an.c
    if m not in (2, 3):
        raise PreconditionError("the Simons-type check supports m = 2, 3")
    lhs = 0.5 * laplace_beltrami(an.frame.normA2, an.grid, an.met, an.richardson)
    _, nab2 = an.nabla_A
    div_term = m * divergence_vec(an.A_grad_f, an.grid, an.met, an.richardson)
    g2 = m**2 * an.grad_f[1]
    lam = an.frame.lam
    dl = lam[..., :, None] - lam[..., None, :]
    curv = 0.5 * np.sum(dl**2 * (c + lam[..., :, None] * lam[..., None, :]), axis=(-1, -2))
    res = lhs + nab2 + div_term - g2 + curv
    return an.entry("simons_wellknown", res, terms=(lhs, nab2, div_term, g2, curv))


def _require_cmc(an, what):
    sup = an.sup_grad_f()
    if sup > CMC_THRESHOLD:
        raise PreconditionError(f"{what} needs a CMC hypersurface (sup |grad f| = {sup:.3e})")
    return sup


def _require_cmc_biharmonic(an, what):
    """CMC and ``|A|² = mc`` wherever ``f ≠ 0`` (the CMC form of the biharmonic system)."""
    _require_cmc(an, what)
    gap = np.abs(an.frame.normA2 - an.m * an.c)[an.mask]
    if np.any(np.abs(an.f[an.mask]) > MINIMAL_THRESHOLD) and float(np.max(gap)) > CMC_THRESHOLD:
        raise PreconditionError(f"{what} needs a biharmonic hypersurface (max ||A|² − mc| = {np.max(gap):.3e})")


def deltaf4_identity(an: SurfaceAnalysis) -> Entry:
    """CMC reduction ``4f²{c m²f² − m f tr A³ − |A|²(cm − |A|²) − |∇A|²}``.

    On constant mean and scalar curvature every Laplacian and gradient term
    of the general identity drops out.
    """
    _require_cmc(an, "the reduced Δf⁴ identity")
    m, c, f = an.m, an.c, an.f
    lam = an.frame.lam
    tr3 = np.sum(lam**3, axis=-1)
    a2 = an.frame.normA2
    _, nab2 = an.nabla_A
    terms = (c * m**2 * f**2, m * f * tr3, a2 * c * m, a2**2, nab2)
    brace = terms[0] - terms[1] - a2 * (c * m - a2) - nab2
    pref = 4.0 * f**2
    return an.entry("deltaf4", pref * brace, terms=tuple(pref * t for t in terms))


def hessian_identity(an: SurfaceAnalysis, convention=HESSIAN_CONVENTION) -> Entry:
    """``m f Δf − 3m|grad f|² − 2<A, Hess f>`` for biconservative hypersurfaces.

    ``convention="mean"`` uses ``f = tr A / m``; ``"trace"`` substitutes
    ``tr A`` for f in the same expression.
    """
    if convention not in HESSIAN_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    m = an.m
    s = 1.0 if convention == "mean" else float(m)
    # <A, Hess f> = A^i_j g^jk Hess_ki
    a_hess = np.einsum("...ij,...jk,...ki->...", an.A, an.met.g_inv, an.hess_f)
    if convention == "mean":
        t1 = m * an.f * an.lap_f
    else:
        t1 = s * s * an.f * an.lap_f
    t2 = 3.0 * m * s * s * an.grad_f[1]
    t3 = 2.0 * s * a_hess
    return an.entry(
        "hessian_identity",
        t1 - t2 - t3,
        terms=(t1, t2, t3),
        note=f"normalization: {convention}",
        extras={"convention": convention},
    )


def hessian_trace_consistency(an: SurfaceAnalysis) -> Entry:
    """``trace_g Hess f + Δf``; zero with the geometers' sign."""
    tr = np.einsum("...ij,...ij->...", an.met.g_inv, an.hess_f)
    return an.entry("hessian_trace", tr + an.lap_f, terms=(tr, an.lap_f))


def hopf_entry(an: SurfaceAnalysis) -> Entry:
    q, cr = hopf_function(an.frame, an.grid, an.richardson)
    return an.entry("hopf_cr", cr, extras={"max_abs_q": float(np.max(np.abs(q[an.mask])))})


def finite_type_check(an: SurfaceAnalysis) -> list:
    """Spectral decomposition of a CMC proper-biharmonic hypersurface of S^{m+1}.

    With ``H = fη``: for ``|H| < 1`` the components ``ψ_{t1,2} = ½ψ ± H/(2|H|)``
    satisfy ``Δψ_{t1,2} = m(1 ∓ |H|)ψ_{t1,2}``; for ``|H| = 1`` the part
    ``ψ₀ = ½(ψ + H)`` is constant and ``ψ_{t1} = ½(ψ − H)`` has eigenvalue 2m.
    """
    if an.c != 1:
        raise PreconditionError("the finite-type decomposition is stated in the unit sphere")
    _require_cmc_biharmonic(an, "the finite-type decomposition")
    m = an.m
    absH = float(np.mean(np.abs(an.f[an.mask])))
    if not absH > MINIMAL_THRESHOLD or absH > 1.0 + 1e-6:
        raise PreconditionError(f"|H| = {absH:.3e} is outside (0, 1]")
    psi = an.fields.jet.value
    Hvec = an.f[..., None] * an.frame.eta
    unitH = np.sign(an.f)[..., None] * an.frame.eta
    met, grid, rich = an.met, an.grid, an.richardson

    def eig_entry(name, vec, eigen):
        # Euclidean norm bounds every component and is rotation invariant
        lap = laplace_beltrami(vec, grid, met, rich)
        res = np.linalg.norm(lap - eigen * vec, axis=-1)
        return an.entry(name, res, terms=(np.linalg.norm(lap, axis=-1),), extras={"eigenvalue": eigen})

    half = 1.0 / math.sqrt(2.0)
    if abs(absH - 1.0) <= 1e-6:
        psi0 = 0.5 * (psi + Hvec)
        t1 = 0.5 * (psi - Hvec)
        norms = np.maximum(
            np.abs(np.linalg.norm(psi0, axis=-1) - half), np.abs(np.linalg.norm(t1, axis=-1) - half)
        )
        return [
            eig_entry("finite_type_t1", t1, 2.0 * m),
            eig_entry("finite_type_constant", psi0, 0.0),
            an.entry("finite_type_norms", norms),
            an.entry("finite_type_orthogonality", np.einsum("...i,...i->...", psi0, t1)),
        ]
    t1 = 0.5 * psi + 0.5 * unitH
    t2 = 0.5 * psi - 0.5 * unitH
    norms = np.maximum(np.abs(np.linalg.norm(t1, axis=-1) - half), np.abs(np.linalg.norm(t2, axis=-1) - half))
    return [
        eig_entry("finite_type_t1", t1, m * (1.0 - absH)),
        eig_entry("finite_type_t2", t2, m * (1.0 + absH)),
        an.entry("finite_type_norms", norms),
        an.entry("finite_type_orthogonality", np.einsum("...i,...i->...", t1, t2)),
    ]


def admissible_cmc_distance(abs_h, m) -> np.ndarray:
    """Distance of ``|H|`` to ``(0, (m−2)/m] ∪ {1}``."""
    abs_h = np.asarray(abs_h, dtype=float)
    edge = (m - 2) / m
    inside = abs_h <= edge
    return np.where(inside, 0.0, np.minimum(np.abs(abs_h - edge), np.abs(abs_h - 1.0)))


def cmc_gap_report(an: SurfaceAnalysis) -> Entry:
    """Distance of the measured ``|H|`` to the set allowed for CMC proper-biharmonic hypersurfaces."""
    _require_cmc_biharmonic(an, "the CMC gap check")
    absf = np.abs(an.f)
    absH = float(np.mean(absf[an.mask]))
    if absH <= MINIMAL_THRESHOLD:
        raise PreconditionError(f"|H| = {absH:.3e}: minimal, hence not proper biharmonic")
    return an.entry(
        "cmc_gap", admissible_cmc_distance(absf, an.m), extras={"abs_H": absH, "edge": (an.m - 2) / an.m}
    )


# Every named check, keyed by the job name used by the catalog and CLI.
CHECKS = {
    "manifold": lambda an: [manifold_entry(an)],
    "grad_f": lambda an: [grad_f_entry(an)],
    "biharmonic": biharmonic_residual,
    "biconservative": lambda an: [biconservative_residual(an)],
    "s2": s2_identities,
    "gauss": lambda an: [gauss_equation(an)],
    "intrinsic": intrinsic_surface_invariants,
    "weingarten": lambda an: [weingarten_check(an)],
    "chen": lambda an: [chen_inequality_margin(an)],
    "simons": lambda an: [simons_wellknown_residual(an)],
    "deltaf4": lambda an: [deltaf4_identity(an)],
    "hessian": lambda an: [hessian_identity(an)],
    "hessian_trace": lambda an: [hessian_trace_consistency(an)],
    "hopf": lambda an: [hopf_entry(an)],
    "finite_type": finite_type_check,
    "cmc_gap": lambda an: [cmc_gap_report(an)],
}
