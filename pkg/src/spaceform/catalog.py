"""Closed-form example hypersurfaces and their machine-checkable claims.

Each family builds a :class:`CatalogEntry` holding a chart, a default grid,
the residual checks that apply, closed-form oracle fields (mean curvature,
principal curvatures, metric, Gaussian curvature) and a list of
:class:`Claim` objects that :func:`verify` turns into verdicts.

Orientation: the normal is chosen so that ``f >= 0`` at the base point (the
centre of the chart box); the choice is stored in ``entry.orientation``.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import ambient, profile_ode
from .calculus import ChartGrid
from .errors import InputError, ParameterError, PreconditionError
from .residuals import CHECKS, HESSIAN_CONVENTION, Entry, ResidualReport, SurfaceAnalysis, Verdict
from .shape import frame_at, sample_surface

TWO_PI = 2.0 * math.pi
POLAR_CUT = 0.3
INV_SQRT2 = 1.0 / math.sqrt(2.0)

# checks every entry runs; the rest are added per family
BASE_CHECKS = ("manifold", "grad_f", "abs_f", "biharmonic", "biconservative", "s2")
SURFACE_CHECKS = ("gauss", "hessian_trace")


@dataclass(frozen=True)
class Claim:
    """``stat(entry) <relation> tolerance`` turned into a verdict by :func:`verify`."""

    name: str
    entry: str
    tolerance: float
    stat: str = "max_rel"
    relation: str = "<"

    def holds(self, value: float) -> bool:
        if self.relation == "<":
            return value < self.tolerance
        if self.relation == ">":
            return value > self.tolerance
        if self.relation == ">=":
            return value >= self.tolerance
        raise ValueError(self.relation)

    def to_dict(self) -> dict:
        return {"claim": self.name, "entry": self.entry, "stat": self.stat,
                "relation": self.relation, "tolerance": self.tolerance}


@dataclass
class CatalogEntry:
    id: str
    space: ambient.AmbientSpace
    dim_m: int
    chart: object
    default_grid: ChartGrid
    params: dict
    claims: list
    checks: tuple
    expected: dict = field(default_factory=dict)
    isothermal: bool = False
    exclusions: object = None
    orientation: int = 1
    jet_step: float = 0.02
    jet_levels: int = 2
    description: str = ""

    def base_point(self) -> np.ndarray:
        pts = []
        for (lo, hi), per in zip(self.default_grid.ranges, self.default_grid.periodic):
            pts.append(lo + (0.25 if per else 0.5) * (hi - lo))
        return np.array(pts)

    def summary(self) -> dict:
        return {
            "id": self.id,
            "space": self.space.name,
            "curvature": self.space.curvature,
            "dim_m": self.dim_m,
            "params": self.params,
            "isothermal": self.isothermal,
            "orientation": self.orientation,
            "default_grid": self.default_grid.summary(),
            "checks": list(self.checks),
            "expected_fields": sorted(self.expected),
            "claims": [c.to_dict() for c in self.claims],
            "description": self.description,
        }


# ------------------------------------------------------------------ charts


def _round_sphere(angles):
    """Unit sphere S^k from k angles; the last angle is the periodic azimuth."""
    k = angles.shape[-1]
    if k == 1:
        t = angles[..., 0]
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    if k == 2:
        th, ph = angles[..., 0], angles[..., 1]
        return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    if k == 3:
        a, b, ph = angles[..., 0], angles[..., 1], angles[..., 2]
        return np.stack(
            [np.sin(a) * np.sin(b) * np.cos(ph), np.sin(a) * np.sin(b) * np.sin(ph), np.sin(a) * np.cos(b), np.cos(a)],
            axis=-1,
        )
    raise InputError("round sphere charts support dimensions 1 to 3")


def _round_metric(angles):
    """Metric of :func:`_round_sphere`, diagonal."""
    k = angles.shape[-1]
    diag = np.ones(angles.shape[:-1] + (k,))
    if k == 2:
        diag[..., 1] = np.sin(angles[..., 0]) ** 2
    elif k == 3:
        diag[..., 1] = np.sin(angles[..., 0]) ** 2
        diag[..., 2] = (np.sin(angles[..., 0]) * np.sin(angles[..., 1])) ** 2
    return diag


def _sphere_axes(k, n):
    """Ranges, counts and periodicity for a k-dimensional angular chart."""
    ranges = [(POLAR_CUT, math.pi - POLAR_CUT)] * (k - 1) + [(0.0, TWO_PI)]
    return ranges, [n] * k, [False] * (k - 1) + [True]


def _default_n(m):
    return 65 if m == 2 else 33


def _diag_metric(diag):
    return diag[..., :, None] * np.eye(diag.shape[-1])


def _const(value):
    return lambda X: np.full(X.shape[:-1], float(value))


def _const_vec(values):
    values = np.asarray(values, dtype=float)
    return lambda X: np.broadcast_to(values, X.shape[:-1] + values.shape).copy()


def _pick_orientation(entry: CatalogEntry) -> int:
    fr = frame_at(entry.chart, entry.base_point(), entry.space, entry.jet_step, 1, entry.jet_levels)
    return -1 if float(fr.f) < -1e-12 else 1


# -------------------------------------------------------------- families


def _closed_form_claims(f_tol=1e-8):
    return [
        Claim("on_model", "manifold_residual", 1e-9, stat="max_abs"),
        Claim("s2_trace", "s2_trace", 1e-8),
        Claim("s2_divergence", "s2_divergence", 1e-8),
        Claim("s2_norm", "s2_norm", 1e-8),
        Claim("mean_curvature", "expected_f", f_tol, stat="max_abs"),
        Claim("principal_curvatures", "expected_lambda", f_tol, stat="max_abs"),
        Claim("metric", "expected_metric", 1e-8, stat="max_abs"),
    ]


def _cmc_biharmonic_claims(m, f_value):
    claims = [
        Claim("cmc", "grad_f_norm", 1e-6, stat="max_abs"),
        Claim("biharmonic_normal", "biharmonic_normal", 1e-6),
        Claim("biharmonic_tangent", "biharmonic_tangent", 1e-6),
        Claim("biconservative", "biconservative", 1e-6),
        Claim("simons_wellknown", "simons_wellknown", 1e-6),
    ]
    if f_value > 1e-10:
        claims += [
            Claim("cmc_gap", "cmc_gap", 1e-6, stat="max_abs"),
            Claim("deltaf4", "deltaf4", 1e-12),
            Claim("finite_type_t1", "finite_type_t1", 1e-5, stat="max_abs"),
            Claim(*(("finite_type_t2", "finite_type_t2") if f_value < 1 - 1e-6 else ("finite_type_constant", "finite_type_constant")),
                  1e-5, stat="max_abs"),
            Claim("finite_type_norms", "finite_type_norms", 1e-8, stat="max_abs"),
            Claim("finite_type_orthogonality", "finite_type_orthogonality", 1e-8, stat="max_abs"),
        ]
    else:
        claims.append(Claim("minimal", "abs_f", 1e-10, stat="max_abs"))
    return claims


def small_hypersphere(m=3, r=INV_SQRT2) -> CatalogEntry:
    """``S^m(r) ⊂ S^{m+1}``: the slice at height ``√(1 − r²)``; ``r = 1`` is a great sphere."""
    m, r = int(m), float(r)
    if m not in (2, 3):
        raise ParameterError(f"small_hypersphere supports m in {{2, 3}}, got {m}")
    if not 0.0 < r <= 1.0:
        raise ParameterError(f"small_hypersphere needs 0 < r <= 1, got {r}")
    height = math.sqrt(1.0 - r * r)

    def chart(X):
        w = _round_sphere(X)
        return np.concatenate([r * w, np.full(X.shape[:-1] + (1,), height)], axis=-1)

    ranges, counts, per = _sphere_axes(m, _default_n(m))
    k = height / r
    claims = _closed_form_claims() + _cmc_biharmonic_claims(m, k)
    checks = BASE_CHECKS + ("simons", "deltaf4", "finite_type", "cmc_gap", "chen", "hessian")
    if m == 2:
        checks += SURFACE_CHECKS + ("weingarten",)
        claims.append(Claim("gauss_equation", "gauss_equation", 1e-6))
    return CatalogEntry(
        id="small_hypersphere",
        space=ambient.sphere(m + 1),
        dim_m=m,
        chart=chart,
        default_grid=ChartGrid(ranges, counts, per, [2 if not p else 0 for p in per]),
        params={"m": m, "r": r},
        claims=claims,
        checks=checks,
        expected={
            "f": _const(k),
            "lambda": _const_vec([k] * m),
            "normA2": _const(m * k * k),
            "metric": lambda X: _diag_metric(r * r * _round_metric(X)),
            "K": _const(1.0 / (r * r)),
        },
        jet_step=0.06 if m == 3 else 0.02,
        jet_levels=3 if m == 3 else 2,
        description="small hypersphere of the unit sphere; biharmonic exactly for r = 1/sqrt(2)",
    )


def _product_chart(m1, m2, r1, r2):
    def chart(X):
        return np.concatenate([r1 * _round_sphere(X[..., :m1]), r2 * _round_sphere(X[..., m1:])], axis=-1)

    def metric_fn(X):
        return _diag_metric(
            np.concatenate([r1 * r1 * _round_metric(X[..., :m1]), r2 * r2 * _round_metric(X[..., m1:])], axis=-1)
        )

    return chart, metric_fn


def _product_entry(ident, m1, m2, r1, claims_fn, description):
    m1, m2 = int(m1), int(m2)
    if m1 < 1 or m2 < 1 or m1 + m2 not in (2, 3):
        raise ParameterError(f"{ident} needs m1, m2 >= 1 with m1 + m2 in {{2, 3}}")
    if not 0.0 < r1 < 1.0:
        raise ParameterError(f"{ident} needs 0 < r1 < 1, got {r1}")
    m = m1 + m2
    r2 = math.sqrt(1.0 - r1 * r1)
    chart, metric_fn = _product_chart(m1, m2, r1, r2)
    n = _default_n(m)
    ranges, counts, per = [], [], []
    for k in (m1, m2):
        rr, cc, pp = _sphere_axes(k, n)
        ranges += rr
        counts += cc
        per += pp
    lam = np.array([r2 / r1] * m1 + [-r1 / r2] * m2)
    f = float(np.mean(lam))
    if f < 0:
        lam, f = -lam, -f
    lam = np.sort(lam)[::-1]
    claims = _closed_form_claims() + claims_fn(m, f)
    checks = BASE_CHECKS + ("simons", "deltaf4", "finite_type", "cmc_gap", "chen", "hessian")
    if m == 2:
        checks += SURFACE_CHECKS + ("weingarten",)
        claims.append(Claim("gauss_equation", "gauss_equation", 1e-6))
    return CatalogEntry(
        id=ident,
        space=ambient.sphere(m + 1),
        dim_m=m,
        chart=chart,
        default_grid=ChartGrid(ranges, counts, per, [0 if p else 2 for p in per]),
        params={"m1": m1, "m2": m2, "r1": r1},
        claims=claims,
        checks=checks,
        expected={
            "f": _const(f),
            "lambda": _const_vec(lam),
            "normA2": _const(float(np.sum(lam**2))),
            "metric": metric_fn,
            "K": _const(0.0),
        },
        jet_step=0.06 if m == 3 else 0.02,
        jet_levels=3 if m == 3 else 2,
        description=description,
    )


def clifford_product(m1=2, m2=1) -> CatalogEntry:
    """``S^{m1}(1/√2) × S^{m2}(1/√2) ⊂ S^{m+1}``; minimal when ``m1 = m2``."""
    return _product_entry(
        "clifford_product", m1, m2, INV_SQRT2, _cmc_biharmonic_claims,
        "product of two spheres of radius 1/sqrt(2); proper biharmonic unless m1 = m2",
    )


def product_general(m1=1, m2=1, r1=0.5) -> CatalogEntry:
    """``S^{m1}(r1) × S^{m2}(√(1 − r1²))``: CMC, hence biconservative."""

    def claims(m, f):
        return [
            Claim("cmc", "grad_f_norm", 1e-6, stat="max_abs"),
            Claim("biconservative", "biconservative", 1e-6),
            Claim("simons_wellknown", "simons_wellknown", 1e-6),
            Claim("deltaf4", "deltaf4", 1e-12),
        ]

    return _product_entry(
        "product_general", m1, m2, float(r1), claims,
        "product of two spheres with arbitrary radii; CMC and biconservative",
    )


def _non_cmc_claims():
    return [
        Claim("on_model", "manifold_residual", 1e-9, stat="max_abs"),
        Claim("s2_trace", "s2_trace", 1e-8),
        Claim("s2_divergence", "s2_divergence", 1e-8),
        Claim("s2_norm", "s2_norm", 1e-8),
        Claim("metric", "expected_metric", 1e-8, stat="max_abs"),
        Claim("non_cmc", "grad_f_norm", 1e-2, stat="max_abs", relation=">"),
        Claim("hopf_holomorphic", "hopf_cr", 1e-5, stat="max_abs"),
        Claim("curvature_equals_c", "expected_K", 1e-6, stat="max_abs"),
        Claim("gauss_equation", "gauss_equation", 1e-6),
    ]


def cone_r3(alpha=1.0) -> CatalogEntry:
    """Cone ``(u cos v, u sin v, α u)`` in isothermal coordinates ``u = exp(s/√(1+α²))``.

    The metric becomes ``u²(ds² + dv²)``; the apex ``s → −∞`` is outside
    every finite grid.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ParameterError(f"cone_r3 needs alpha > 0, got {alpha}")
    a = math.sqrt(1.0 + alpha * alpha)

    def radius(X):
        return np.exp(X[..., 0] / a)

    def chart(X):
        u, v = radius(X), X[..., 1]
        return np.stack([u * np.cos(v), u * np.sin(v), alpha * u], axis=-1)

    def lam(X):
        k = alpha / (a * radius(X))
        return np.stack([k, np.zeros_like(k)], axis=-1)

    return CatalogEntry(
        id="cone_r3",
        space=ambient.euclidean(3),
        dim_m=2,
        chart=chart,
        default_grid=ChartGrid([(-1.0, 1.0), (0.0, TWO_PI)], (65, 65), (False, True), (2, 0)),
        params={"alpha": alpha},
        claims=_non_cmc_claims()
        + [
            Claim("mean_curvature", "expected_f", 1e-8, stat="max_abs"),
            Claim("principal_curvatures", "expected_lambda", 1e-8, stat="max_abs"),
        ],
        checks=BASE_CHECKS + SURFACE_CHECKS + ("hopf", "weingarten"),
        expected={
            "f": lambda X: 0.5 * alpha / (a * radius(X)),
            "lambda": lam,
            "metric": lambda X: _diag_metric(np.stack([radius(X) ** 2] * 2, axis=-1)),
            "K": _const(0.0),
        },
        isothermal=True,
        description="flat cone; non-CMC with holomorphic Hopf function",
    )


def cone_s3(alpha=2.0) -> CatalogEntry:
    """Flat non-CMC surface of S³ with holomorphic Hopf function.

    Base chart ``(u, v) ↦ (cos u cos v/α, sin u cos v/α, √(α²−1) cos v/α, sin v)``
    with metric ``cos²v du²/α² + dv²``; registered in the isothermal chart
    ``u = αx``, ``v = arcsin(tanh y)``, where the metric is ``sech²y (dx² + dy²)``.
    """
    alpha = float(alpha)
    if not alpha > 1:
        raise ParameterError(f"cone_s3 needs alpha > 1, got {alpha}")
    b = math.sqrt(alpha * alpha - 1.0)

    def chart(X):
        u = alpha * X[..., 0]
        t = np.tanh(X[..., 1])
        cv, sv = 1.0 / np.cosh(X[..., 1]), t
        return np.stack([np.cos(u) * cv / alpha, np.sin(u) * cv / alpha, b * cv / alpha, sv], axis=-1)

    return CatalogEntry(
        id="cone_s3",
        space=ambient.sphere(3),
        dim_m=2,
        chart=chart,
        default_grid=ChartGrid([(0.0, TWO_PI / alpha), (-1.0, 1.0)], (65, 65), (True, False), (0, 2)),
        params={"alpha": alpha},
        claims=_non_cmc_claims(),
        checks=BASE_CHECKS + SURFACE_CHECKS + ("hopf", "weingarten"),
        expected={
            "metric": lambda X: _diag_metric(np.stack([np.cosh(X[..., 1]) ** -2] * 2, axis=-1)),
            "K": _const(1.0),
        },
        isothermal=True,
        description="flat surface of the 3-sphere; non-CMC with holomorphic Hopf function",
    )


def _biconservative_surface_claims(tight):
    t = 1e-6 if tight else 1e-4
    return [
        Claim("non_cmc", "grad_f_norm", 1e-2, stat="max_abs", relation=">"),
        Claim("biconservative", "biconservative", t),
        Claim("weingarten", "weingarten", t),
        Claim("cmop_curvature", "cmop_curvature", t),
        Claim("cmop_level_curves", "cmop_level_curves", 1e-4 if tight else 1e-3),
        Claim("cmop_pde", "cmop_pde", 1e-4 if tight else 1e-3),
        Claim("chen_margin", "chen_margin", 1e-6 if tight else 1e-4),
        Claim("hessian_identity", "hessian_identity", 1e-4 if tight else 1e-3),
        Claim("f_positive", "f_sign", 0.0, stat="min_oriented_f", relation=">"),
        Claim("s2_trace", "s2_trace", 1e-8),
        Claim("s2_divergence", "s2_divergence", 1e-8),
        Claim("s2_conservation", "s2_conservation", 1e-4),
        Claim("s2_norm", "s2_norm", 1e-8),
    ]


def bicons_r3(C0=1.0) -> CatalogEntry:
    """Non-CMC biconservative surface of R³ with metric ``C₀ cosh⁶u (du² + dv²)``."""
    C0 = float(C0)
    if not C0 > 0:
        raise ParameterError(f"bicons_r3 needs C0 > 0, got {C0}")
    sq = math.sqrt(C0)

    def chart(X):
        u, v = X[..., 0], X[..., 1]
        s1 = sq / 3.0 * np.cosh(u) ** 3
        s2 = 0.5 * sq * (0.5 * np.sinh(2.0 * u) + u)
        return np.stack([s1 * np.cos(3.0 * v), s1 * np.sin(3.0 * v), s2], axis=-1)

    def f(X):
        return np.cosh(X[..., 0]) ** -4 / sq

    return CatalogEntry(
        id="bicons_r3",
        space=ambient.euclidean(3),
        dim_m=2,
        chart=chart,
        default_grid=ChartGrid([(-1.0, 1.0), (0.0, TWO_PI / 3.0)], (65, 65), (False, True), (2, 0)),
        params={"C0": C0},
        claims=[
            Claim("on_model", "manifold_residual", 1e-9, stat="max_abs"),
            Claim("metric", "expected_metric", 1e-8, stat="max_abs"),
            Claim("curvature", "expected_K", 1e-6, stat="max_abs"),
            Claim("mean_curvature", "expected_f", 1e-8, stat="max_abs"),
        ]
        + _biconservative_surface_claims(tight=True),
        checks=BASE_CHECKS + SURFACE_CHECKS + ("intrinsic", "weingarten", "chen", "hessian", "simons", "f_sign", "hopf"),
        expected={
            "f": f,
            "lambda": lambda X: np.stack([3.0 * f(X), -f(X)], axis=-1),
            "metric": lambda X: _diag_metric(np.stack([C0 * np.cosh(X[..., 0]) ** 6] * 2, axis=-1)),
            "K": lambda X: -3.0 / (C0 * np.cosh(X[..., 0]) ** 8),
        },
        isothermal=True,
        description="standard non-CMC biconservative surface of Euclidean 3-space",
    )


def round_sphere_r3(r=1.0) -> CatalogEntry:
    """Round sphere in R³; umbilical, so the linear Weingarten relation fails."""
    r = float(r)
    if not r > 0:
        raise ParameterError(f"round_sphere_r3 needs r > 0, got {r}")
    ranges, counts, per = _sphere_axes(2, 65)
    return CatalogEntry(
        id="round_sphere_r3",
        space=ambient.euclidean(3),
        dim_m=2,
        chart=lambda X: r * _round_sphere(X),
        default_grid=ChartGrid(ranges, counts, per, (2, 0)),
        params={"r": r},
        claims=_closed_form_claims()
        + [
            Claim("cmc", "grad_f_norm", 1e-6, stat="max_abs"),
            Claim("gauss_equation", "gauss_equation", 1e-6),
            Claim("weingarten", "weingarten", 1e-6),
        ],
        checks=BASE_CHECKS + SURFACE_CHECKS + ("weingarten",),
        expected={
            "f": _const(1.0 / r),
            "lambda": _const_vec([1.0 / r] * 2),
            "metric": lambda X: _diag_metric(r * r * _round_metric(X)),
            "K": _const(1.0 / (r * r)),
        },
        description="negative control: umbilical sphere, fails the linear Weingarten relation",
    )


def hyperbolic_sphere(m=2, rho=1.0) -> CatalogEntry:
    """Geodesic sphere of radius ρ in ``H^{m+1}``; CMC with ``f = coth ρ``, not biharmonic."""
    m, rho = int(m), float(rho)
    if m not in (2, 3):
        raise ParameterError(f"hyperbolic_sphere supports m in {{2, 3}}, got {m}")
    if not rho > 0:
        raise ParameterError(f"hyperbolic_sphere needs rho > 0, got {rho}")
    sh, ch = math.sinh(rho), math.cosh(rho)
    k = ch / sh

    def chart(X):
        return np.concatenate([sh * _round_sphere(X), np.full(X.shape[:-1] + (1,), ch)], axis=-1)

    ranges, counts, per = _sphere_axes(m, _default_n(m))
    claims = _closed_form_claims() + [
        Claim("cmc", "grad_f_norm", 1e-6, stat="max_abs"),
        Claim("biconservative", "biconservative", 1e-6),
        Claim("not_biharmonic", "biharmonic_normal", 1e-3, relation=">"),
        Claim("simons_wellknown", "simons_wellknown", 1e-6),
    ]
    checks = BASE_CHECKS + ("simons",)
    if m == 2:
        checks += SURFACE_CHECKS
        claims.append(Claim("gauss_equation", "gauss_equation", 1e-6))
    return CatalogEntry(
        id="hyperbolic_sphere",
        space=ambient.hyperbolic(m + 1),
        dim_m=m,
        chart=chart,
        default_grid=ChartGrid(ranges, counts, per, [0 if p else 2 for p in per]),
        params={"m": m, "rho": rho},
        claims=claims,
        checks=checks,
        expected={
            "f": _const(k),
            "lambda": _const_vec([k] * m),
            "metric": lambda X: _diag_metric(sh * sh * _round_metric(X)),
            "K": _const(1.0 / (sh * sh)),
        },
        jet_step=0.06 if m == 3 else 0.02,
        jet_levels=3 if m == 3 else 2,
        description="geodesic sphere of hyperbolic space (hyperboloid model)",
    )


def perturbed_clifford(eps=1e-2, seed=0) -> CatalogEntry:
    """Minimal Clifford torus pushed along its normal by ``eps · w(u, v)``.

    ``w`` is a seeded sum of low Fourier modes; the result is re-projected onto
    S³. Used as a negative control for the biharmonic equations.
    """
    eps, seed = float(eps), int(seed)
    if not eps > 0:
        raise ParameterError(f"perturbed_clifford needs eps > 0, got {eps}")
    rng = np.random.default_rng(seed)
    modes = [(int(p), int(q), float(a), float(ph)) for p, q, a, ph in zip(
        rng.integers(0, 3, 4), rng.integers(1, 3, 4), rng.uniform(0.5, 1.0, 4), rng.uniform(0, TWO_PI, 4)
    )]

    def chart(X):
        u, v = X[..., 0], X[..., 1]
        base = INV_SQRT2 * np.stack([np.cos(u), np.sin(u), np.cos(v), np.sin(v)], axis=-1)
        nrm = INV_SQRT2 * np.stack([-np.cos(u), -np.sin(u), np.cos(v), np.sin(v)], axis=-1)
        w = sum(a * np.cos(p * u + q * v + ph) for p, q, a, ph in modes)
        y = base + eps * w[..., None] * nrm
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    return CatalogEntry(
        id="perturbed_clifford",
        space=ambient.sphere(3),
        dim_m=2,
        chart=chart,
        default_grid=ChartGrid([(0.0, TWO_PI), (0.0, TWO_PI)], (65, 65), (True, True)),
        params={"eps": eps, "seed": seed},
        claims=[
            Claim("on_model", "manifold_residual", 1e-9, stat="max_abs"),
            Claim("biharmonic_normal", "biharmonic_normal", 1e-6),
            Claim("biharmonic_tangent", "biharmonic_tangent", 1e-6),
        ],
        checks=BASE_CHECKS + SURFACE_CHECKS,
        description="negative control: normally perturbed minimal Clifford torus",
    )


@lru_cache(maxsize=8)
def _profile_surface(c1_tilde, n_periods, tol):
    sol = profile_ode.integrate_profile(c1_tilde, n_periods=n_periods, tol=tol)
    profile_ode.reconstruct_sigma(sol)
    return profile_ode.assemble_surface(sol)


def bicons_s3(c1_tilde=20.0, tol=1e-12) -> CatalogEntry:
    """Standard biconservative surface of S³ assembled from the profile ODE.

    The default chart covers one period of the curvature, ``u ∈ [P/4, 5P/4]``,
    and the full rotation ``v ∈ [0, 2π)``. The u-axis is sampled more finely
    than v because κ varies fastest near its maximum.
    """
    c1 = float(c1_tilde)
    profile_ode.admissible_range(c1)  # raises ParameterError below the bound
    surf = _profile_surface(c1, 2, float(tol))
    P = surf.solution.period
    return CatalogEntry(
        id="bicons_s3",
        space=ambient.sphere(3),
        dim_m=2,
        chart=surf,
        default_grid=ChartGrid([(0.25 * P, 1.25 * P), (0.0, TWO_PI)], (161, 65), (False, True), (2, 0)),
        params={"c1_tilde": c1, "tol": float(tol)},
        claims=[Claim("on_model", "manifold_residual", 1e-8, stat="max_abs")]
        + _biconservative_surface_claims(tight=False),
        checks=BASE_CHECKS + SURFACE_CHECKS + ("intrinsic", "weingarten", "chen", "hessian", "f_sign"),
        description="standard biconservative surface of the 3-sphere from the profile ODE",
    )


FAMILIES = {
    "small_hypersphere": (small_hypersphere, {"m": int, "r": float}),
    "clifford_product": (clifford_product, {"m1": int, "m2": int}),
    "product_general": (product_general, {"m1": int, "m2": int, "r1": float}),
    "cone_r3": (cone_r3, {"alpha": float}),
    "cone_s3": (cone_s3, {"alpha": float}),
    "bicons_r3": (bicons_r3, {"C0": float}),
    "bicons_s3": (bicons_s3, {"c1_tilde": float, "tol": float}),
    "round_sphere_r3": (round_sphere_r3, {"r": float}),
    "hyperbolic_sphere": (hyperbolic_sphere, {"m": int, "rho": float}),
    "perturbed_clifford": (perturbed_clifford, {"eps": float, "seed": int}),
}


def instantiate(ident: str, **params) -> CatalogEntry:
    """Build the catalog entry ``ident`` with ``params`` overriding defaults.

    Raises
    ------
    InputError
        Unknown id or parameter name.
    ParameterError
        Parameter outside its admissible range.
    """
    if ident not in FAMILIES:
        raise InputError(f"unknown surface {ident!r}; known: {', '.join(sorted(FAMILIES))}")
    factory, types = FAMILIES[ident]
    unknown = set(params) - set(types)
    if unknown:
        raise InputError(f"{ident} has no parameter(s) {sorted(unknown)}; accepts {sorted(types)}")
    entry = factory(**{k: types[k](v) for k, v in params.items()})
    entry.orientation = _pick_orientation(entry)
    return entry


def catalog_index() -> list:
    """Summaries of every family at default parameters (JSON-serialisable)."""
    out = []
    for ident in FAMILIES:
        out.append(instantiate(ident).summary())
    return out


# ------------------------------------------------------------------ verify


def _expected_entries(an: SurfaceAnalysis, entry: CatalogEntry) -> list:
    X = an.fields.coords
    out = []
    exp = entry.expected
    if "f" in exp:
        out.append(an.entry("expected_f", np.abs(an.f) - np.abs(exp["f"](X))))
    if "lambda" in exp:
        want = exp["lambda"](X)
        lam = an.frame.lam
        d1 = np.max(np.abs(lam - want), axis=-1)
        d2 = np.max(np.abs(-lam[..., ::-1] - want), axis=-1)
        out.append(an.entry("expected_lambda", np.minimum(d1, d2)))
    if "normA2" in exp:
        out.append(an.entry("expected_normA2", an.frame.normA2 - exp["normA2"](X)))
    if "metric" in exp:
        out.append(an.entry("expected_metric", np.max(np.abs(an.met.g - exp["metric"](X)), axis=(-1, -2))))
    if "K" in exp and an.m == 2:
        out.append(an.entry("expected_K", an.K - exp["K"](X)))
    return out


def _f_sign_entry(an: SurfaceAnalysis) -> Entry:
    """Negative part of f after orienting by the sign at the base node."""
    f = an.f
    base = tuple(n // 2 for n in an.grid.counts)
    s = 1.0 if f[base] >= 0 else -1.0
    e = an.entry("f_sign", np.maximum(0.0, -s * f))
    e.extras["min_oriented_f"] = float(np.min(s * f[an.mask]))
    return e


def _abs_f_entry(an: SurfaceAnalysis) -> Entry:
    return an.entry("abs_f", np.abs(an.f))


_EXTRA_CHECKS = {
    "f_sign": lambda an: [_f_sign_entry(an)],
    "abs_f": lambda an: [_abs_f_entry(an)],
}

# entry-name prefix -> check producing it, for skip reasons
_SOURCES = {
    "manifold_residual": "manifold", "grad_f_norm": "grad_f", "abs_f": "abs_f",
    "biharmonic_": "biharmonic", "biconservative": "biconservative", "s2_": "s2",
    "gauss_equation": "gauss", "cmop_": "intrinsic", "weingarten": "weingarten",
    "chen_margin": "chen", "simons_wellknown": "simons", "deltaf4": "deltaf4",
    "hessian_identity": "hessian", "hessian_trace": "hessian_trace", "hopf_cr": "hopf",
    "finite_type_": "finite_type", "cmc_gap": "cmc_gap", "expected_": "expected", "f_sign": "f_sign",
}


def _source(entry_name):
    for prefix, check in _SOURCES.items():
        if entry_name.startswith(prefix):
            return check
    return None


def _run_check(name, an):
    fn = CHECKS.get(name) or _EXTRA_CHECKS[name]
    try:
        return name, fn(an), None
    except PreconditionError as exc:
        return name, [], str(exc)


def _stat(entry: Entry, stat: str) -> float:
    if stat in ("max_abs", "max_rel", "l2_mean"):
        return getattr(entry, stat)
    return float(entry.extras[stat])


def verify(entry: CatalogEntry, grid: ChartGrid = None, flip=False, isometry=None, jobs=1,
           jet_step=None, jet_levels=None, richardson=True, tolerances=None) -> ResidualReport:
    """Run every applicable check on ``entry`` and grade its claims.

    Parameters
    ----------
    grid : ChartGrid, optional
        Overrides ``entry.default_grid``.
    flip : bool
        Use the opposite unit normal.
    isometry : ambient.Isometry, optional
        Applied to the chart before sampling.
    jobs : int
        Worker threads for the independent checks; results keep the fixed
        check order, so reports do not depend on ``jobs``.
    tolerances : dict, optional
        ``{claim_name: tolerance}`` overrides.
    """
    t0 = time.perf_counter()
    grid = grid or entry.default_grid
    if grid.dim != entry.dim_m:
        raise InputError(f"{entry.id} is {entry.dim_m}-dimensional, grid is {grid.dim}-dimensional")
    tolerances = dict(tolerances or {})
    unknown = set(tolerances) - {c.name for c in entry.claims}
    if unknown:
        raise InputError(f"no claim(s) {sorted(unknown)} on {entry.id}")
    chart = entry.chart if isometry is None else isometry.compose(entry.chart)
    orientation = -entry.orientation if flip else entry.orientation
    fields = sample_surface(
        chart, entry.space, grid, orientation=orientation,
        h=entry.jet_step if jet_step is None else jet_step,
        richardson=entry.jet_levels if jet_levels is None else jet_levels,
    )
    exclude = entry.exclusions(fields.coords, grid) if entry.exclusions else None
    an = SurfaceAnalysis(fields, exclude=exclude, richardson=richardson)

    names = list(entry.checks)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda n: _run_check(n, an), names))
    else:
        results = [_run_check(n, an) for n in names]
    entries, skipped = [], {}
    for name, ents, err in results:
        entries.extend(ents)
        if err is not None:
            skipped[name] = err
    try:
        entries.extend(_expected_entries(an, entry))
    except PreconditionError as exc:
        skipped["expected"] = str(exc)

    by_name = {e.name: e for e in entries}
    verdicts = []
    for claim in entry.claims:
        tol = tolerances.get(claim.name, claim.tolerance)
        c = Claim(claim.name, claim.entry, tol, claim.stat, claim.relation)
        e = by_name.get(claim.entry)
        if e is None:
            src = _source(claim.entry)
            reason = skipped.get(src, f"check {src!r} not run on this surface")
            verdicts.append(Verdict(claim.name, "skipped", tol, None, claim.entry, reason))
            continue
        val = _stat(e, claim.stat)
        verdicts.append(Verdict(claim.name, "pass" if c.holds(val) else "fail", tol, val, claim.entry,
                                f"{claim.stat} {claim.relation} tolerance"))
    report = ResidualReport(
        surface_id=entry.id,
        params=dict(entry.params),
        grid=grid.summary(),
        entries=entries,
        verdicts=verdicts,
        meta={
            "orientation": orientation,
            "hessian_convention": HESSIAN_CONVENTION,
            "jet_step": entry.jet_step if jet_step is None else jet_step,
            "jet_levels": entry.jet_levels if jet_levels is None else jet_levels,
            "grid_richardson": bool(richardson),
            "skipped_checks": skipped,
            "wall_seconds": time.perf_counter() - t0,
        },
    )
    return report
