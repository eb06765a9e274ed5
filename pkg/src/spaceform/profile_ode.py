"""Profile curves of the standard biconservative surfaces in S³.

The curvature ``κ(u) > 0`` of the arc-length profile curve ``σ`` on a totally
geodesic ``S² ⊂ S³`` solves

    κ'' κ = (7/4) κ'² + (4/3) κ² − 4 κ⁴,

whose first integral is ``κ'² = P(κ) := −(16/9)κ² − 16κ⁴ + C̃₁ κ^{7/2}``.
Non-constant positive solutions exist for ``C̃₁ > 64/3^{5/4}``; they oscillate
in the band where ``P > 0``. The surface is

    Y(u, v) = σ(u) + ρ(u) (e₁ (cos v − 1) + e₄ sin v),   ρ = 4κ^{-3/4} / (3√C̃₁),

with ``<σ, e₁> = ρ`` and ``<σ, e₄> = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.integrate import DOP853, OdeSolution, solve_ivp

from .errors import InputError, IntegrationError, ParameterError

KAPPA_EQ = 3.0 ** -0.5
_MP_DPS = 50


def _c1_critical_mp():
    with mpmath.workdps(_MP_DPS):
        return mpmath.mpf(64) / mpmath.power(3, mpmath.mpf(5) / 4)


C1_CRITICAL = float(_c1_critical_mp())


def kappa_rhs(kappa, kappa_prime):
    """κ'' from the profile ODE."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise InputError("the profile ODE needs κ > 0")
    # 4κ(1/3 − κ²) keeps the equilibrium at κ = 3^{-1/2} free of cancellation
    out = 1.75 * np.asarray(kappa_prime, dtype=float) ** 2 / kappa + 4.0 * kappa * (1.0 / 3.0 - kappa**2)
    return out if out.ndim else float(out)


def profile_polynomial(kappa, c1_tilde):
    """``P(κ) = −(16/9)κ² − 16κ⁴ + C̃₁ κ^{7/2}``."""
    kappa = np.asarray(kappa, dtype=float)
    return -16.0 / 9.0 * kappa**2 - 16.0 * kappa**4 + c1_tilde * kappa**3.5


def first_integral_residual(kappa, kappa_prime, c1_tilde):
    """``κ'² − P(κ)``; zero along exact solutions with this C̃₁."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise InputError("the first integral needs κ > 0")
    out = np.asarray(kappa_prime, dtype=float) ** 2 - profile_polynomial(kappa, c1_tilde)
    return out if out.ndim else float(out)


def first_integral_constant(kappa, kappa_prime):
    """The value of C̃₁ carried by a state ``(κ, κ')``."""
    kappa = np.asarray(kappa, dtype=float)
    return (np.asarray(kappa_prime) ** 2 + 16.0 / 9.0 * kappa**2 + 16.0 * kappa**4) / kappa**3.5


def _check_c1(c1_tilde):
    c1 = mpmath.mpf(c1_tilde) if not isinstance(c1_tilde, float) else mpmath.mpf(repr(c1_tilde))
    crit = _c1_critical_mp()
    below = c1 <= crit
    if isinstance(c1_tilde, (float, int)) and float(c1_tilde) <= C1_CRITICAL:
        below = True
    if below:
        raise ParameterError(
            f"C̃₁ = {c1_tilde} is not admissible: need C̃₁ > 64/3^(5/4) ≈ {C1_CRITICAL:.10f}"
        )
    return c1


def admissible_range(c1_tilde, tol=1e-12):
    """Band ``(κ_min, κ_max)`` where ``P(κ) > 0``.

    ``P(κ)/κ² = −16/9 − 16κ² + C̃₁κ^{3/2}`` is concave in ``√κ`` with its
    maximum at ``κ* = (3C̃₁/64)²``; each root is bracketed on one side of κ*
    and bisected in 50-digit arithmetic, so parameters closer to the
    critical value than double precision can resolve (pass a string or an
    ``mpmath.mpf``) still give the collapsing band.
    """
    with mpmath.workdps(_MP_DPS):
        c1 = _check_c1(c1_tilde)
        kstar = (3 * c1 / 64) ** 2

        def q(k):
            return -mpmath.mpf(16) / 9 - 16 * k**2 + c1 * k**1.5

        if q(kstar) <= 0:
            raise ParameterError(f"C̃₁ = {c1_tilde} gives an empty band")

        def bisect(lo, hi, rising):
            tol_mp = mpmath.mpf(tol) * mpmath.mpf("1e-6")
            while hi - lo > tol_mp:
                mid = (lo + hi) / 2
                if (q(mid) > 0) == rising:
                    hi = mid
                else:
                    lo = mid
            return (lo + hi) / 2

        upper = kstar
        while q(upper) > 0:
            upper *= 2
        kmin = bisect(mpmath.mpf(0), kstar, rising=True)
        kmax = bisect(kstar, upper, rising=False)
        return float(kmin), float(kmax)


@dataclass
class ProfileSolution:
    """Sampled profile data.

    ``u_grid``/``kappa``/``kappa_prime``/``drift`` are the accepted integrator
    steps; ``dense`` evaluates ``(κ, κ')`` anywhere on ``[0, u_end]``.
    The σ part (``sigma_u``, ``sigma``, ``frame``) is filled by
    :func:`reconstruct_sigma` on a uniform abscissa.
    """

    c1_tilde: float
    u_grid: np.ndarray
    kappa: np.ndarray
    kappa_prime: np.ndarray
    drift: np.ndarray
    period: float | None
    crossings: np.ndarray
    band: tuple
    tol: float
    dense: OdeSolution = field(repr=False, default=None)
    sigma_u: np.ndarray = None
    sigma: np.ndarray = None
    frame: np.ndarray = None
    sigma_dense: object = field(repr=False, default=None)
    sigma_drift: float = None
    coupled_kappa: bool = False

    @property
    def u_end(self) -> float:
        return float(self.u_grid[-1])

    @property
    def max_drift(self) -> float:
        return float(np.max(np.abs(self.drift)))

    @property
    def period_estimates(self) -> np.ndarray:
        return np.diff(np.concatenate([[0.0], self.crossings]))

    def kappa_at(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < -1e-12) or np.any(u > self.u_end + 1e-12):
            raise InputError(f"u outside the integrated span [0, {self.u_end:.6g}]")
        y = self.dense(np.clip(u, 0.0, self.u_end).ravel())
        return y[0].reshape(u.shape), y[1].reshape(u.shape)

    def constraint_residual(self) -> np.ndarray:
        """``<σ, e₁> − 4κ^{-3/4}/(3√C̃₁)`` on the σ samples."""
        if self.sigma is None:
            raise InputError("σ has not been reconstructed")
        k, _ = self.kappa_at(self.sigma_u)
        return self.sigma[:, 0] - 4.0 * k**-0.75 / (3.0 * math.sqrt(self.c1_tilde))


def _rhs(_u, y):
    k, kp = y
    if k <= 0:
        return np.array([kp, np.nan])
    return np.array([kp, 1.75 * kp * kp / k + 4.0 * k * (1.0 / 3.0 - k * k)])


def _refine_crossing(interp, a, b, tol=1e-15, maxiter=100):
    """Root of κ' on [a, b] by Illinois-safeguarded secant steps."""
    fa, fb = interp(a)[1], interp(b)[1]
    side = 0
    for _ in range(maxiter):
        c = b - fb * (b - a) / (fb - fa)
        if not a < c < b:
            c = 0.5 * (a + b)
        fc = interp(c)[1]
        if abs(fc) == 0.0 or (b - a) < tol * max(1.0, abs(c)):
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b, fb = c, fc
            if side == 1:
                fa *= 0.5
            side = 1
    return c


def integrate_profile(c1_tilde, n_periods=10, tol=1e-10, max_steps=2_000_000):
    """Integrate the curvature ODE from the band maximum for ``n_periods``.

    The Poincaré section is ``{κ' = 0, κ'' < 0}``: every accepted step where κ'
    changes sign from + to − is refined on the dense output. The start
    ``u = 0`` lies on the section and is not counted.

    Raises
    ------
    ParameterError
        If ``C̃₁`` is not admissible.
    IntegrationError
        If κ leaves ``(0, ∞)`` or the first-integral drift exceeds ``1e3·tol``.
    """
    if n_periods < 1:
        raise InputError("n_periods must be at least 1")
    kmin, kmax = admissible_range(c1_tilde)
    c1 = float(c1_tilde)
    solver = DOP853(_rhs, 0.0, np.array([kmax, 0.0]), t_bound=np.inf, rtol=tol, atol=tol * 1e-3)
    ts, ys, drift, interps, crossings = [0.0], [np.array([kmax, 0.0])], [0.0], [], []
    budget = 1e3 * tol
    for _ in range(max_steps):
        msg = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integrator failed: {msg}", {"u": solver.t})
        t, y = solver.t, solver.y.copy()
        if not y[0] > 0:
            raise IntegrationError("κ left (0, ∞)", {"u": t, "kappa": float(y[0])})
        d = float(first_integral_residual(y[0], y[1], c1))
        if abs(d) > budget:
            raise IntegrationError(
                f"first-integral drift {d:.3e} exceeds {budget:.1e}", {"u": t, "drift": d}
            )
        interp = solver.dense_output()
        if ys[-1][1] > 0 and y[1] <= 0:
            crossings.append(_refine_crossing(interp, ts[-1], t))
        ts.append(t)
        ys.append(y)
        drift.append(d)
        interps.append(interp)
        if len(crossings) >= n_periods:
            break
    else:
        raise IntegrationError("step budget exhausted before the requested periods", {"u": ts[-1]})
    ys = np.array(ys)
    crossings = np.array(crossings)
    est = np.diff(np.concatenate([[0.0], crossings]))
    return ProfileSolution(
        c1_tilde=c1,
        u_grid=np.array(ts),
        kappa=ys[:, 0],
        kappa_prime=ys[:, 1],
        drift=np.array(drift),
        period=float(np.mean(est)) if len(est) else None,
        crossings=crossings,
        band=(kmin, kmax),
        tol=tol,
        dense=OdeSolution(np.array(ts), interps),
    )


def _frenet_rhs(kappa_fn):
    def rhs(u, y):
        s, t = y[:3], y[3:]
        return np.concatenate([t, -s + kappa_fn(u) * np.cross(s, t)])

    return rhs


def _coupled_rhs(u, y):
    # κ, κ' advance with σ so the Frenet system needs no dense lookups
    k, kp = y[6], y[7]
    s, t = y[:3], y[3:6]
    return np.concatenate(
        [t, -s + k * np.cross(s, t), [kp, 1.75 * kp * kp / k + 4.0 * k * (1.0 / 3.0 - k * k)]]
    )


def initial_frame(kappa0, kappa_prime0, c1_tilde):
    """σ(0), T(0) consistent with ``<σ, e₁> = ρ`` and its derivative.

    ``<T(0), e₁> = ρ'(0) = −κ^{-7/4}κ'/√C̃₁``; the remaining sign is the one
    for which ``ρ'' = −ρ + κ <σ × T, e₁>`` holds at ``u = 0``.
    """
    sq = math.sqrt(c1_tilde)
    rho = 4.0 * kappa0**-0.75 / (3.0 * sq)
    if abs(rho) > 1.0:
        raise ParameterError(
            f"<σ(0), e₁> = {rho:.6g} has modulus > 1; the constraint cannot be met on S²"
        )
    y1 = math.sqrt(1.0 - rho * rho)
    sigma0 = np.array([rho, y1, 0.0])
    t1 = -(kappa0**-1.75) * kappa_prime0 / sq
    t2 = -rho * t1 / y1
    rest = 1.0 - t1 * t1 - t2 * t2
    if rest < 0:
        raise ParameterError("no unit tangent satisfies the initial constraints")
    kpp = kappa_rhs(kappa0, kappa_prime0)
    rho_pp = rho * (21.0 / 16.0 * kappa_prime0**2 / kappa0**2 - 0.75 * kpp / kappa0)
    want = (rho_pp + rho) / kappa0
    best = None
    for sgn in (1.0, -1.0):
        T = np.array([t1, t2, sgn * math.sqrt(rest)])
        err = abs(np.cross(sigma0, T)[0] - want)
        if best is None or err < best[0]:
            best = (err, T)
    return sigma0, best[1]


def reconstruct_sigma(solution: ProfileSolution, c1_tilde=None, samples_per_unit=64, u_end=None,
                      kappa_override=None, rtol=1e-13):
    """Integrate the spherical Frenet system for σ with the profile curvature.

    σ' = T, T' = −σ + κ (σ × T) inside ``span{e₁, e₂, e₃}``, advanced together
    with ``(κ, κ')`` in one continuous DOP853 solve so the dense output is
    smooth. The stored samples on the uniform abscissa are projected back
    (σ renormalised, T re-orthogonalised); the dense σ is normalised
    pointwise when evaluated, which is a smooth projection.

    ``kappa_override`` (a callable) replaces κ, e.g. ``lambda u: 0.0`` for the
    great-circle diagnostic.
    """
    c1 = solution.c1_tilde if c1_tilde is None else float(c1_tilde)
    end = solution.u_end if u_end is None else float(u_end)
    if kappa_override is None:
        k0, kp0 = solution.kappa_at(0.0)
        sigma0, T0 = initial_frame(float(k0), float(kp0), c1)
        y0 = np.concatenate([sigma0, T0, [float(k0), float(kp0)]])
        rhs = _coupled_rhs
    else:
        sigma0, T0 = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        y0 = np.concatenate([sigma0, T0])
        rhs = _frenet_rhs(kappa_override)
    n = max(2, int(math.ceil(end * samples_per_unit)))
    us = np.linspace(0.0, end, n + 1)
    sol = solve_ivp(rhs, (0.0, end), y0, method="DOP853", rtol=rtol, atol=rtol * 1e-2, dense_output=True)
    if not sol.success:
        raise IntegrationError(f"Frenet integration failed: {sol.message}")
    states = sol.sol(us).T
    s = states[:, :3] / np.linalg.norm(states[:, :3], axis=1, keepdims=True)
    t = states[:, 3:6] - np.sum(states[:, 3:6] * s, axis=1, keepdims=True) * s
    t /= np.linalg.norm(t, axis=1, keepdims=True)
    pad = np.zeros((len(us), 1))
    solution.sigma_u = us
    solution.sigma = np.hstack([s, pad])
    solution.frame = np.hstack([t, pad])
    solution.sigma_drift = float(np.max(np.abs(np.linalg.norm(states[:, :3], axis=1) - 1.0)))
    solution.sigma_dense = sol.sol
    solution.coupled_kappa = kappa_override is None
    return solution


class ProfileSurface:
    """Chart ``(u, v) ↦ Y(u, v) ∈ S³`` assembled from a reconstructed profile."""

    def __init__(self, solution: ProfileSolution):
        if solution.sigma_dense is None:
            raise InputError("reconstruct σ before assembling the surface")
        self.solution = solution
        self.c1_tilde = solution.c1_tilde
        self.u_span = (0.0, float(solution.sigma_u[-1]))

    def kappa(self, u):
        u = np.asarray(u, dtype=float)
        if self.solution.coupled_kappa:
            return self.solution.sigma_dense(u.ravel())[6].reshape(u.shape)
        return self.solution.kappa_at(u)[0]

    def rho(self, u):
        k = self.kappa(u)
        return 4.0 * k**-0.75 / (3.0 * math.sqrt(self.c1_tilde))

    def sigma(self, u):
        u = np.asarray(u, dtype=float)
        s = self.solution.sigma_dense(u.ravel())[:3]
        nrm = np.linalg.norm(s, axis=0)
        s = s / nrm
        out = np.zeros(u.shape + (4,))
        out[..., :3] = s.T.reshape(u.shape + (3,))
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u, v = x[..., 0], x[..., 1]
        lo, hi = self.u_span
        if np.any(u < lo - 1e-12) or np.any(u > hi + 1e-12):
            raise InputError(
                f"profile surface evaluated at u outside the integrated span [{lo:.6g}, {hi:.6g}]"
            )
        rho = self.rho(u)
        Y = self.sigma(u)
        Y[..., 0] += rho * (np.cos(v) - 1.0)
        Y[..., 3] += rho * np.sin(v)
        return Y


def assemble_surface(solution: ProfileSolution) -> ProfileSurface:
    return ProfileSurface(solution)


def export_rows(solution: ProfileSolution):
    """Rows ``(u, κ, κ', drift, σ₁..σ₄)`` on the σ abscissa."""
    if solution.sigma is None:
        raise InputError("σ has not been reconstructed")
    k, kp = solution.kappa_at(solution.sigma_u)
    d = first_integral_residual(k, kp, solution.c1_tilde)
    return np.column_stack([solution.sigma_u, k, kp, d, solution.sigma])
