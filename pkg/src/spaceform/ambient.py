"""Space forms N^n(c) through their flat embedding models.

* ``c = 0``  : Euclidean space R^n.
* ``c = +1`` : the unit sphere in R^(n+1).
* ``c = -1`` : the upper sheet of the hyperboloid <p, p>_L = -1 in Minkowski
  space R^(n,1), time-like coordinate placed last.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, InputError

DEFAULT_MANIFOLD_TOL = 1e-9


@dataclass(frozen=True)
class AmbientSpace:
    curvature: int
    intrinsic_dim: int
    tol: float = DEFAULT_MANIFOLD_TOL

    def __post_init__(self):
        if self.curvature not in (-1, 0, 1):
            raise InputError(f"curvature must be -1, 0 or +1, got {self.curvature!r}")
        if self.intrinsic_dim < 1:
            raise InputError("intrinsic_dim must be positive")

    @property
    def embedding_dim(self) -> int:
        return self.intrinsic_dim + (0 if self.curvature == 0 else 1)

    @property
    def signature(self) -> str:
        return "lorentzian" if self.curvature == -1 else "euclidean"

    @property
    def gram(self) -> np.ndarray:
        """Diagonal of the embedding metric."""
        d = np.ones(self.embedding_dim)
        if self.curvature == -1:
            d[-1] = -1.0
        return d

    @property
    def name(self) -> str:
        sym = {0: "R", 1: "S", -1: "H"}[self.curvature]
        return f"{sym}^{self.intrinsic_dim}"


def euclidean(n: int) -> AmbientSpace:
    return AmbientSpace(0, n)


def sphere(n: int) -> AmbientSpace:
    return AmbientSpace(1, n)


def hyperbolic(n: int) -> AmbientSpace:
    return AmbientSpace(-1, n)


def _check_dim(space, *vecs):
    for v in vecs:
        if np.shape(v)[-1] != space.embedding_dim:
            raise InputError(
                f"vector has length {np.shape(v)[-1]}, "
                f"{space.name} embeds in dimension {space.embedding_dim}"
            )


def inner(space: AmbientSpace, x, y):
    """Model inner product, broadcasting over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dim(space, x, y)
    if space.curvature == -1:
        return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]
    return np.sum(x * y, axis=-1)


def manifold_residual(space: AmbientSpace, p):
    """Distance of ``<p, p>`` from its model value (0 for flat space)."""
    p = np.asarray(p, dtype=float)
    _check_dim(space, p)
    if space.curvature == 0:
        return np.zeros(p.shape[:-1]) if p.ndim > 1 else 0.0
    pp = inner(space, p, p)
    res = np.abs(pp - 1.0) if space.curvature == 1 else np.abs(pp + 1.0)
    if space.curvature == -1:
        # lower sheet is off-model
        res = np.where(p[..., -1] > 0, res, np.inf)
    return res


def project_tangent(space: AmbientSpace, p, v, check=True):
    """Project ``v`` onto T_pN along the position normal.

    Raises
    ------
    GeometryError
        If ``p`` is off the model manifold by more than ``space.tol``.
    """
    v = np.asarray(v, dtype=float)
    _check_dim(space, v)
    if space.curvature == 0:
        return v.copy()
    p = np.asarray(p, dtype=float)
    if check:
        res = np.max(manifold_residual(space, p))
        if res > space.tol:
            raise GeometryError(f"point off {space.name} (residual {res:.3e})", residual=float(res))
    pv = inner(space, v, p)[..., None]
    # <p,p> = c, so the normal component is <v,p>/c * p
    return v - pv * p / space.curvature


@dataclass(frozen=True)
class Isometry:
    """Affine map ``x ↦ Q x + b`` preserving the model (``b = 0`` unless flat)."""

    matrix: np.ndarray
    shift: np.ndarray

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T + self.shift

    def compose(self, chart):
        return lambda coords: self(chart(coords))


def _random_rotation(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_isometry(space: AmbientSpace, rng, boost=0.5) -> Isometry:
    """Random isometry of the model.

    Orthogonal map (plus a translation when flat); for ``c = -1`` a spatial
    rotation composed with a boost of rapidity ``boost`` along a random
    spatial direction, which keeps the upper sheet.
    """
    N = space.embedding_dim
    if space.curvature == 0:
        return Isometry(_random_rotation(N, rng), rng.standard_normal(N))
    if space.curvature == 1:
        return Isometry(_random_rotation(N, rng), np.zeros(N))
    n = N - 1
    rot = np.eye(N)
    rot[:n, :n] = _random_rotation(n, rng)
    d = rng.standard_normal(n)
    d /= np.linalg.norm(d)
    L = np.eye(N)
    L[:n, :n] += (np.cosh(boost) - 1.0) * np.outer(d, d)
    L[:n, -1] = np.sinh(boost) * d
    L[-1, :n] = np.sinh(boost) * d
    L[-1, -1] = np.cosh(boost)
    return Isometry(L @ rot, np.zeros(N))
