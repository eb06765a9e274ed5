import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spaceform import ambient
from spaceform.errors import GeometryError, InputError


def test_space_dimensions_and_signature():
    assert ambient.euclidean(3).embedding_dim == 3
    assert ambient.euclidean(3).signature == "euclidean"
    assert ambient.sphere(3).embedding_dim == 4
    assert ambient.hyperbolic(3).embedding_dim == 4
    assert ambient.hyperbolic(3).signature == "lorentzian"
    assert list(ambient.hyperbolic(2).gram) == [1.0, 1.0, -1.0]


def test_bad_curvature_rejected():
    with pytest.raises(InputError):
        ambient.AmbientSpace(2, 3)


def test_inner_examples():
    e1 = np.array([1.0, 0.0, 0.0])
    assert ambient.inner(ambient.euclidean(3), e1, e1) == 1.0
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    assert ambient.inner(ambient.hyperbolic(3), e4, e4) == -1.0
    assert ambient.inner(ambient.euclidean(2), [1.0, 2.0], [3.0, -1.0]) == 1.0


def test_inner_rejects_wrong_length():
    with pytest.raises(InputError):
        ambient.inner(ambient.sphere(2), [1.0, 0.0], [1.0, 0.0])


def test_project_tangent_examples():
    v = np.array([0.3, -1.0, 2.0])
    assert np.array_equal(ambient.project_tangent(ambient.euclidean(3), v * 7, v), v)
    S = ambient.sphere(3)
    e1, e2 = np.eye(4)[0], np.eye(4)[1]
    assert np.allclose(ambient.project_tangent(S, e1, e1), 0.0, atol=0)
    assert np.allclose(ambient.project_tangent(S, e1, e1 + e2), e2, atol=0)


def test_project_tangent_rejects_off_model_point():
    with pytest.raises(GeometryError):
        ambient.project_tangent(ambient.sphere(1), np.array([1.0, 1.0]), np.array([1.0, 0.0]))


def test_manifold_residual_examples():
    S = ambient.sphere(3)
    assert ambient.manifold_residual(S, [1.0, 0, 0, 0]) == 0.0
    assert ambient.manifold_residual(S, [1.0, 1.0, 0, 0]) == 1.0
    H = ambient.hyperbolic(2)
    assert ambient.manifold_residual(H, [0.0, 0.0, 1.0]) == 0.0
    # the lower sheet is not part of the model
    assert np.isinf(ambient.manifold_residual(H, [0.0, 0.0, -1.0]))


def _hyperboloid_point(x):
    x = np.asarray(x)
    return np.append(x, np.sqrt(1.0 + x @ x))


finite = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(p=arrays(float, 4, elements=finite), v=arrays(float, 4, elements=finite))
def test_sphere_projection_idempotent_and_self_adjoint(p, v):
    if np.linalg.norm(p) < 1e-3:
        return
    S = ambient.sphere(3)
    p = p / np.linalg.norm(p)
    w = np.roll(v, 1)
    Pv = ambient.project_tangent(S, p, v)
    assert np.allclose(ambient.project_tangent(S, p, Pv), Pv, atol=1e-12)
    assert abs(ambient.inner(S, Pv, p)) < 1e-12
    lhs = ambient.inner(S, Pv, w)
    rhs = ambient.inner(S, v, ambient.project_tangent(S, p, w))
    assert abs(lhs - rhs) < 1e-11 * (1 + np.linalg.norm(v) * np.linalg.norm(w))


@settings(max_examples=60, deadline=None)
@given(x=arrays(float, 2, elements=finite), v=arrays(float, 3, elements=finite))
def test_hyperboloid_projection_is_tangent_and_idempotent(x, v):
    H = ambient.hyperbolic(2)
    p = _hyperboloid_point(x)
    assert ambient.manifold_residual(H, p) < 1e-12
    Pv = ambient.project_tangent(H, p, v)
    scale = 1 + np.linalg.norm(v) * np.linalg.norm(p) ** 2
    assert abs(ambient.inner(H, Pv, p)) < 1e-12 * scale
    assert np.allclose(ambient.project_tangent(H, p, Pv), Pv, atol=1e-11 * scale)


@pytest.mark.parametrize("space", [ambient.euclidean(3), ambient.sphere(3), ambient.hyperbolic(3)])
def test_random_isometry_preserves_model_and_inner_products(space, rng):
    iso = ambient.random_isometry(space, rng)
    if space.curvature == 0:
        p, q = rng.standard_normal((2, 3))
        assert np.isclose(np.linalg.norm(iso(p) - iso(q)), np.linalg.norm(p - q), rtol=1e-13)
        return
    if space.curvature == 1:
        pts = rng.standard_normal((5, 4))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    else:
        pts = np.array([_hyperboloid_point(x) for x in rng.standard_normal((5, 3))])
    img = iso(pts)
    assert np.max(ambient.manifold_residual(space, img)) < 1e-12
    gram = ambient.inner(space, pts[:, None, :], pts[None, :, :])
    gram_img = ambient.inner(space, img[:, None, :], img[None, :, :])
    assert np.allclose(gram, gram_img, rtol=1e-12, atol=1e-12)
