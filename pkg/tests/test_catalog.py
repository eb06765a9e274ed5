import json
import math

import numpy as np
import pytest

from spaceform import ambient, catalog
from spaceform.errors import InputError, ParameterError
from spaceform.shape import frame_at

FAST = ["small_hypersphere", "clifford_product", "product_general", "cone_r3", "cone_s3", "bicons_r3",
        "round_sphere_r3", "hyperbolic_sphere", "perturbed_clifford"]


def verdicts(report):
    return {v.claim: v for v in report.verdicts}


def test_unknown_surface_and_parameter_rejected():
    with pytest.raises(InputError, match="unknown surface"):
        catalog.instantiate("nosuch")
    with pytest.raises(InputError, match="no parameter"):
        catalog.instantiate("cone_r3", C0=1.0)


@pytest.mark.parametrize(
    "ident,params",
    [
        ("cone_s3", {"alpha": 1.0}),
        ("cone_r3", {"alpha": -1.0}),
        ("bicons_r3", {"C0": 0.0}),
        ("bicons_s3", {"c1_tilde": 16.0}),
        ("small_hypersphere", {"r": 1.5}),
        ("small_hypersphere", {"m": 4}),
        ("product_general", {"r1": 1.0}),
    ],
)
def test_parameters_outside_admissible_range(ident, params):
    with pytest.raises(ParameterError):
        catalog.instantiate(ident, **params)


def test_catalog_index_is_json_serialisable():
    idx = catalog.catalog_index()
    assert {e["id"] for e in idx} == set(catalog.FAMILIES)
    text = json.dumps(idx)
    assert "bicons_r3" in text
    for e in idx:
        assert e["claims"], e["id"]


@pytest.mark.parametrize("ident", FAST)
def test_chart_lies_on_model_and_orientation_is_canonical(ident):
    e = catalog.instantiate(ident)
    pts = e.chart(e.default_grid.coords())
    assert np.max(ambient.manifold_residual(e.space, pts)) < 1e-9
    f0 = frame_at(e.chart, e.base_point(), e.space, e.jet_step, orientation=e.orientation).f
    assert f0 >= -1e-12


def test_minimal_clifford_torus():
    r = catalog.verify(catalog.instantiate("clifford_product", m1=1, m2=1))
    v = verdicts(r)
    assert v["minimal"].status == "pass" and v["minimal"].value < 1e-10
    assert v["biharmonic_normal"].status == "pass"
    assert v["biharmonic_tangent"].status == "pass"
    assert r.entry("biharmonic_normal").max_abs < 1e-8
    assert r.passed


def test_bicons_r3_claims_hold():
    r = catalog.verify(catalog.instantiate("bicons_r3", C0=1.0))
    v = verdicts(r)
    for claim in ("biconservative", "weingarten", "chen_margin", "metric", "curvature"):
        assert v[claim].status == "pass", v[claim]
    assert r.passed


@pytest.mark.parametrize("C0", [0.5, 2.0])
def test_bicons_r3_other_constants(C0):
    assert catalog.verify(catalog.instantiate("bicons_r3", C0=C0)).passed


def test_small_hypersphere_wrong_radius_is_a_negative_control():
    r = catalog.verify(catalog.instantiate("small_hypersphere", m=2, r=0.9))
    v = verdicts(r)
    assert v["biharmonic_normal"].status == "fail"
    assert v["cmc"].status == "pass"
    assert not r.passed


def test_cone_s3_expected_facts():
    r = catalog.verify(catalog.instantiate("cone_s3", alpha=2.0))
    v = verdicts(r)
    assert v["on_model"].value < 1e-12
    assert v["curvature_equals_c"].status == "pass"
    assert v["non_cmc"].status == "pass"
    assert v["hopf_holomorphic"].status == "pass"


def test_skipped_verdicts_do_not_fail():
    r = catalog.verify(catalog.instantiate("product_general"))
    assert r.passed
    assert "finite_type" in r.meta["skipped_checks"]


def test_tolerance_override_and_unknown_claim():
    e = catalog.instantiate("bicons_r3")
    r = catalog.verify(e, tolerances={"biconservative": 1e-30})
    assert verdicts(r)["biconservative"].status == "fail"
    with pytest.raises(InputError):
        catalog.verify(e, tolerances={"nosuch": 1.0})


def test_grid_dimension_must_match():
    e = catalog.instantiate("bicons_r3")
    other = catalog.instantiate("small_hypersphere", m=3).default_grid
    with pytest.raises(InputError):
        catalog.verify(e, grid=other)


def test_reports_do_not_depend_on_worker_count():
    e = catalog.instantiate("cone_r3")
    a = catalog.verify(e, jobs=1).to_dict(include_meta=False)
    b = catalog.verify(e, jobs=4).to_dict(include_meta=False)
    assert a == b


def test_flip_leaves_every_scalar_unchanged():
    e = catalog.instantiate("bicons_r3")
    a = catalog.verify(e).scalars()
    b = catalog.verify(e, flip=True).scalars()
    assert max(abs(a[k] - b[k]) for k in a) < 1e-10


def test_bicons_s3_default_entry():
    e = catalog.instantiate("bicons_s3")
    P = e.chart.solution.period
    lo, hi = e.default_grid.ranges[0]
    assert lo == pytest.approx(P / 4) and hi == pytest.approx(5 * P / 4)
    assert e.default_grid.ranges[1] == (0.0, 2 * math.pi)
