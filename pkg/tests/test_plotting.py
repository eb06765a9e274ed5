import numpy as np

from spaceform import catalog, plotting, profile_ode

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_phase_portrait_writes_png(tmp_path):
    sol = profile_ode.integrate_profile(20.0, n_periods=2)
    path = plotting.phase_portrait(sol, str(tmp_path / "p.png"), samples=200)
    assert open(path, "rb").read(8) == PNG_MAGIC
    assert sorted(p.name for p in tmp_path.iterdir()) == ["p.png"]


def test_residual_overview_writes_png(tmp_path):
    report = catalog.verify(catalog.instantiate("round_sphere_r3"))
    assert any(v.status == "fail" for v in report.verdicts)
    path = plotting.residual_overview(report, str(tmp_path / "r.png"))
    data = open(path, "rb").read()
    assert data[:8] == PNG_MAGIC and len(data) > 1000
    assert np.isfinite([e.max_rel for e in report.entries]).all()
