import math
import os
from pathlib import Path

import numpy as np
import pytest

import kemosim as km

CONFIG_DIR = Path(os.environ.get("KEMOSIM_CONFIG_DIR", Path(__file__).resolve().parents[2] / "tools" / "configs"))


def test_singular_threshold():
    params = km.ModelParams(d=1.0, n_dim=2)
    for chi in (0.3, 0.5, 0.9, 1.5):
        rep = km.audit(km.SingularMotility(chi), params, 1e-3, 1e6)
        assert rep.inf_F == pytest.approx(1.0 / chi**2, abs=1e-9)
        assert rep.h3_ok == (chi < 1.0)


def test_motility_evaluation():
    fam = km.AlgebraicMotility(sigma=1.0, lam=1.0, alpha=0.5)
    assert km.eval_gamma(fam, 2.0) == pytest.approx(0.5)
    assert km.phi_bar(fam, 2.0) == pytest.approx(0.25)
    A, B, C = km.coeff_ABC(fam, km.ModelParams(), 1.5, 2.0)
    assert C > 0.0
    with pytest.raises(ValueError):
        km.eval_gamma(km.SingularMotility(0.5), 0.0)


def test_algebraic_threshold():
    inf_f, bounded, large = km.algebraic_threshold(1.0, 1.0, 0.5, 1.0, 0.1, 4)
    assert inf_f == 2.0
    assert bounded is False
    assert large is False


def test_field_roundtrip_and_mass():
    g = km.Grid([1.0, 1.0], [8, 8])
    u = np.linspace(0.5, 1.5, 64).reshape(8, 8)
    f = km.ScalarField(g, u)
    assert np.array_equal(f.to_numpy().reshape(-1), u.reshape(-1))
    assert km.integrate(km.ScalarField(g, np.ones(64))) == pytest.approx(1.0)


def test_run_conserves_mass():
    g = km.Grid([2.0, 2.0], [16, 16])
    x = (np.arange(16) + 0.5) / 8.0
    u = 1.0 + 0.5 * np.outer(np.cos(math.pi * x / 2), np.cos(math.pi * x / 2))
    s = km.State(km.ScalarField(g, u), km.ScalarField(g, np.ones(256)))
    out = km.run(s, km.SingularMotility(0.5), km.ModelParams(1.0, 2, [2.0, 2.0]), km.StepControl(), 0.5)
    assert out.status == km.RunStatus.Completed
    assert km.integrate(out.final_state.u) == pytest.approx(km.integrate(s.u), rel=1e-12)


def test_config_and_experiment(tmp_path):
    cfg = km.parse_config(str(CONFIG_DIR / "singular_bounded.toml"))
    assert km.parse_config_string(km.to_toml(cfg)) == cfg
    cfg.cells = [16, 16]
    cfg.horizon = 1.0
    res = km.run_experiment(cfg, str(tmp_path))
    assert res["status"] == km.RunStatus.Completed
    assert res["regime"] == "bounded"
    assert (tmp_path / "series.csv").exists()
    assert km.cmd_audit(cfg, str(tmp_path / "audit")) == 0


def test_config_errors():
    with pytest.raises(ValueError, match="alpha"):
        km.parse_config_string('[family]\nkind = "algebraic"\nalpha = 1.2\n[model]\nlengths = [1.0]\ncells = [8]\n')
