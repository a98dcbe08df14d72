import math
import os
import tempfile

import pytest

import monotone

CONFIG_DIR = os.environ.get(
    "MONOTONE_CONFIG_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "tools", "configs"),
)


def test_version():
    assert monotone.__version__.count(".") == 2


def test_models():
    assert monotone.Model.coupled_linear(0.0).F([2.0, 3.0]) == 6.0
    assert monotone.Model.coupled_linear(1.0).f([0.5, -2.0]) == [-2.0, 0.5]
    assert monotone.Model.single_power(3).F([2.0]) == 4.0
    assert monotone.Model.ginzburg_landau(0.5, 2).interior_integrand(3.0, [0.6, 0.8]) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(monotone.Error):
        monotone.Model.log_potential(0.0).F([-1.0])
    with pytest.raises(ValueError):
        monotone.Model.zero(2).F([1.0])


def test_beta_interval():
    rep = monotone.beta_interval(monotone.Model.single_power(0.5), [(0.0, 10.0)], 0.0, 8.0, 17)
    assert all(row["admissible"] == (row["beta"] >= 4.0) for row in rep["betas"])


def test_geometry():
    assert monotone.backward_heat_kernel(0.0, [0.0, 0.0], 1 / (4 * math.pi), [0.0, 0.0]) == pytest.approx(1.0)
    assert monotone.cutoff_profile(0.625) == 0.5
    assert monotone.error_integral_E(0.25, 1, 0.0) == pytest.approx(2 * math.sqrt(math.pi) * math.erfc(1.0), rel=1e-10)


def test_functionals():
    assert "gl_kink" in monotone.elliptic_catalog()
    assert "caloric_linear" in monotone.parabolic_catalog()
    v = monotone.phi("linear", monotone.Model.zero(), 3, 1.0, 0.7)
    assert abs(v["phi"]) < 1e-10
    assert v["vol_term"] == pytest.approx(4 * math.pi / 3)
    scan = monotone.phi_scan("x1x2", monotone.Model.zero(), 2, 2.0, 0.2, 1.0, 5)
    assert scan["summary"]["monotone_violations"] == 0
    p = monotone.psi("caloric_linear", monotone.Model.zero(), 1, 1.0, 1.0, 0.3)
    assert abs(p["psi"]) < 1e-8
    assert monotone.homogeneity_residual("linear", 2, 2.0, 0.1, 1.0) == pytest.approx(99 * math.pi, rel=1e-9)
    with pytest.raises(monotone.OutOfDomainError):
        monotone.psi("zero", monotone.Model.zero(), 1, 1.0, 1.0, -0.1)


def test_run_exit_codes():
    with tempfile.TemporaryDirectory() as out:
        ok = monotone.run(os.path.join(CONFIG_DIR, "verify_linear_sin.toml"), [f"output.dir={out}"])
        assert ok["exit_code"] == 0
        assert all(os.path.exists(f) for f in ok["files"])
        bad = monotone.run(os.path.join(CONFIG_DIR, "verify_noise.toml"), [f"output.dir={out}"])
        assert bad["exit_code"] == 2
        usage = monotone.run(os.path.join(CONFIG_DIR, "kernel_check.toml"), [f"output.dir={out}", "task.nope=1"])
        assert usage["exit_code"] == 1
