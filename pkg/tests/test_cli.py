import json
import math

import numpy as np
import pytest

from fps import PumpConfig, flux_hb
from fps.cli import PRESETS, load_scenario, main

ALL_PRESETS = ("fig1a", "fig1b", "fig2", "fig3", "fig4a", "fig4b")


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def data_rows(text):
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    assert "," in lines[0]  # column header
    return lines[0], [line.split(",") for line in lines[1:]]


def write_scenario(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


SMALL_SCALAR = {
    "fiber": {"gamma_per_W_km": 3.0, "beta2_ps2_per_km": -20.0, "length_km": 0.1},
    "pump": {"p0x_W": 0.3},
    "grid": {"omega_min": -2.0, "omega_max": 2.0, "n_points": 40},
    "regime": "HB",
    "method": "first-order",
}


def test_presets_lists_all(capsys):
    rc, out, _ = run(capsys, "presets")
    assert rc == 0
    assert set(json.loads(out)) == set(ALL_PRESETS)


def test_presets_single_name(capsys):
    rc, out, _ = run(capsys, "presets", "--name", "fig2")
    assert rc == 0
    payload = json.loads(out)
    assert list(payload) == ["fig2"]
    assert payload["fig2"]["fiber.delta_beta1_ps_per_km"] == 200.0


def test_presets_unknown_name(capsys):
    rc, _, err = run(capsys, "presets", "--name", "fig9")
    assert rc == 2
    assert "unknown preset" in err


@pytest.mark.parametrize("name", ALL_PRESETS)
def test_every_preset_validates(name):
    scenario, resolved = load_scenario(dict(PRESETS[name]))
    assert scenario.grid.is_symmetric
    assert not np.any(scenario.grid.omegas == 0.0)  # even count skips Omega=0
    assert resolved["method"] == PRESETS[name]["method"]


def test_spectrum_header_and_row_count(capsys):
    rc, out, _ = run(capsys, "spectrum", "--preset", "fig2")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "# fps spectrum"
    assert lines[1] == "# preset = fig2"
    for key in PRESETS["fig2"]:
        assert any(line.startswith(f"# {key} = ") for line in lines)
    assert any(line.startswith("# units = ") for line in lines)
    header, rows = data_rows(out)
    assert header == "omega_rad_per_ps,f_x,f_y,method,L_km"
    assert len(rows) == 600 * 3  # grid points x lengths
    assert rows[0][0] == "-15" and rows[0][3] == "first-order" and rows[0][4] == "0.1"
    assert {row[4] for row in rows} == {"0.1", "0.2", "0.3"}


def test_spectrum_values_round_trip(tmp_path, capsys):
    path = write_scenario(tmp_path, SMALL_SCALAR)
    rc, out, _ = run(capsys, "spectrum", "--scenario", path)
    assert rc == 0
    _, rows = data_rows(out)
    omegas = np.array([float(row[0]) for row in rows])
    f_x = np.array([float(row[1]) for row in rows])
    grid = np.linspace(-2.0, 2.0, 40)
    np.testing.assert_allclose(omegas, grid, rtol=1e-8)
    scenario, _ = load_scenario(
        {
            "fiber.gamma_per_W_km": 3.0,
            "fiber.beta2_ps2_per_km": -20.0,
            "fiber.length_km": 0.1,
            "pump.p0x_W": 0.3,
            "grid.omega_min": -2.0,
            "grid.omega_max": 2.0,
            "grid.n_points": 40,
            "regime": "HB",
        }
    )
    fiber_flux, _ = flux_hb(scenario.fiber, PumpConfig(p0x=0.3), grid)
    # CSV keeps 9 significant digits of the flux itself
    np.testing.assert_allclose(f_x, fiber_flux, rtol=1e-7)
    assert all(row[2] == "0" for row in rows)  # no y-axis flux


def test_spectrum_method_all_for_scalar_pump(tmp_path, capsys):
    scenario = dict(SMALL_SCALAR, method="all", lengths_km=[0.05, 0.1])
    path = write_scenario(tmp_path, scenario)
    rc, out, _ = run(capsys, "spectrum", "--scenario", path)
    assert rc == 0
    _, rows = data_rows(out)
    methods = {row[3] for row in rows}
    assert methods == {"first-order", "exact-ode", "closed-form"}
    assert len(rows) == 40 * 2 * 3
    # steps are reported once per exact-ode length
    assert out.count("# steps.L=") == 2


def test_spectrum_all_skips_closed_form_for_two_axis_pump(capsys):
    rc, out, _ = run(capsys, "spectrum", "--preset", "fig2", "--method", "all")
    assert rc == 0
    _, rows = data_rows(out)
    assert {row[3] for row in rows} == {"first-order", "exact-ode"}


def test_spectrum_deterministic_across_workers(tmp_path):
    scenario = dict(SMALL_SCALAR, method="all", lengths_km=[0.05, 0.1])
    path = write_scenario(tmp_path, scenario)
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    out_c = tmp_path / "c.csv"
    assert main(["spectrum", "--scenario", path, "--out", str(out_a)]) == 0
    assert main(
        ["spectrum", "--scenario", path, "--out", str(out_b), "--workers", "3"]
    ) == 0
    assert main(["spectrum", "--scenario", path, "--out", str(out_c)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes() == out_c.read_bytes()


def test_spectrum_undersized_step_count_fails(capsys):
    rc, _, err = run(
        capsys, "spectrum", "--preset", "fig2", "--method", "exact-ode", "--steps", "25"
    )
    assert rc == 3
    assert "numerical failure" in err


def test_spectrum_exact_preset_reports_steps(capsys):
    rc, out, _ = run(capsys, "spectrum", "--preset", "fig3")
    assert rc == 0
    assert out.count("# steps.L=") == 3


def test_spectrum_lb_preset(capsys):
    rc, out, _ = run(capsys, "spectrum", "--preset", "fig4a")
    assert rc == 0
    _, rows = data_rows(out)
    assert len(rows) == 640 * 3
    f_y = np.array([float(row[2]) for row in rows])
    assert f_y.max() > 0.0  # far-detuned orthogonal channel is present


def test_missing_scenario_file(capsys):
    rc, _, err = run(capsys, "spectrum", "--scenario", "/does/not/exist.json")
    assert rc == 2
    assert err.startswith("fps: error:")


def test_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("not json", encoding="utf-8")
    rc, _, err = run(capsys, "spectrum", "--scenario", str(path))
    assert rc == 2
    assert "not valid JSON" in err


def test_unknown_field(tmp_path, capsys):
    path = write_scenario(tmp_path, dict(SMALL_SCALAR, fibre="typo"))
    rc, _, err = run(capsys, "spectrum", "--scenario", str(path))
    assert rc == 2
    assert "unknown scenario field" in err


@pytest.mark.parametrize(
    "patch",
    [
        {"fiber": {**SMALL_SCALAR["fiber"], "gamma_per_W_km": -3.0}},
        {"grid": {**SMALL_SCALAR["grid"], "n_points": 1}},
        {"pump": {"p0x_W": 0.0}},
        {"regime": "LB", "pump": {"p0x_W": 0.3, "p0y_W": 0.3}},
        {"method": "simpson"},
        {"lengths_km": [0.1, -0.2]},
        {"fiber": {**SMALL_SCALAR["fiber"], "beta2_ps2_per_km": "fast"}},
    ],
)
def test_rejected_scenarios(tmp_path, capsys, patch):
    path = write_scenario(tmp_path, {**SMALL_SCALAR, **patch})
    rc, _, err = run(capsys, "spectrum", "--scenario", str(path))
    assert rc == 2
    assert err.startswith("fps: error:")


def test_closed_form_rejects_two_axis_pump(capsys):
    rc, _, err = run(capsys, "spectrum", "--preset", "fig2", "--method", "closed-form")
    assert rc == 2
    assert "single-axis" in err


def test_preset_and_scenario_are_exclusive(tmp_path, capsys):
    path = write_scenario(tmp_path, SMALL_SCALAR)
    rc, _, err = run(capsys, "spectrum", "--preset", "fig2", "--scenario", path)
    assert rc == 2
    assert "not both" in err
    rc, _, err = run(capsys, "spectrum")
    assert rc == 2
    assert "required" in err


def test_negative_group_mismatch_is_normalized(tmp_path, capsys):
    scenario = {
        "fiber": {
            "gamma_per_W_km": 3.0,
            "beta2_ps2_per_km": 15.0,
            "delta_beta1_ps_per_km": -200.0,
            "length_km": 0.2,
        },
        "pump": {"p0x_W": 0.05, "p0y_W": 0.25},
        "grid": {"omega_min": -15.0, "omega_max": 15.0, "n_points": 40},
        "regime": "HB",
    }
    path = write_scenario(tmp_path, scenario)
    rc, out, _ = run(capsys, "spectrum", "--scenario", path)
    assert rc == 0
    assert "# fiber.delta_beta1_ps_per_km = 200" in out
    assert "# pump.p0x_W = 0.25" in out
    assert "# pump.p0y_W = 0.05" in out


def test_mi_curve_output(capsys):
    rc, out, _ = run(capsys, "mi", "--preset", "fig1a")
    assert rc == 0
    assert "# pump_total_W = 0.3" in out
    ratio_line = next(
        line for line in out.splitlines() if line.startswith("# bandwidth_ratio = ")
    )
    expected = math.sqrt(2.0 / math.pi) * math.sqrt(0.9 * 0.1)
    assert float(ratio_line.split("=")[1]) == pytest.approx(expected, rel=1e-6)
    header, rows = data_rows(out)
    assert header == "omega_rad_per_ps,gain_per_km,lambda_re_per_km,lambda_im_per_km"
    gains = np.array([float(row[1]) for row in rows])
    omegas = np.array([float(row[0]) for row in rows])
    assert gains.max() == pytest.approx(0.9, abs=5e-4)
    assert np.all(gains[np.abs(omegas) > 0.43] == 0.0)


def test_mi_normal_dispersion_curve_is_zero(capsys):
    rc, out, _ = run(capsys, "mi", "--preset", "fig1b")
    assert rc == 0
    _, rows = data_rows(out)
    assert {row[1] for row in rows} == {"0"}


def test_classify_bell_like(capsys):
    rc, out, _ = run(capsys, "classify", "--preset", "fig2", "--omega", "1.0")
    assert rc == 0
    payload = json.loads(out)
    assert payload["classification"] == "bell-like"
    assert payload["concurrence"] >= 0.99
    assert abs(payload["relative_phase_rad"]) < 1e-9
    assert payload["bell_phase_rad"] == 0.0
    assert set(payload["coeff_abs2"]) == {"xx", "yy", "xy", "yx"}
    assert sum(payload["coeff_abs2"].values()) == pytest.approx(1.0)


def test_classify_vector_peak(capsys):
    omega = (200.0 + math.sqrt(200.0**2 - 4.0 * 15.0 * 0.9)) / 30.0
    rc, out, _ = run(capsys, "classify", "--preset", "fig2", "--omega", repr(omega))
    assert rc == 0
    payload = json.loads(out)
    assert payload["classification"] == "product-yx"
    assert payload["coeff_abs2"]["yx"] > 0.99


def test_classify_scalar_pump_has_null_phase(capsys):
    rc, out, _ = run(capsys, "classify", "--preset", "fig1a", "--omega", "1.0")
    assert rc == 0
    payload = json.loads(out)
    assert payload["classification"] == "scalar-only-x"
    assert payload["relative_phase_rad"] is None


def test_classify_unequal_split_is_partial(tmp_path, capsys):
    scenario = {
        "fiber": {
            "gamma_per_W_km": 3.0,
            "beta2_ps2_per_km": 15.0,
            "delta_beta1_ps_per_km": 200.0,
            "length_km": 0.2,
        },
        "pump": {"p0x_W": 0.25, "p0y_W": 0.05, "duration_ps": 100.0},
        "grid": {"omega_min": -15.0, "omega_max": 15.0, "n_points": 40},
        "regime": "HB",
    }
    path = write_scenario(tmp_path, scenario)
    rc, out, _ = run(capsys, "classify", "--scenario", path, "--omega", "1.0")
    assert rc == 0
    assert json.loads(out)["classification"] == "partial"


def test_classify_duration_handling(tmp_path, capsys):
    path = write_scenario(tmp_path, SMALL_SCALAR)  # no pump duration
    rc, _, err = run(capsys, "classify", "--scenario", path, "--omega", "1.0")
    assert rc == 2
    assert "--duration" in err
    rc, out, _ = run(
        capsys, "classify", "--scenario", path, "--omega", "1.0", "--duration", "50"
    )
    assert rc == 0
    assert json.loads(out)["duration_ps"] == 50.0


def test_classify_rejects_nonpositive_omega(capsys):
    rc, _, err = run(capsys, "classify", "--preset", "fig2", "--omega", "-1.0")
    assert rc == 2
    assert "omega" in err


def test_compare_report(capsys):
    rc, out, _ = run(capsys, "compare", "--preset", "fig1a")
    assert rc == 0
    report = json.loads(out)
    lengths = [entry["L_km"] for entry in report["comparisons"]]
    assert lengths == [0.1, 0.2, 0.3]
    devs = [entry["max_rel_dev"] for entry in report["comparisons"]]
    assert devs[0] <= 0.02
    assert devs[0] < devs[1] < devs[2]
    assert report["deviation_increases_with_length"] is True
    for entry in report["comparisons"]:
        assert 0.0 <= entry["mean_rel_dev"] <= entry["max_rel_dev"]
        assert entry["peak_flux"] > 0.0


def test_out_file_matches_stdout(tmp_path, capsys):
    rc, stdout_text, _ = run(capsys, "presets")
    assert rc == 0
    target = tmp_path / "presets.json"
    rc = main(["presets", "--out", str(target)])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out == ""
    assert target.read_text(encoding="utf-8") == stdout_text
