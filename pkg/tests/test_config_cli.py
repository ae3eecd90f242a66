"""Configuration parsing and command-line behavior tests."""

import math

import numpy as np
import pytest

from cqedkit import ConfigError
from cqedkit.cli import main
from cqedkit.config import (
    DEFAULT_OUTPUT_DIR,
    ENV_OUTPUT_DIR,
    parse_config,
    render_resolved,
)
from cqedkit.dataio import write_csv

FULL_CONFIG = """
[geometry]
disk_radius_um = 40
line_width_um = 2
gap_um = 2
turns = 20

[film]
lk_nominal_ph_sq = 2.0
lk_low_ph_sq = 2.0
lk_high_ph_sq = 2.2

[resonator]
c_total_ff = 85
q_coupling = 1e4

[readout]
n_shots = 2000

[run]
seed = 3
"""


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text.strip() + "\n", encoding="utf-8")
    return path


def test_parse_minimal_config_fills_defaults(tmp_path):
    path = write_config(tmp_path, FULL_CONFIG)
    config = parse_config(path)
    assert config.seed == 3
    geometry = config.require("geometry")
    assert geometry["feed_offset_um"] == 20.0     # documented default
    assert geometry["spiral_length_um"] is None   # derived downstream
    readout = config.require("readout")
    assert readout["kappa_inv_ns"] == 300.0
    assert readout["two_chi_khz"] == 930.0
    assert readout["tau_m_ns"] == 700.0
    assert readout["target_snr"] == 5.0
    assert readout["n_shots"] == 2000
    assert readout["transient"] is False
    assert readout["tau_list_ns"] == (175.0, 350.0, 700.0, 1400.0, 2800.0)


def test_unknown_section_and_key_are_named(tmp_path):
    bad_section = write_config(tmp_path, "[nonsense]\nx = 1\n", "a.cfg")
    with pytest.raises(ConfigError, match=r"unknown config section \[nonsense\]"):
        parse_config(bad_section)
    bad_key = write_config(tmp_path, "[readout]\nshots = 3\n", "b.cfg")
    with pytest.raises(ConfigError, match=r"\[readout\]: unknown key.*shots"):
        parse_config(bad_key)


def test_missing_required_key_named(tmp_path):
    path = write_config(tmp_path, "[geometry]\ndisk_radius_um = 40\n")
    with pytest.raises(ConfigError,
                       match=r"\[geometry\]: missing required key line_width_um"):
        parse_config(path)


def test_type_and_sign_errors_name_the_key(tmp_path):
    bad_type = write_config(tmp_path, "[readout]\ntau_m_ns = soon\n", "a.cfg")
    with pytest.raises(ConfigError, match=r"\[readout\] tau_m_ns: cannot parse"):
        parse_config(bad_type)
    bad_sign = write_config(tmp_path, "[readout]\ntau_m_ns = -5\n", "b.cfg")
    with pytest.raises(ConfigError, match=r"\[readout\] tau_m_ns: must be positive"):
        parse_config(bad_sign)


def test_parse_error_reports_line_number(tmp_path):
    path = write_config(tmp_path, "[readout]\nthis line has no equals sign\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config(path)


def test_film_band_constraint_named(tmp_path):
    path = write_config(
        tmp_path,
        "[film]\nlk_nominal_ph_sq = 2.0\nlk_low_ph_sq = 2.1\nlk_high_ph_sq = 2.2\n")
    with pytest.raises(ConfigError, match="band constraint"):
        parse_config(path)


def test_sweep_ordering_constraint(tmp_path):
    path = write_config(
        tmp_path, "[sweep]\nlength_min_um = 900\nlength_max_um = 900\n")
    with pytest.raises(ConfigError, match="length_min_um must be below"):
        parse_config(path)


def test_loss_purcell_route_exclusivity(tmp_path):
    both = write_config(tmp_path, """
[loss]
q_diel = 1e6
purcell_g_mhz = 50
purcell_two_chi_khz = 930
purcell_f_r_ghz = 6
purcell_kappa_inv_ns = 300
purcell_ref_f_q_ghz = 4.2
anharmonicity_ghz = -0.23
""", "both.cfg")
    with pytest.raises(ConfigError, match="not both"):
        parse_config(both)
    incomplete = write_config(tmp_path, """
[loss]
q_diel = 1e6
purcell_two_chi_khz = 930
purcell_f_r_ghz = 6
purcell_kappa_inv_ns = 300
""", "incomplete.cfg")
    with pytest.raises(ConfigError, match="purcell_ref_f_q_ghz"):
        parse_config(incomplete)
    no_resonator = write_config(tmp_path, """
[loss]
q_diel = 1e6
purcell_g_mhz = 50
""", "nores.cfg")
    with pytest.raises(ConfigError, match="purcell_f_r_ghz"):
        parse_config(no_resonator)


def test_kappa_fit_requires_an_input(tmp_path):
    path = write_config(tmp_path, "[kappa_fit]\n")
    with pytest.raises(ConfigError, match="trace_csv and/or offset_csv"):
        parse_config(path)


def test_output_dir_resolution(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_OUTPUT_DIR, raising=False)
    plain = parse_config(write_config(tmp_path, FULL_CONFIG, "plain.cfg"))
    assert str(plain.output_dir) == DEFAULT_OUTPUT_DIR

    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path / "envdir"))
    via_env = parse_config(write_config(tmp_path, FULL_CONFIG, "env.cfg"))
    assert via_env.output_dir == tmp_path / "envdir"

    explicit = parse_config(write_config(
        tmp_path,
        FULL_CONFIG.replace("seed = 3", "seed = 3\noutput_dir = chosen"),
        "explicit.cfg"))
    assert str(explicit.output_dir) == "chosen"


def test_render_resolved_reparses_identically(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_OUTPUT_DIR, raising=False)
    source = write_config(tmp_path, FULL_CONFIG)
    config = parse_config(source)
    rendered = write_config(tmp_path, render_resolved(config), "resolved.cfg")
    reparsed = parse_config(rendered)
    # the rendered text pins the resolved output directory explicitly
    expected = {name: dict(values) for name, values in config.sections.items()}
    expected["run"]["output_dir"] = str(config.output_dir)
    assert reparsed.sections == expected
    assert reparsed.seed == config.seed
    assert reparsed.output_dir == config.output_dir


def _run(args):
    return main(args)


def test_cli_unknown_command_exits_with_usage_error(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    with pytest.raises(SystemExit) as exc:
        _run(["frobnicate", "--config", str(path)])
    assert exc.value.code == 2


def test_cli_error_line_is_machine_parsable(tmp_path, capsys):
    path = write_config(tmp_path, "[readout]\nshots = 3\n")
    rc = _run(["simulate-readout", "--config", str(path),
               "--out", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error: config: ")


def test_cli_missing_section_reports_error(tmp_path, capsys):
    path = write_config(tmp_path, "[readout]\nn_shots = 500\n")
    rc = _run(["design-resonator", "--config", str(path),
               "--out", str(tmp_path / "out")])
    assert rc == 1
    assert "error: config:" in capsys.readouterr().err


def test_cli_design_resonator(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    out = tmp_path / "out"
    rc = _run(["design-resonator", "--config", str(path), "--out", str(out)])
    assert rc == 0
    assert (out / "design.csv").exists()
    report = (out / "report.txt").read_text()
    assert "command: design-resonator" in report
    assert "seed: 3" in report
    assert "[geometry]" in report          # resolved config embedded
    assert "feed_offset_um = 20" in report


def test_cli_report_is_reusable_as_config(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    out = tmp_path / "out"
    assert _run(["design-resonator", "--config", str(path),
                 "--out", str(out)]) == 0
    report = (out / "report.txt").read_text()
    start = report.index("[geometry]")
    end = report.index("# results")
    replay = write_config(tmp_path, report[start:end], "replay.cfg")
    out2 = tmp_path / "out2"
    assert _run(["design-resonator", "--config", str(replay),
                 "--out", str(out2)]) == 0
    assert (out2 / "design.csv").read_bytes() == (out / "design.csv").read_bytes()


def test_cli_simulate_readout_seed_override(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_c = tmp_path / "c"
    assert _run(["simulate-readout", "--config", str(path), "--out", str(out_a)]) == 0
    assert _run(["simulate-readout", "--config", str(path), "--out", str(out_b)]) == 0
    assert _run(["simulate-readout", "--config", str(path), "--seed", "99",
                 "--out", str(out_c)]) == 0
    same = (out_a / "shots.csv").read_bytes()
    assert same == (out_b / "shots.csv").read_bytes()
    assert same != (out_c / "shots.csv").read_bytes()
    summary = (out_a / "readout_summary.csv").read_text().splitlines()
    assert summary[0].startswith("snr_eq1,snr_mc")


def test_cli_snr_sweep_row_values(tmp_path, capsys):
    path = write_config(tmp_path, FULL_CONFIG)
    out = tmp_path / "out"
    assert _run(["snr-sweep", "--config", str(path), "--out", str(out),
                 "--plots"]) == 0
    assert (out / "snr_sweep.svg").exists()
    lines = (out / "snr_sweep.csv").read_text().splitlines()
    assert lines[0] == "tau_ns,snr_eq1,snr_mc,fidelity"
    by_tau = {row.split(",")[0]: row.split(",") for row in lines[1:]}
    assert float(by_tau["700"][1]) == pytest.approx(5.0, rel=1e-9)
    assert float(by_tau["175"][1]) == pytest.approx(2.5, rel=1e-9)
    assert float(by_tau["2800"][1]) == pytest.approx(10.0, rel=1e-9)


def test_cli_budget_t1(tmp_path, capsys):
    config_text = FULL_CONFIG + """
[loss]
q_diel = 1e6
f_q_min_ghz = 4.45
f_q_max_ghz = 4.45
points = 1
"""
    path = write_config(tmp_path, config_text)
    out = tmp_path / "out"
    assert _run(["budget-t1", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "t1_budget.csv").read_text().splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert float(row["t1_total_us"]) == pytest.approx(35.8, rel=2e-3)


def test_cli_fit_lk(tmp_path, capsys):
    config_text = FULL_CONFIG + """
[lk]
cpw_length_um = 4000
l_per_m_nh = 400
c_per_m_pf = 160
line_width_um = 2
measured_f_ghz = {f_ghz}
"""
    # forward frequency for lk = 2.0 pH/sq on the same structure
    length = 4000e-6
    per_len = 4.0e-7          # 400 nH per metre
    per_cap = 1.6e-10         # 160 pF per metre
    sheet = 2.0e-12 / 2e-6
    f = 1.0 / (4.0 * length * math.sqrt((per_len + sheet) * per_cap))
    path = write_config(tmp_path, config_text.format(f_ghz=f / 1e9))
    out = tmp_path / "out"
    assert _run(["fit-lk", "--config", str(path), "--out", str(out)]) == 0
    lines = (out / "lk_extraction.csv").read_text().splitlines()
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(row["lk_ph_sq"]) == pytest.approx(2.0, rel=1e-6)


def test_cli_fit_kappa_and_qdiel(tmp_path, capsys):
    kappa = 1.0 / 300e-9
    t = np.linspace(0.0, 3e-6, 64)
    write_csv(tmp_path / "trace.csv", ("t_s", "v_amplitude"),
              list(zip(t, np.exp(-0.5 * kappa * t) + 0.05)))
    offsets = np.linspace(2.0, 40.0, 6)
    write_csv(tmp_path / "offsets.csv", ("d_um", "kappa_per_s"),
              list(zip(offsets, 5e6 * np.exp(-offsets / 12.0))))
    freqs = [3.5, 4.0, 4.45, 4.8]
    write_csv(tmp_path / "coherence.csv", ("f_q_ghz", "t1_us"),
              [(f, 1e6 / (2 * math.pi * f * 1e9) * 1e6) for f in freqs])
    config_text = FULL_CONFIG + """
[kappa_fit]
trace_csv = trace.csv
offset_csv = offsets.csv

[loss]
q_diel = 1e6
coherence_csv = coherence.csv
"""
    path = write_config(tmp_path, config_text)
    out = tmp_path / "out"
    assert _run(["fit-kappa", "--config", str(path), "--out", str(out)]) == 0
    ring = (out / "kappa_ringdown.csv").read_text().splitlines()
    row = dict(zip(ring[0].split(","), ring[1].split(",")))
    assert float(row["kappa_per_s"]) == pytest.approx(kappa, rel=1e-3)
    off = (out / "kappa_offset.csv").read_text().splitlines()
    row = dict(zip(off[0].split(","), off[1].split(",")))
    assert float(row["d0_um"]) == pytest.approx(12.0, rel=1e-3)

    assert _run(["fit-qdiel", "--config", str(path), "--out", str(out)]) == 0
    params = (out / "qdiel_params.csv").read_text().splitlines()
    row = dict(zip(params[0].split(","), params[1].split(",")))
    assert float(row["q_diel"]) == pytest.approx(1e6, rel=1e-4)


def test_cli_sweep_spiral_with_measurements(tmp_path, capsys):
    write_csv(tmp_path / "measured.csv", ("spiral_length_um", "f_measured_ghz"),
              [(900.0, 2.4), (1200.0, 2.1)])
    config_text = FULL_CONFIG + """
[sweep]
length_min_um = 800
length_max_um = 1400
points = 7
measured_csv = measured.csv
"""
    path = write_config(tmp_path, config_text)
    out = tmp_path / "out"
    assert _run(["sweep-spiral", "--config", str(path), "--out", str(out),
                 "--plots"]) == 0
    lines = (out / "spiral_sweep.csv").read_text().splitlines()
    assert len(lines) == 8
    svg = (out / "spiral_sweep.svg").read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
