"""Round-trip and validation tests for the CSV schemas."""

import math

import numpy as np
import pytest

from cqedkit import ConfigError, ReadoutConfig, ShotSet, simulate_shots
from cqedkit.dataio import (
    format_number,
    load_coherence_csv,
    load_kappa_offset_csv,
    load_resonator_csv,
    load_ringdown_csv,
    load_shots_csv,
    load_sweep_csv,
    write_csv,
    write_shots_csv,
)


def test_format_number_nine_significant_digits():
    assert format_number(math.pi) == "3.14159265"
    assert format_number(1.0) == "1"
    assert format_number(1.23456789012e-7) == "1.23456789e-07"
    assert format_number(-2) == "-2"


def test_write_csv_deterministic(tmp_path):
    header = ("a", "b")
    rows = [(1.0, 2.5), (3.0 / 7.0, 1e-12)]
    first = (tmp_path / "one.csv")
    second = (tmp_path / "two.csv")
    write_csv(first, header, rows)
    write_csv(second, header, rows)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().splitlines()[0] == "a,b"


def test_resonator_csv_round_trip(tmp_path):
    path = tmp_path / "resonators.csv"
    lengths = np.array([900.0, 1100.0, 1300.0])
    freqs = np.array([2.31, 2.09, 1.93])
    write_csv(path, ("spiral_length_um", "f_measured_ghz"),
              list(zip(lengths, freqs)))
    got_lengths, got_freqs = load_resonator_csv(path)
    assert got_lengths == pytest.approx(lengths)
    assert got_freqs == pytest.approx(freqs)
    # serialize-parse-serialize is byte stable
    again = tmp_path / "again.csv"
    write_csv(again, ("spiral_length_um", "f_measured_ghz"),
              list(zip(got_lengths, got_freqs)))
    assert again.read_bytes() == path.read_bytes()


def test_kappa_offset_and_ringdown_round_trips(tmp_path):
    offsets = np.array([2.0, 10.0, 25.0])
    kappas = np.array([4.8e6, 2.1e6, 4.4e5])
    path = tmp_path / "kappa.csv"
    write_csv(path, ("d_um", "kappa_per_s"), list(zip(offsets, kappas)))
    got_d, got_k = load_kappa_offset_csv(path)
    assert got_d == pytest.approx(offsets)
    assert got_k == pytest.approx(kappas)

    t = np.linspace(0.0, 2e-6, 16)
    v = np.exp(-t / 600e-9)
    trace = tmp_path / "trace.csv"
    write_csv(trace, ("t_s", "v_amplitude"), list(zip(t, v)))
    got_t, got_v = load_ringdown_csv(trace)
    assert got_t == pytest.approx(t)
    assert got_v == pytest.approx(v, rel=1e-8)


def test_coherence_csv_optional_columns(tmp_path):
    path = tmp_path / "coherence.csv"
    path.write_text(
        "f_q_ghz,t1_us,t1_spread_us,t2e_us\n"
        "4.45,35.8,1.5,47\n"
        "4.0,29.7,,\n",
        encoding="ascii")
    records = load_coherence_csv(path)
    assert records[0].f_q == pytest.approx(4.45e9)
    assert records[0].t1 == pytest.approx(35.8e-6)
    assert records[0].t1_spread == pytest.approx(1.5e-6)
    assert records[0].t2e == pytest.approx(47e-6)
    assert records[1].t1_spread is None
    assert records[1].t2e is None


def test_coherence_csv_minimal_columns(tmp_path):
    path = tmp_path / "coherence.csv"
    path.write_text("f_q_ghz,t1_us\n4.0,29.7\n4.4,26.0\n", encoding="ascii")
    records = load_coherence_csv(path)
    assert len(records) == 2
    assert records[1].f_q == pytest.approx(4.4e9)


def test_shots_csv_round_trip(tmp_path):
    config = ReadoutConfig(epsilon=4.48e6, kappa=1.0 / 300e-9,
                           chi=math.pi * 930e3, tau_m=700e-9, n_shots=500)
    shots = simulate_shots(config)
    path = tmp_path / "shots.csv"
    write_shots_csv(path, shots)
    loaded = load_shots_csv(path, sigma=shots.sigma)
    assert loaded.sigma == shots.sigma
    assert loaded.i_ground == pytest.approx(shots.i_ground, rel=1e-8)
    assert loaded.q_excited == pytest.approx(shots.q_excited, rel=1e-8)
    # rewriting the loaded set reproduces the file byte for byte
    again = tmp_path / "again.csv"
    write_shots_csv(again, loaded)
    assert again.read_bytes() == path.read_bytes()


def test_shots_csv_rejects_unknown_state(tmp_path):
    path = tmp_path / "shots.csv"
    path.write_text("state,i,q\ng,0.1,0.2\nz,0.3,0.4\n", encoding="ascii")
    with pytest.raises(ConfigError, match="state"):
        load_shots_csv(path)


def test_sweep_csv_round_trip(tmp_path):
    path = tmp_path / "sweep.csv"
    rows = [(175.0, 2.5, 2.4995, 0.9229), (700.0, 5.0, 4.98, 0.99959)]
    write_csv(path, ("tau_ns", "snr_eq1", "snr_mc", "fidelity"), rows)
    tau, eq1, mc, fid = load_sweep_csv(path)
    assert tau == pytest.approx([175.0, 700.0])
    assert eq1 == pytest.approx([2.5, 5.0])
    assert mc == pytest.approx([2.4995, 4.98])
    assert fid == pytest.approx([0.9229, 0.99959])


def test_unknown_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("d_um,kappa_per_s,extra\n1,2,3\n", encoding="ascii")
    with pytest.raises(ConfigError, match="unknown column.*extra"):
        load_kappa_offset_csv(path)


def test_missing_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("d_um\n1\n", encoding="ascii")
    with pytest.raises(ConfigError, match="missing required column.*kappa_per_s"):
        load_kappa_offset_csv(path)


def test_bad_number_reports_row_and_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("d_um,kappa_per_s\n1,2e6\noops,3e6\n", encoding="ascii")
    with pytest.raises(ConfigError, match="row 3, column d_um"):
        load_kappa_offset_csv(path)


def test_empty_inputs_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="ascii")
    with pytest.raises(ConfigError, match="empty file"):
        load_ringdown_csv(empty)
    header_only = tmp_path / "header.csv"
    header_only.write_text("t_s,v_amplitude\n", encoding="ascii")
    with pytest.raises(ConfigError, match="no data rows"):
        load_ringdown_csv(header_only)
    missing = tmp_path / "nothing.csv"
    with pytest.raises(ConfigError, match="cannot read"):
        load_ringdown_csv(missing)


def test_empty_cell_in_required_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t_s,v_amplitude\n0.0,\n", encoding="ascii")
    with pytest.raises(ConfigError, match="empty value"):
        load_ringdown_csv(path)


def test_shot_set_mismatched_arrays_rejected():
    with pytest.raises(Exception):
        ShotSet(i_ground=np.zeros(2), q_ground=np.zeros(2),
                i_excited=np.zeros(2), q_excited=np.zeros(3), sigma=1.0)
