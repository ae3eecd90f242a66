"""CSV schemas shared by the library and the command-line front end.

All numeric fields are written with 9 significant digits and '\n' line
endings so identical inputs produce byte-identical files. Loaders accept
exactly the documented columns (in any order) and report unknown or
missing ones by name.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .coherence import CoherenceRecord
from .errors import ConfigError
from .readout import GROUND, EXCITED, ShotSet

SIGNIFICANT_DIGITS = 9


def format_number(value) -> str:
    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def write_csv(path, header, rows) -> Path:
    """Write rows of numbers/strings under a fixed header, deterministically."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else format_number(cell)
            for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def _read_rows(path, required, optional=()):
    path = Path(path)
    try:
        with open(path, newline="", encoding="ascii") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise ConfigError(f"{path}: empty file, expected a CSV header")
            fields = [name.strip() for name in reader.fieldnames]
            known = set(required) | set(optional)
            unknown = [name for name in fields if name not in known]
            if unknown:
                raise ConfigError(
                    f"{path}: unknown column(s) {', '.join(unknown)}")
            missing = [name for name in required if name not in fields]
            if missing:
                raise ConfigError(
                    f"{path}: missing required column(s) {', '.join(missing)}")
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return rows


def _parse_float(path, row_number, column, text):
    text = (text or "").strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(
            f"{path}: row {row_number}, column {column}: "
            f"not a number: {text!r}") from None


def _load_columns(path, columns):
    rows = _read_rows(path, required=columns)
    out = []
    for number, row in enumerate(rows, start=2):
        values = []
        for column in columns:
            value = _parse_float(path, number, column, row[column])
            if value is None:
                raise ConfigError(
                    f"{path}: row {number}, column {column}: empty value")
            values.append(value)
        out.append(values)
    arrays = tuple(np.array(col) for col in zip(*out))
    return arrays


def load_resonator_csv(path):
    """Measured spiral resonators: spiral_length_um, f_measured_ghz."""
    return _load_columns(path, ("spiral_length_um", "f_measured_ghz"))


def load_kappa_offset_csv(path):
    """Measured coupling versus feed offset: d_um, kappa_per_s."""
    return _load_columns(path, ("d_um", "kappa_per_s"))


def load_ringdown_csv(path):
    """Ring-down trace: t_s, v_amplitude."""
    return _load_columns(path, ("t_s", "v_amplitude"))


def load_coherence_csv(path) -> list[CoherenceRecord]:
    """Coherence records: f_q_ghz, t1_us and optional t1_spread_us, t2e_us."""
    rows = _read_rows(path, required=("f_q_ghz", "t1_us"),
                      optional=("t1_spread_us", "t2e_us"))
    records = []
    for number, row in enumerate(rows, start=2):
        f_q = _parse_float(path, number, "f_q_ghz", row["f_q_ghz"])
        t1 = _parse_float(path, number, "t1_us", row["t1_us"])
        if f_q is None or t1 is None:
            raise ConfigError(
                f"{path}: row {number}: f_q_ghz and t1_us must be set")
        spread = _parse_float(path, number, "t1_spread_us",
                              row.get("t1_spread_us"))
        t2e = _parse_float(path, number, "t2e_us", row.get("t2e_us"))
        records.append(CoherenceRecord(
            f_q=f_q * 1e9,
            t1=t1 * 1e-6,
            t1_spread=None if spread is None else spread * 1e-6,
            t2e=None if t2e is None else t2e * 1e-6,
        ))
    return records


def write_shots_csv(path, shots: ShotSet) -> Path:
    """Dump normalized IQ clouds as state,i,q rows (ground first)."""
    rows = [(GROUND, i, q) for i, q in zip(shots.i_ground, shots.q_ground)]
    rows += [(EXCITED, i, q) for i, q in zip(shots.i_excited, shots.q_excited)]
    return write_csv(path, ("state", "i", "q"), rows)


def load_shots_csv(path, sigma: float = 1.0) -> ShotSet:
    """Read a shot dump back into a ShotSet (assumed already normalized)."""
    rows = _read_rows(path, required=("state", "i", "q"))
    clouds = {GROUND: ([], []), EXCITED: ([], [])}
    for number, row in enumerate(rows, start=2):
        state = (row["state"] or "").strip()
        if state not in clouds:
            raise ConfigError(
                f"{path}: row {number}: state must be "
                f"'{GROUND}' or '{EXCITED}', got {state!r}")
        i = _parse_float(path, number, "i", row["i"])
        q = _parse_float(path, number, "q", row["q"])
        if i is None or q is None:
            raise ConfigError(f"{path}: row {number}: empty i or q value")
        clouds[state][0].append(i)
        clouds[state][1].append(q)
    return ShotSet(
        i_ground=np.array(clouds[GROUND][0]),
        q_ground=np.array(clouds[GROUND][1]),
        i_excited=np.array(clouds[EXCITED][0]),
        q_excited=np.array(clouds[EXCITED][1]),
        sigma=sigma,
    )


def load_sweep_csv(path):
    """Read back an SNR sweep table."""
    return _load_columns(path, ("tau_ns", "snr_eq1", "snr_mc", "fidelity"))
