"""Generate synthetic measurement CSVs plus a config that fits them.

Writes four input files (spiral resonance survey, coupling ring-down
trace, coupling vs feed offset, and a coherence table) into a target
directory together with ``fits.cfg``, which references them by relative
path. Afterwards the fit commands can be replayed directly:

    python3 scripts/make_demo_inputs.py demo-data
    python3 -m cqedkit fit-kappa --config demo-data/fits.cfg
    python3 -m cqedkit fit-qdiel --config demo-data/fits.cfg
    python3 -m cqedkit fit-lk    --config demo-data/fits.cfg
"""

import argparse
import math
from dataclasses import replace
from pathlib import Path

import numpy as np

from cqedkit import (
    CoherenceRecord,
    FilmProperties,
    LossModel,
    PurcellParams,
    build_spiral,
    dataio,
    frequency_band,
    t1_total,
    t2_from_t1,
)

TWO_PI = 2.0 * math.pi

# The generated coherence table includes a Purcell channel; fits.cfg
# declares the same channel so fit-qdiel recovers Q_DIEL unbiased.
Q_DIEL = 746e3
PURCELL = PurcellParams(g=TWO_PI * 50e6, f_r=6.0e9, kappa=1.0 / 300e-9)

FITS_CFG = """\
[lk]
cpw_length_um = 4000
l_per_m_nh = 400
c_per_m_pf = 160
measured_f_ghz = 4.176
line_width_um = 2

[kappa_fit]
trace_csv = ringdown.csv
offset_csv = kappa_offset.csv

[loss]
q_diel = 746e3
coherence_csv = coherence.csv
purcell_g_mhz = 50
purcell_f_r_ghz = 6.0
purcell_kappa_inv_ns = 300

[run]
seed = 7
"""


def write_spiral_survey(outdir: Path, rng) -> Path:
    film = FilmProperties(lk_nominal=2.0, lk_low=2.0, lk_high=2.2)
    base = build_spiral(disk_radius=40e-6, line_width=2e-6, gap=2e-6,
                        feed_offset=20e-6, turns=20.0)
    lengths_um = np.linspace(2000.0, 6000.0, 9)
    rows = []
    for length_um in lengths_um:
        geometry = replace(base, spiral_length=length_um * 1e-6)
        _, f_nominal, _ = frequency_band(geometry, film, 85e-15)
        measured = f_nominal * (1.0 + 0.004 * rng.standard_normal())
        rows.append([length_um, measured / 1e9])
    return dataio.write_csv(outdir / "spiral_measured.csv",
                            ["spiral_length_um", "f_measured_ghz"], rows)


def write_ringdown(outdir: Path, rng, kappa=1.0 / 300e-9) -> Path:
    t = np.linspace(0.0, 3e-6, 256)
    clean = np.exp(-0.5 * kappa * t) + 0.05
    trace = clean + 0.01 * rng.standard_normal(t.size)
    return dataio.write_csv(outdir / "ringdown.csv", ["t_s", "v_amplitude"],
                            np.column_stack([t, trace]))


def write_kappa_offset(outdir: Path, rng, kappa0=2.5e7, d0=12e-6) -> Path:
    offsets = np.linspace(5e-6, 45e-6, 6)
    kappas = kappa0 * np.exp(-offsets / d0)
    kappas *= 1.0 + 0.02 * rng.standard_normal(offsets.size)
    return dataio.write_csv(outdir / "kappa_offset.csv",
                            ["d_um", "kappa_per_s"],
                            np.column_stack([offsets * 1e6, kappas]))


def write_coherence(outdir: Path, rng, sigma_ln=0.05) -> Path:
    model = LossModel(q_diel=Q_DIEL, purcell=PURCELL)
    rows = []
    for f_q in np.linspace(3.5e9, 4.8e9, 12):
        t1 = t1_total(f_q, model) * math.exp(sigma_ln * rng.standard_normal())
        t2e = 0.94 * t2_from_t1(t1)
        rows.append([f_q / 1e9, t1 * 1e6, sigma_ln * t1 * 1e6, t2e * 1e6])
    return dataio.write_csv(outdir / "coherence.csv",
                            ["f_q_ghz", "t1_us", "t1_spread_us", "t2e_us"],
                            rows)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="demo-data",
                        help="directory for the generated files")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    written = [
        write_spiral_survey(outdir, rng),
        write_ringdown(outdir, rng),
        write_kappa_offset(outdir, rng),
        write_coherence(outdir, rng),
    ]
    config = outdir / "fits.cfg"
    config.write_text(FITS_CFG, encoding="ascii")
    written.append(config)

    for path in written:
        print(f"wrote {path}")
    print(f"next: python3 -m cqedkit fit-qdiel --config {config}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
