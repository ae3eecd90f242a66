"""Layered key-value run configuration.

Files use INI-style sections of ``key = value`` pairs. Unknown sections or
keys are errors; missing optional keys take the defaults listed below.
Units follow the device vocabulary: GHz, MHz, kHz, um, fF, ns, us, pH per
square. Conversion to SI happens exactly once, inside the command
builders.

Sections and keys (defaults in parentheses, '-' marks required keys):

[geometry]   disk_radius_um -, line_width_um -, gap_um -, turns -,
             feed_offset_um (20), spiral_length_um (derived from turns)
[film]       lk_nominal_ph_sq (2.0), lk_low_ph_sq (lk_nominal),
             lk_high_ph_sq (lk_nominal), geometric_l_per_square_ph_sq (0)
[resonator]  c_total_ff -, q_coupling (none), q_internal (1e6),
             kappa0_per_s (none), d0_um (none)
[sweep]      length_min_um -, length_max_um -, points (25),
             measured_csv (none)
[lk]         cpw_length_um -, l_per_m_nh -, c_per_m_pf -,
             measured_f_ghz -, line_width_um -,
             geometric_l_per_square_ph_sq (0),
             termination (quarter-wave)
[kappa_fit]  trace_csv (none), offset_csv (none); at least one required
[loss]       q_diel -, f_q_min_ghz (3.5), f_q_max_ghz (4.8), points (25),
             gamma_phi_per_s (0), coherence_csv (for fit-qdiel),
             purcell_g_mhz (none), purcell_f_r_ghz (none),
             purcell_kappa_inv_ns (none),
             purcell_two_chi_khz (none), purcell_ref_f_q_ghz (none),
             anharmonicity_ghz (none)
[readout]    kappa_inv_ns (300), two_chi_khz (930), tau_m_ns (700),
             epsilon_per_s (calibrated), target_snr (5.0),
             n_shots (10000), transient (false),
             tau_list_ns (175, 350, 700, 1400, 2800)
[run]        seed (0), output_dir (none), emit_plots (false)
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError

ENV_OUTPUT_DIR = "CQEDKIT_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "cqedkit-out"

_REQUIRED = object()


@dataclass(frozen=True)
class Key:
    parse: str                      # float | int | bool | str | float_list
    default: Any = _REQUIRED
    positive: bool = False
    nonnegative: bool = False

    @property
    def required(self) -> bool:
        return self.default is _REQUIRED


SCHEMA: dict[str, dict[str, Key]] = {
    "geometry": {
        "disk_radius_um": Key("float", positive=True),
        "line_width_um": Key("float", positive=True),
        "gap_um": Key("float", positive=True),
        "feed_offset_um": Key("float", default=20.0, nonnegative=True),
        "turns": Key("float", positive=True),
        "spiral_length_um": Key("float", default=None, positive=True),
    },
    "film": {
        "lk_nominal_ph_sq": Key("float", default=2.0, positive=True),
        "lk_low_ph_sq": Key("float", default=None, positive=True),
        "lk_high_ph_sq": Key("float", default=None, positive=True),
        "geometric_l_per_square_ph_sq": Key("float", default=0.0, nonnegative=True),
    },
    "resonator": {
        "c_total_ff": Key("float", positive=True),
        "q_coupling": Key("float", default=None, positive=True),
        "q_internal": Key("float", default=1e6, positive=True),
        "kappa0_per_s": Key("float", default=None, positive=True),
        "d0_um": Key("float", default=None, positive=True),
    },
    "sweep": {
        "length_min_um": Key("float", positive=True),
        "length_max_um": Key("float", positive=True),
        "points": Key("int", default=25, positive=True),
        "measured_csv": Key("str", default=None),
    },
    "lk": {
        "cpw_length_um": Key("float", positive=True),
        "l_per_m_nh": Key("float", nonnegative=True),
        "c_per_m_pf": Key("float", positive=True),
        "measured_f_ghz": Key("float", positive=True),
        "line_width_um": Key("float", positive=True),
        "geometric_l_per_square_ph_sq": Key("float", default=0.0, nonnegative=True),
        "termination": Key("str", default="quarter-wave"),
    },
    "kappa_fit": {
        "trace_csv": Key("str", default=None),
        "offset_csv": Key("str", default=None),
    },
    "loss": {
        "q_diel": Key("float", default=None, positive=True),
        "f_q_min_ghz": Key("float", default=3.5, positive=True),
        "f_q_max_ghz": Key("float", default=4.8, positive=True),
        "points": Key("int", default=25, positive=True),
        "gamma_phi_per_s": Key("float", default=0.0, nonnegative=True),
        "coherence_csv": Key("str", default=None),
        "purcell_g_mhz": Key("float", default=None, nonnegative=True),
        "purcell_f_r_ghz": Key("float", default=None, positive=True),
        "purcell_kappa_inv_ns": Key("float", default=None, positive=True),
        "purcell_two_chi_khz": Key("float", default=None),
        "purcell_ref_f_q_ghz": Key("float", default=None, positive=True),
        "anharmonicity_ghz": Key("float", default=None),
    },
    "readout": {
        "kappa_inv_ns": Key("float", default=300.0, positive=True),
        "two_chi_khz": Key("float", default=930.0),
        "tau_m_ns": Key("float", default=700.0, positive=True),
        "epsilon_per_s": Key("float", default=None, nonnegative=True),
        "target_snr": Key("float", default=5.0, nonnegative=True),
        "n_shots": Key("int", default=10_000, positive=True),
        "transient": Key("bool", default=False),
        "tau_list_ns": Key("float_list",
                           default=(175.0, 350.0, 700.0, 1400.0, 2800.0)),
    },
    "run": {
        "seed": Key("int", default=0, nonnegative=True),
        "output_dir": Key("str", default=None),
        "emit_plots": Key("bool", default=False),
    },
}

_BOOL_WORDS = {"true": True, "yes": True, "on": True, "1": True,
               "false": False, "no": False, "off": False, "0": False}


def _parse_value(section: str, key: str, spec: Key, text: str):
    label = f"[{section}] {key}"
    text = text.strip()
    try:
        if spec.parse == "float":
            value = float(text)
        elif spec.parse == "int":
            value = int(text, 10)
        elif spec.parse == "bool":
            try:
                value = _BOOL_WORDS[text.lower()]
            except KeyError:
                raise ValueError(text)
        elif spec.parse == "float_list":
            items = [piece for piece in text.replace(",", " ").split() if piece]
            if not items:
                raise ValueError("empty list")
            value = tuple(float(piece) for piece in items)
        else:
            value = text
    except ValueError:
        raise ConfigError(
            f"{label}: cannot parse {text!r} as {spec.parse}") from None
    if spec.parse in ("float", "int"):
        if spec.positive and value <= 0:
            raise ConfigError(f"{label}: must be positive, got {value}")
        if spec.nonnegative and value < 0:
            raise ConfigError(f"{label}: must be nonnegative, got {value}")
    if spec.parse == "float_list" and any(v <= 0 for v in value):
        raise ConfigError(f"{label}: all entries must be positive")
    return value


@dataclass
class RunConfig:
    """Fully resolved configuration: every present section with defaults filled."""

    source: Path
    sections: dict[str, dict[str, Any]] = field(default_factory=dict)
    seed: int = 0
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    emit_plots: bool = False

    def has(self, section: str) -> bool:
        return section in self.sections

    def require(self, section: str) -> dict[str, Any]:
        if section not in self.sections:
            raise ConfigError(
                f"missing required config section [{section}]")
        return self.sections[section]

    def get(self, section: str, key: str):
        return self.require(section)[key]


def _resolve_section(name: str, raw: dict[str, str]) -> dict[str, Any]:
    schema = SCHEMA[name]
    unknown = [key for key in raw if key not in schema]
    if unknown:
        raise ConfigError(
            f"[{name}]: unknown key(s) {', '.join(sorted(unknown))}")
    resolved: dict[str, Any] = {}
    for key, spec in schema.items():
        if key in raw:
            resolved[key] = _parse_value(name, key, spec, raw[key])
        elif spec.required:
            raise ConfigError(f"[{name}]: missing required key {key}")
        else:
            resolved[key] = spec.default
    return resolved


def _cross_validate(name: str, values: dict[str, Any]) -> None:
    if name == "film":
        nominal = values["lk_nominal_ph_sq"]
        if values["lk_low_ph_sq"] is None:
            values["lk_low_ph_sq"] = nominal
        if values["lk_high_ph_sq"] is None:
            values["lk_high_ph_sq"] = nominal
        if not (values["lk_low_ph_sq"] <= nominal <= values["lk_high_ph_sq"]):
            raise ConfigError(
                "[film]: band constraint lk_low_ph_sq <= lk_nominal_ph_sq "
                "<= lk_high_ph_sq violated")
    elif name == "sweep":
        if values["length_min_um"] >= values["length_max_um"]:
            raise ConfigError(
                "[sweep]: length_min_um must be below length_max_um")
    elif name == "kappa_fit":
        if values["trace_csv"] is None and values["offset_csv"] is None:
            raise ConfigError(
                "[kappa_fit]: set trace_csv and/or offset_csv")
    elif name == "loss":
        g_route = values["purcell_g_mhz"] is not None
        chi_route = values["purcell_two_chi_khz"] is not None
        if g_route and chi_route:
            raise ConfigError(
                "[loss]: give purcell_g_mhz or purcell_two_chi_khz, not both")
        if chi_route and (values["purcell_ref_f_q_ghz"] is None
                          or values["anharmonicity_ghz"] is None):
            raise ConfigError(
                "[loss]: purcell_two_chi_khz needs purcell_ref_f_q_ghz "
                "and anharmonicity_ghz")
        if (g_route or chi_route) and (
                values["purcell_f_r_ghz"] is None
                or values["purcell_kappa_inv_ns"] is None):
            raise ConfigError(
                "[loss]: a Purcell channel needs purcell_f_r_ghz and "
                "purcell_kappa_inv_ns")


def parse_config(path) -> RunConfig:
    """Parse and validate a config file into a RunConfig.

    Raises ConfigError with a line number on syntax errors, and with the
    offending key and constraint on validation errors.
    """
    path = Path(path)
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.ParsingError as exc:
        first = exc.errors[0] if getattr(exc, "errors", None) else None
        line = first[0] if first else "?"
        raise ConfigError(
            f"{path}: parse error at line {line}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from exc

    sections: dict[str, dict[str, Any]] = {}
    for name in parser.sections():
        if name not in SCHEMA:
            raise ConfigError(f"unknown config section [{name}]")
        resolved = _resolve_section(name, dict(parser[name]))
        _cross_validate(name, resolved)
        sections[name] = resolved

    run = sections.get("run", {key: spec.default
                               for key, spec in SCHEMA["run"].items()})
    output_dir = run.get("output_dir")
    if output_dir is None:
        output_dir = os.environ.get(ENV_OUTPUT_DIR, DEFAULT_OUTPUT_DIR)
    return RunConfig(
        source=path,
        sections=sections,
        seed=run.get("seed", 0),
        output_dir=Path(output_dir),
        emit_plots=bool(run.get("emit_plots", False)),
    )


def render_resolved(config: RunConfig) -> str:
    """Render the fully resolved configuration as reusable INI text."""
    lines = []
    for name in SCHEMA:
        if name not in config.sections and name != "run":
            continue
        lines.append(f"[{name}]")
        if name == "run":
            values = dict(config.sections.get("run", {}))
            values["seed"] = config.seed
            values["output_dir"] = str(config.output_dir)
            values["emit_plots"] = config.emit_plots
        else:
            values = config.sections[name]
        for key in SCHEMA[name]:
            value = values.get(key, SCHEMA[name][key].default)
            if value is None:
                continue
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, tuple):
                text = ", ".join(format(v, "g") for v in value)
            else:
                text = format(value, "g") if isinstance(value, float) else str(value)
            lines.append(f"{key} = {text}")
        lines.append("")
    return "\n".join(lines)
