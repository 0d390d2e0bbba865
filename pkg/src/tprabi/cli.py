"""Batch front-end: validated YAML run configs, CSV/JSON outputs, manifest.

A run configuration is a single YAML document with a versioned schema. Unknown
keys are rejected and every validation message names the offending field.
Outputs are deterministic for a fixed config (grids are generated in order and
rows assembled by grid index regardless of the worker count); files are
written atomically after the computation finishes.

Exit codes: 0 success, 2 configuration/validation error, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np
import scipy
import yaml

from . import __version__
from .circuit import (
    PHI0,
    CircuitParameterError,
    CircuitParams,
    capacitance_for_frequency,
    josephson_inductance,
    one_photon_coupling,
    phase_from_bias,
    quartic_ratio,
    squid_frequency,
    two_photon_coupling,
)
from .liouville import LindbladConfig, NonUniqueSteadyStateError
from .models import ModelConfigError, ModelSpec, SingularDetuningError
from .scattering import (
    DriveConfig,
    blockade_scan,
    transmission_scan,
    write_transmission_csv,
)
from .spectra import (
    IntervalError,
    coupling_scan,
    detect_collapse,
    write_spectrum_csv,
)

SCHEMA_VERSION = 1

COMMANDS = ("spectrum", "coupling-scan", "transmission-scan", "blockade-scan",
            "collapse", "circuit-params")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Configuration failed validation; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _check_mapping(obj, field: str, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(field, "must be a mapping")
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{field}.{key}", "unknown key")
    for key in required:
        if key not in obj:
            raise ConfigError(f"{field}.{key}", "required key missing")
    return obj


def _number(obj, field: str, minimum=None, maximum=None, integer=False):
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(field, f"must be a number, got {type(obj).__name__}")
    if integer and int(obj) != obj:
        raise ConfigError(field, "must be an integer")
    value = int(obj) if integer else float(obj)
    if minimum is not None and value < minimum:
        raise ConfigError(field, f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(field, f"must be <= {maximum}, got {value}")
    return value


def _choice(obj, field: str, choices):
    if obj not in choices:
        raise ConfigError(field, f"must be one of {sorted(choices)}, got {obj!r}")
    return obj


_MODEL_KEYS = {"variant", "omega_c", "omega_q", "g", "g2", "g4", "j_spin", "n_qubits"}


def _parse_model(cfg: dict) -> ModelSpec:
    section = _check_mapping(cfg.get("model"), "model", _MODEL_KEYS, {"variant"})
    kwargs = {"variant": section["variant"]}
    for key in ("omega_c", "omega_q", "g", "g2", "g4", "j_spin"):
        if key in section:
            kwargs[key] = _number(section[key], f"model.{key}")
    if "n_qubits" in section:
        kwargs["n_qubits"] = _number(section["n_qubits"], "model.n_qubits",
                                     minimum=1, integer=True)
    try:
        return ModelSpec(**kwargs)
    except ModelConfigError as err:
        raise ConfigError("model", str(err)) from err


_DRIVE_KEYS = {"target", "omega_d", "intensity", "intensity_unit",
               "gamma", "gamma_q", "gamma_phi"}


def _parse_drive(cfg: dict, spec: ModelSpec, need_omega_d: bool,
                 need_intensity: bool) -> DriveConfig:
    required = {"target", "gamma"}
    if need_omega_d:
        required.add("omega_d")
    if need_intensity:
        required.add("intensity")
    section = _check_mapping(cfg.get("drive"), "drive", _DRIVE_KEYS, required)
    target = _choice(section["target"], "drive.target", ("cavity", "qubit"))
    gamma = _number(section["gamma"], "drive.gamma", minimum=0.0)
    if gamma == 0.0:
        raise ConfigError("drive.gamma", "cavity decay must be > 0 for scans")
    rates = LindbladConfig(
        gamma=gamma,
        gamma_q=_number(section.get("gamma_q", 0.0), "drive.gamma_q", minimum=0.0),
        gamma_phi=_number(section.get("gamma_phi", 0.0), "drive.gamma_phi",
                          minimum=0.0),
    )
    unit = _choice(section.get("intensity_unit", "gamma"), "drive.intensity_unit",
                   ("gamma", "omega_c"))
    scale = gamma if unit == "gamma" else spec.omega_c
    intensity = _number(section.get("intensity", 0.0), "drive.intensity",
                        minimum=0.0) * scale
    omega_d = _number(section.get("omega_d", 2.0 * spec.omega_c), "drive.omega_d",
                      minimum=1e-12)
    return DriveConfig(target=target, omega_d=omega_d, intensity=intensity,
                       lindblad=rates)


def _parse_grid(cfg: dict, field: str = "scan") -> np.ndarray:
    section = _check_mapping(cfg.get(field), field,
                             {"start", "stop", "points", "log"},
                             {"start", "stop", "points"})
    start = _number(section["start"], f"{field}.start")
    stop = _number(section["stop"], f"{field}.stop")
    points = _number(section["points"], f"{field}.points", minimum=1, integer=True)
    log = section.get("log", False)
    if not isinstance(log, bool):
        raise ConfigError(f"{field}.log", "must be a boolean")
    if stop < start:
        raise ConfigError(f"{field}.stop", "must be >= start")
    if log:
        if start <= 0:
            raise ConfigError(f"{field}.start", "log grid needs start > 0")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


_NUMERICS_KEYS = {"cutoff", "k_levels"}


def _parse_numerics(cfg: dict, default_cutoff: int = 20) -> dict:
    section = _check_mapping(cfg.get("numerics", {}), "numerics",
                             _NUMERICS_KEYS, set())
    return {
        "cutoff": _number(section.get("cutoff", default_cutoff), "numerics.cutoff",
                          minimum=2, integer=True),
        "k_levels": _number(section.get("k_levels", 10), "numerics.k_levels",
                            minimum=1, integer=True),
    }


_TOP_KEYS = {"schema_version", "command", "model", "drive", "scan", "search",
             "numerics", "circuit", "output"}


def validate_config(cfg) -> str:
    """Top-level schema check; returns the command name."""
    _check_mapping(cfg, "config", _TOP_KEYS, {"schema_version", "command", "output"})
    version = _number(cfg["schema_version"], "schema_version", integer=True)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"supported version is {SCHEMA_VERSION}")
    command = _choice(cfg["command"], "command", COMMANDS)
    _check_mapping(cfg.get("output"), "output", {"directory", "format"},
                   {"directory"})
    _choice(cfg["output"].get("format", "csv"), "output.format", ("csv", "json"))
    return command


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _scan_to_json(scan) -> str:
    k = scan.levels.shape[1]
    rows = []
    for i, x in enumerate(scan.grid):
        row = {scan.parameter_name: float(x), "converged": bool(scan.converged[i])}
        for j in range(k):
            row[f"level_{j}"] = float(scan.levels[i, j])
            row[f"parity_{j}"] = float(scan.parities[i, j])
        rows.append(row)
    return json.dumps(rows, indent=1)


def _points_to_json(points) -> str:
    rows = [{
        "omega_d": p.omega_d, "D": p.intensity, "T": p.t_value,
        "g2": p.g2, "g3": p.g3, "n_out": p.n_out, "converged": p.converged,
    } for p in points]
    return json.dumps(rows, indent=1)


def run(cfg: dict, out_dir: str | None = None, workers: int | None = None,
        seed: int | None = None) -> dict:
    """Execute a validated config; returns the manifest dictionary."""
    command = validate_config(cfg)
    directory = out_dir or cfg["output"]["directory"]
    fmt = cfg["output"].get("format", "csv")
    workers = workers or (os.cpu_count() or 1)
    start_time = time.monotonic()
    os.makedirs(directory, exist_ok=True)
    outputs: list[str] = []
    convergence_ok = True

    def emit(name: str, text: str) -> None:
        path = os.path.join(directory, name)
        _atomic_write(path, text)
        outputs.append(name)

    if command == "spectrum":
        spec = _parse_model(cfg)
        numerics = _parse_numerics(cfg, default_cutoff=60)
        scan = coupling_scan(spec, [spec.coupling], k=numerics["k_levels"],
                             cutoff=numerics["cutoff"], workers=workers)
        convergence_ok = bool(scan.converged.all())
        if fmt == "csv":
            path = os.path.join(directory, "spectrum.csv")
            write_spectrum_csv(scan, path + ".tmp")
            os.replace(path + ".tmp", path)
            outputs.append("spectrum.csv")
        else:
            emit("spectrum.json", _scan_to_json(scan))

    elif command == "coupling-scan":
        spec = _parse_model(cfg)
        numerics = _parse_numerics(cfg, default_cutoff=60)
        grid = _parse_grid(cfg)
        scan = coupling_scan(spec, grid, k=numerics["k_levels"],
                             cutoff=numerics["cutoff"], workers=workers)
        convergence_ok = bool(scan.converged.all())
        if fmt == "csv":
            path = os.path.join(directory, "coupling_scan.csv")
            write_spectrum_csv(scan, path + ".tmp")
            os.replace(path + ".tmp", path)
            outputs.append("coupling_scan.csv")
        else:
            emit("coupling_scan.json", _scan_to_json(scan))

    elif command == "transmission-scan":
        spec = _parse_model(cfg)
        numerics = _parse_numerics(cfg)
        drive = _parse_drive(cfg, spec, need_omega_d=False, need_intensity=True)
        grid = _parse_grid(cfg)
        points = transmission_scan(spec, drive, grid, cutoff=numerics["cutoff"],
                                   workers=workers)
        convergence_ok = all(p.converged for p in points)
        if fmt == "csv":
            path = os.path.join(directory, "transmission_scan.csv")
            write_transmission_csv(points, path + ".tmp")
            os.replace(path + ".tmp", path)
            outputs.append("transmission_scan.csv")
        else:
            emit("transmission_scan.json", _points_to_json(points))

    elif command == "blockade-scan":
        spec = _parse_model(cfg)
        numerics = _parse_numerics(cfg)
        drive = _parse_drive(cfg, spec, need_omega_d=True, need_intensity=False)
        grid = _parse_grid(cfg) * drive.lindblad.gamma
        points = blockade_scan(spec, drive, grid, cutoff=numerics["cutoff"],
                               workers=workers)
        convergence_ok = all(p.converged for p in points)
        if fmt == "csv":
            path = os.path.join(directory, "blockade_scan.csv")
            write_transmission_csv(points, path + ".tmp")
            os.replace(path + ".tmp", path)
            outputs.append("blockade_scan.csv")
        else:
            emit("blockade_scan.json", _points_to_json(points))

    elif command == "collapse":
        spec = _parse_model(cfg)
        numerics = _parse_numerics(cfg, default_cutoff=150)
        section = _check_mapping(cfg.get("search"), "search",
                                 {"lower", "upper"}, {"lower", "upper"})
        lower = _number(section["lower"], "search.lower", minimum=0.0)
        upper = _number(section["upper"], "search.upper", minimum=0.0)
        est = detect_collapse(spec, (lower, upper), cutoff=numerics["cutoff"])
        emit("collapse.json", json.dumps({
            "g_col": est.g_col,
            "bracket_low": est.bracket_low,
            "bracket_high": est.bracket_high,
            "cutoff": est.cutoff,
        }, indent=1))

    elif command == "circuit-params":
        emit("circuit_params.json", json.dumps(_run_circuit(cfg), indent=1))

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config_sha256": hashlib.sha256(
            json.dumps(cfg, sort_keys=True).encode()).hexdigest(),
        "tprabi_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "python_version": sys.version.split()[0],
        "workers": workers,
        "seed": seed,
        "wall_time_s": round(time.monotonic() - start_time, 6),
        "all_points_converged": convergence_ok,
        "outputs": outputs,
    }
    _atomic_write(os.path.join(directory, "manifest.json"),
                  json.dumps(manifest, indent=1))
    return manifest


_CIRCUIT_KEYS = {"i_c_ua", "c_sq_ff", "freq_ghz", "m_ph", "i_p_na",
                 "flux_phi0", "i_b_ua"}


def _run_circuit(cfg: dict) -> dict:
    section = _check_mapping(cfg.get("circuit"), "circuit", _CIRCUIT_KEYS,
                             {"i_c_ua"})
    if ("c_sq_ff" in section) == ("freq_ghz" in section):
        raise ConfigError("circuit", "give exactly one of c_sq_ff or freq_ghz")
    i_c = _number(section["i_c_ua"], "circuit.i_c_ua", minimum=1e-12) * 1e-6
    m = _number(section.get("m_ph", 0.0), "circuit.m_ph", minimum=0.0) * 1e-12
    i_p = _number(section.get("i_p_na", 0.0), "circuit.i_p_na", minimum=0.0) * 1e-9
    flux = _number(section.get("flux_phi0", 0.0), "circuit.flux_phi0",
                   minimum=-0.5, maximum=0.5) * PHI0
    i_b = _number(section.get("i_b_ua", 0.0), "circuit.i_b_ua") * 1e-6
    try:
        if "c_sq_ff" in section:
            c_sq = _number(section["c_sq_ff"], "circuit.c_sq_ff", minimum=1e-6) * 1e-15
        else:
            freq = _number(section["freq_ghz"], "circuit.freq_ghz", minimum=1e-6)
            probe = CircuitParams(i_c=i_c, c_sq=1e-12, flux_dc=flux)
            c_sq = capacitance_for_frequency(probe, 2.0 * math.pi * freq * 1e9)
        params = CircuitParams(i_c=i_c, c_sq=c_sq, m=m, i_p=i_p, flux_dc=flux,
                               i_b=i_b)
        phase = phase_from_bias(params) if i_b else 0.0
        biased = CircuitParams(i_c=i_c, c_sq=c_sq, m=m, i_p=i_p, flux_dc=flux,
                               phase_dc=phase, i_b=i_b)
        omega = squid_frequency(biased)
        report = {
            "l_j_henry": josephson_inductance(biased),
            "omega_sq_rad_s": omega,
            "f_sq_ghz": omega / (2.0 * math.pi * 1e9),
            "g1_rad_s": one_photon_coupling(biased),
            "g2_rad_s": two_photon_coupling(params) if phase == 0.0 else None,
            "quartic_over_g2": quartic_ratio(biased),
            "phase_dc_rad": phase,
        }
        if report["g2_rad_s"] is not None:
            report["g2_over_omega_sq"] = report["g2_rad_s"] / omega
        return report
    except CircuitParameterError as err:
        raise ConfigError("circuit", str(err)) from err


def _error_report(kind: str, message: str, field: str | None = None) -> str:
    body = {"error": kind, "message": message}
    if field:
        body["field"] = field
    return json.dumps(body, indent=1)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tprabi",
        description="Two-photon quantum Rabi model simulation runner")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=f"run a {name} configuration")
        cmd.add_argument("--config", required=True, help="YAML run configuration")
        cmd.add_argument("--out", default=None, help="output directory override")
        cmd.add_argument("--workers", type=int, default=None,
                         help="parallel scan workers (default: cpu count)")
        cmd.add_argument("--seed", type=int, default=None,
                         help="reserved; recorded in the manifest")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            cfg = yaml.safe_load(fh)
    except OSError as err:
        print(_error_report("io", f"cannot read config: {err}"), file=sys.stderr)
        return EXIT_IO
    except yaml.YAMLError as err:
        print(_error_report("validation", f"config is not valid YAML: {err}"),
              file=sys.stderr)
        return EXIT_VALIDATION

    try:
        command = validate_config(cfg)
        if command != args.command:
            raise ConfigError("command",
                              f"config says {command!r}, invoked as {args.command!r}")
        manifest = run(cfg, out_dir=args.out, workers=args.workers, seed=args.seed)
    except ConfigError as err:
        print(_error_report("validation", str(err), err.field), file=sys.stderr)
        return EXIT_VALIDATION
    except (ModelConfigError, SingularDetuningError) as err:
        print(_error_report("validation", str(err)), file=sys.stderr)
        return EXIT_VALIDATION
    except (NonUniqueSteadyStateError, IntervalError) as err:
        print(_error_report("numerical", str(err)), file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(_error_report("io", str(err)), file=sys.stderr)
        return EXIT_IO

    print(json.dumps(manifest, indent=1))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
