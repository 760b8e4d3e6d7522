"""Command-line front end: parse a run configuration, execute one
experiment, emit deterministic CSV traces and a summary on stdout.

Config files are plain key=value lines ('#' starts a comment); any key can
be overridden on the command line as --key value. Floats are written with
the shortest decimal that round-trips the binary value, so repeated runs
are byte-identical. Exit codes: 0 success, 1 config/io error, 2 numerical
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from .modes import ModeId, Port, basket_standard
from .optics import NOMINAL_SIDEBAND_HZ, analyser_unitary
from .states import (
    apply_unitary,
    sideband_photon,
    single_photon_transform,
    with_carrier,
)
from .measurement import (
    HomodyneParams,
    OsaParams,
    Trace,
    homodyne_scan,
    osa_scan,
    spectral_peaks,
)
from .experiments import (
    DRIVE_GAIN_DEFAULT,
    ImperfectionModel,
    InputKind,
    distinguish_inputs,
    fringe_visibility,
    make_input,
    sweep_drive,
    sweep_phi,
)

EXPERIMENTS = ("sweep-phi", "sweep-drive", "osa-scan", "homodyne-scan",
               "single-photon", "distinguish")

UNITARITY_GATE = 1e-12
RATIO_SLACK = 1e-9


class ConfigError(Exception):
    """Malformed or out-of-range run configuration."""


class InvariantViolation(Exception):
    """A numerical invariant failed during a run."""


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}") from None


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None


def _parse_complex(text: str) -> complex:
    try:
        return complex(text)
    except ValueError:
        raise ConfigError(f"expected a complex number like 0.5+0.5j, got {text!r}") from None


def _parse_optional_float(text: str):
    if text.strip().lower() == "none":
        return None
    return _parse_float(text)


def _parse_str(text: str) -> str:
    return text.strip()


# key -> (parser, default, help). Defaults are the documented bench values.
_KEYS = {
    "experiment": (_parse_str, None, "one of " + ", ".join(EXPERIMENTS)),
    "input_kind": (_parse_str, "pm", "pm | lsb | usb | am"),
    "beta": (_parse_float, 1.0, "modulation sideband amplitude"),
    "theta": (_parse_float, math.pi / 4, "diffraction angle, rad in [0, pi/2]"),
    "phi": (_parse_float, 0.0, "optical phase, rad"),
    "phi_start": (_parse_float, 0.0, "phase sweep start, rad"),
    "phi_stop": (_parse_float, 2 * math.pi, "phase sweep stop, rad"),
    "phi_count": (_parse_int, 73, "phase sweep samples"),
    "drive_start": (_parse_float, 0.0, "drive sweep start, W"),
    "drive_stop": (_parse_float, 0.35, "drive sweep stop, W"),
    "drive_count": (_parse_int, 36, "drive sweep samples"),
    "lo_start": (_parse_float, 0.0, "local-oscillator sweep start, rad"),
    "lo_stop": (_parse_float, 2 * math.pi, "local-oscillator sweep stop, rad"),
    "lo_count": (_parse_int, 73, "local-oscillator sweep samples"),
    "scan_start": (_parse_float, -1.0e8, "cavity scan start, Hz"),
    "scan_stop": (_parse_float, 4.2e8, "cavity scan stop, Hz"),
    "scan_count": (_parse_int, 5201, "cavity scan samples"),
    "fsr": (_parse_float, 500e6, "cavity free spectral range, Hz"),
    "linewidth": (_parse_float, 2e6, "cavity linewidth, Hz"),
    "mismatch_fraction": (_parse_float, 0.05, "mode-mismatch power fraction"),
    "sideband_hz": (_parse_float, NOMINAL_SIDEBAND_HZ, "sideband spacing, Hz"),
    "carrier_power": (_parse_float, 100.0, "carrier power at the input, arb"),
    "attenuation": (_parse_float, 4.0, "input-tap power attenuation, >= 1"),
    "visibility_umzi": (_parse_float, 0.98, "interferometer fringe visibility"),
    "visibility_aom": (_parse_float, 0.88, "AOM carrier fringe visibility"),
    "fringe_scale": (_parse_float, 0.97, "sideband interference contrast"),
    "eta_max": (_parse_float, 0.85, "AOM peak diffraction efficiency"),
    "drive_gain_k": (_parse_float, DRIVE_GAIN_DEFAULT, "rf angle per sqrt(W)"),
    "homodyne_efficiency": (_parse_float, 0.95, "homodyne detection efficiency"),
    "route": (_parse_str, "spectral", "spectral | homodyne"),
    "threshold": (_parse_float, 0.1, "distinguishability threshold"),
    "mu": (_parse_complex, complex(1.0), "photon amplitude, lower sideband"),
    "nu": (_parse_complex, complex(0.0), "photon amplitude, upper sideband"),
    "y_clip": (_parse_optional_float, None, "clip emitted scan values, or none"),
    "out": (_parse_str, None, "output CSV path"),
}


@dataclass
class RunConfig:
    values: dict

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None


def _check_range(key: str, value, low=None, high=None, low_open=False):
    if low is not None:
        ok = value > low if low_open else value >= low
        if not ok:
            bound = f"> {low}" if low_open else f">= {low}"
            raise ConfigError(f"{key}: must be {bound}, got {value}")
    if high is not None and value > high:
        raise ConfigError(f"{key}: must be within [{low}, {high}], got {value}")


def _check_grid(values: dict, prefix: str):
    start, stop, count = (values[f"{prefix}_start"], values[f"{prefix}_stop"],
                          values[f"{prefix}_count"])
    if count < 2:
        raise ConfigError(f"{prefix}_count: must be >= 2, got {count}")
    if not start < stop:
        raise ConfigError(f"{prefix}_start/{prefix}_stop: need start < stop, "
                          f"got {start} >= {stop}")


def _validate(values: dict) -> RunConfig:
    experiment = values["experiment"]
    if experiment is None:
        raise ConfigError("missing required key 'experiment'")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown experiment {experiment!r}, "
                          "expected one of " + ", ".join(EXPERIMENTS))
    if values["input_kind"] not in ("pm", "lsb", "usb", "am"):
        raise ConfigError(f"input_kind: unknown kind {values['input_kind']!r}")
    if values["route"] not in ("spectral", "homodyne"):
        raise ConfigError(f"route: unknown route {values['route']!r}")

    _check_range("beta", values["beta"], low=0.0, low_open=True)
    _check_range("theta", values["theta"], low=0.0, high=math.pi / 2)
    if not math.isfinite(values["phi"]):
        raise ConfigError("phi: must be finite")
    for prefix in ("phi", "drive", "lo", "scan"):
        _check_grid(values, prefix)
    _check_range("drive_start", values["drive_start"], low=0.0)
    _check_range("fsr", values["fsr"], low=0.0, low_open=True)
    if not 0.0 < values["linewidth"] < values["fsr"]:
        raise ConfigError("linewidth: need 0 < linewidth < fsr")
    _check_range("mismatch_fraction", values["mismatch_fraction"], low=0.0, high=1.0)
    _check_range("sideband_hz", values["sideband_hz"], low=0.0, low_open=True)
    _check_range("carrier_power", values["carrier_power"], low=0.0)
    _check_range("attenuation", values["attenuation"], low=1.0)
    for key in ("visibility_umzi", "visibility_aom", "fringe_scale", "eta_max"):
        _check_range(key, values[key], low=0.0, high=1.0)
    _check_range("drive_gain_k", values["drive_gain_k"], low=0.0, low_open=True)
    if not 0.0 < values["homodyne_efficiency"] <= 1.0:
        raise ConfigError("homodyne_efficiency: must lie in (0, 1]")
    _check_range("threshold", values["threshold"], low=0.0)
    if abs(values["mu"]) == 0.0 and abs(values["nu"]) == 0.0:
        raise ConfigError("mu/nu: photon amplitudes cannot both be zero")
    return RunConfig(values)


def parse_config(text: str | None, overrides: dict | None = None) -> RunConfig:
    """Build a validated run configuration.

    `text` holds key=value lines; `overrides` maps keys to raw string
    values and wins over the file. Unknown keys are rejected (with the
    offending line number when they come from the file).
    """
    raw: dict = {}
    if text is not None:
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key not in _KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            raw[key] = value.strip()
    for key, value in (overrides or {}).items():
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}")
        raw[key] = value

    values = {key: default for key, (_, default, _) in _KEYS.items()}
    for key, text_value in raw.items():
        parser, _, _ = _KEYS[key]
        try:
            values[key] = parser(text_value)
        except ConfigError as exc:
            raise ConfigError(f"{key}: {exc}") from None
    return _validate(values)


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])


def _check_ratio_trace(trace: Trace) -> None:
    if np.min(trace.y) < -RATIO_SLACK or np.max(trace.y) > 1.0 + RATIO_SLACK:
        raise InvariantViolation(
            f"ratio outside [0, 1]: min {np.min(trace.y)}, max {np.max(trace.y)}"
        )


def _check_db_trace(trace: Trace) -> None:
    if np.min(trace.y) < -RATIO_SLACK:
        raise InvariantViolation(f"variance below the vacuum floor: min {np.min(trace.y)} dB")


def _imperfections(config: RunConfig) -> ImperfectionModel:
    return ImperfectionModel(
        visibility_umzi=config.visibility_umzi,
        visibility_aom=config.visibility_aom,
        fringe_scale=config.fringe_scale,
        eta_max=config.eta_max,
        drive_gain_k=config.drive_gain_k,
        homodyne_efficiency=config.homodyne_efficiency,
    )


def _grid(config: RunConfig, prefix: str) -> np.ndarray:
    return np.linspace(config.values[f"{prefix}_start"],
                       config.values[f"{prefix}_stop"],
                       config.values[f"{prefix}_count"])


def _out_path(config: RunConfig) -> str:
    if config.out is not None:
        return config.out
    return config.experiment.replace("-", "_") + ".csv"


def _print_common(config: RunConfig, path: str | None) -> None:
    print(f"experiment: {config.experiment}")
    if path is not None:
        print(f"csv: {path}")
    print("floats: shortest round-trip decimal")


def run(config: RunConfig) -> int:
    """Execute the configured experiment; writes files, prints a summary."""
    basket = basket_standard()
    model = _imperfections(config)
    kind = InputKind(config.input_kind)

    gate = analyser_unitary(config.theta, config.phi, basket)
    defect = gate.unitarity_defect()
    if defect > UNITARITY_GATE:
        raise InvariantViolation(f"analyser unitarity defect {defect} above gate")

    experiment = config.experiment
    if experiment == "sweep-phi":
        trace = sweep_phi(kind, _grid(config, "phi"), model, route=config.route)
        _check_ratio_trace(trace)
        path = _out_path(config)
        _write_csv(path, ["phi_rad", "ratio"], [trace.x, trace.y])
        _print_common(config, path)
        print(f"input: {kind.value}  route: {config.route}")
        print(f"samples: {trace.x.size}")
        print(f"fringe_visibility: {_fmt(fringe_visibility(trace))}")
        return 0

    if experiment == "sweep-drive":
        trace = sweep_drive(kind, _grid(config, "drive"), model, route=config.route)
        _check_ratio_trace(trace)
        path = _out_path(config)
        _write_csv(path, ["p_drive_w", "ratio"], [trace.x, trace.y])
        _print_common(config, path)
        print(f"input: {kind.value}  route: {config.route}")
        print(f"samples: {trace.x.size}")
        print(f"ratio_min: {_fmt(np.min(trace.y))}")
        print(f"ratio_max: {_fmt(np.max(trace.y))}")
        return 0

    if experiment == "osa-scan":
        state = with_carrier(make_input(kind, config.beta, basket),
                             math.sqrt(config.carrier_power))
        out_state = apply_unitary(gate, state)
        params = OsaParams(config.fsr, config.linewidth, config.mismatch_fraction)
        trace = osa_scan(out_state, 0.0, Port.OUT1, params,
                         config.scan_start, config.scan_stop, config.scan_count,
                         sideband_spacing_hz=config.sideband_hz)
        y = trace.y
        if config.y_clip is not None:
            y = np.minimum(y, config.y_clip)
            trace = Trace(trace.x, y, trace.x_label, trace.y_label, trace.meta)
        path = _out_path(config)
        _write_csv(path, ["frequency_hz", "power_arb"], [trace.x, trace.y])
        _print_common(config, path)
        print(f"input: {kind.value}  theta_rad: {_fmt(config.theta)}  "
              f"phi_rad: {_fmt(config.phi)}")
        peaks = spectral_peaks(trace)
        print(f"peaks_hz: {' '.join(_fmt(p) for p in peaks)}")
        return 0

    if experiment == "homodyne-scan":
        state = make_input(kind, config.beta, basket)
        out_state = apply_unitary(gate, state)
        params = HomodyneParams(efficiency=config.homodyne_efficiency)
        trace = homodyne_scan(out_state, Port.OUT1, params, _grid(config, "lo"))
        _check_db_trace(trace)
        path = _out_path(config)
        _write_csv(path, ["lo_phase_rad", "variance_db"], [trace.x, trace.y])
        _print_common(config, path)
        print(f"input: {kind.value}  theta_rad: {_fmt(config.theta)}  "
              f"phi_rad: {_fmt(config.phi)}")
        print(f"variance_db_min: {_fmt(np.min(trace.y))}")
        print(f"variance_db_max: {_fmt(np.max(trace.y))}")
        return 0

    if experiment == "single-photon":
        psi = sideband_photon(config.mu, config.nu, basket)
        out = single_photon_transform(psi, config.theta, config.phi)
        amp_out1 = out.amp_at(ModeId(Port.OUT1, +1))
        amp_out2 = out.amp_at(ModeId(Port.OUT2, -1))
        path = None
        if config.out is not None:
            path = config.out
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["mode", "amp_re", "amp_im"])
                writer.writerow(["out1:+1", _fmt(amp_out1.real), _fmt(amp_out1.imag)])
                writer.writerow(["out2:-1", _fmt(amp_out2.real), _fmt(amp_out2.imag)])
        _print_common(config, path)
        print(f"amp_out1_plus: {amp_out1!r}")
        print(f"amp_out2_minus: {amp_out2!r}")
        print(f"norm: {_fmt(out.norm_sq())}")
        return 0

    if experiment == "distinguish":
        report = distinguish_inputs(_grid(config, "drive"), model,
                                    threshold=config.threshold)
        for trace in report.traces.values():
            _check_ratio_trace(trace)
        path = _out_path(config)
        traces = report.traces
        _write_csv(path, ["p_drive_w", "ratio_pm", "ratio_lsb", "ratio_usb"],
                   [traces["pm"].x, traces["pm"].y, traces["lsb"].y,
                    traces["usb"].y])
        _print_common(config, path)
        for (first, second), distance in sorted(report.distances.items()):
            print(f"distance_{first}_{second}: {_fmt(distance)}")
        print(f"threshold: {_fmt(report.threshold)}")
        print(f"distinguishable: {str(report.distinguishable).lower()}")
        return 0

    raise ConfigError(f"experiment: unknown experiment {experiment!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="sidebandsim",
        description="Sideband-mode analyser simulator: sweeps, spectra, "
                    "homodyne scans and single-photon basis rotations.",
    )
    parser.add_argument("experiment", nargs="?", default=None,
                        help="one of " + ", ".join(EXPERIMENTS))
    parser.add_argument("--config", default=None, help="key=value config file")
    for key, (_, _, help_text) in _KEYS.items():
        if key in ("experiment",):
            continue
        parser.add_argument(f"--{key}", default=None, metavar="VALUE",
                            help=help_text)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        text = None
        if args.config is not None:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from None
        overrides = {}
        if args.experiment is not None:
            overrides["experiment"] = args.experiment
        for key in _KEYS:
            if key == "experiment":
                continue
            value = getattr(args, key)
            if value is not None:
                overrides[key] = value
        config = parse_config(text, overrides)
        return run(config)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
