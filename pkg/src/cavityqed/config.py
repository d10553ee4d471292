"""Flat ``key = value unit`` configuration files.

One assignment per line, ``#`` starts a comment.  Physical quantities must
carry a unit from the table below; dimensionless keys must not.  Frequencies
given in Hz/kHz/MHz/GHz are converted to rad/s (times 2 pi).

Keys, kinds and defaults (see ``KEYS``)::

    omega            angular frequency   2 pi * 51.1 GHz   cavity mode
    omega_eg         angular frequency   2 pi * 51.1 GHz   e-g transition
    g0               angular frequency   2 pi * 47 kHz     coupling (Omega = 2 g0)
    delta            angular frequency   0                 detuning omega - omega_eg
    q_factor         dimensionless       omega * 0.13 s    quality factor
    kappa            rate                omega / q_factor  photon decay rate
    gamma            rate                1/(30 ms)         non-resonant atomic decay
    waist            length              6 mm              mode waist w
    l_cav            length              sqrt(pi) * waist  dispersive interaction length
    velocity         velocity            500 m/s           atomic velocity v
    dipole           dipole moment       1.506e-26 C*m     e-g dipole element d
    mode_volume      volume              7.6e-7 m^3        mode volume V
    t2               time                40 us             Rabi contrast decay time
    p1               dimensionless       0.05              thermal one-photon probability
    epsilon_per_photon angle             pi/2 rad          QND dispersive phase per photon
    r2_phase         angle               calibrated        second Ramsey zone phase (QND)
    probe_interval   time                10 ms             QND probe spacing
    dark_count_prob  dimensionless       0                 P(read e | no photon)
    detection_efficiency dimensionless   1                 P(read e | photon)
    duration         time                2 s               QND trajectory length
    alpha            dimensionless       0.5               injected field amplitude
    cnot_phase       angle               0 rad             first CNOT zone phase
    n_max            integer             15                Fock cutoff
    seed             integer             0                 master RNG seed
    trajectories     integer             1000              ensemble size / shots
    record_trajectories integer          1                 QND trajectories written out
    scan_start       any unit            per experiment    scan lower bound
    scan_stop        any unit            per experiment    scan upper bound
    scan_points      integer             per experiment    scan size
    ideal            boolean             false             suppress stochastic layers
"""
from __future__ import annotations

import math
import re
from dataclasses import replace
from pathlib import Path

from .decoherence import BathParams, ProbeConfig
from .dynamics import CavityParams, kappa_from_Q
from .errors import CavityQEDError, ConfigError
from .experiments import ExperimentConfig, ScanSpec

TWO_PI = 2 * math.pi

UNITS = {
    "angular_frequency": {"rad/s": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3,
                          "MHz": TWO_PI * 1e6, "GHz": TWO_PI * 1e9},
    "rate": {"1/s": 1.0, "s^-1": 1.0, "rad/s": 1.0},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6},
    "velocity": {"m/s": 1.0},
    "dipole": {"C*m": 1.0},
    "volume": {"m^3": 1.0, "mm^3": 1e-9},
    "angle": {"rad": 1.0, "deg": math.pi / 180},
}

# key -> kind; kinds outside UNITS are parsed without a unit
KEYS = {
    "omega": "angular_frequency",
    "omega_eg": "angular_frequency",
    "g0": "angular_frequency",
    "delta": "angular_frequency",
    "q_factor": "positive",
    "kappa": "rate",
    "gamma": "rate",
    "waist": "length",
    "l_cav": "length",
    "velocity": "velocity",
    "dipole": "dipole",
    "mode_volume": "volume",
    "t2": "time",
    "p1": "probability",
    "epsilon_per_photon": "angle",
    "r2_phase": "angle",
    "probe_interval": "time",
    "dark_count_prob": "probability",
    "detection_efficiency": "probability",
    "duration": "time",
    "alpha": "real",
    "cnot_phase": "angle",
    "n_max": "integer",
    "seed": "integer",
    "trajectories": "integer",
    "record_trajectories": "integer",
    "scan_start": "any",
    "scan_stop": "any",
    "scan_points": "integer",
    "ideal": "boolean",
}

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


def _parse_value(key: str, text: str, lineno: int):
    kind = KEYS[key]
    where = f"line {lineno}: {key}"
    if kind == "boolean":
        low = text.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(f"{where}: expected true/false, got {text!r}")
    parts = text.split()
    if not parts:
        raise ConfigError(f"{where}: missing value")
    if kind == "integer":
        if len(parts) != 1:
            raise ConfigError(f"{where}: integers take no unit")
        try:
            value = int(parts[0])
        except ValueError:
            raise ConfigError(f"{where}: not an integer: {parts[0]!r}") from None
        if value < 0:
            raise ConfigError(f"{where}: must be non-negative, got {value}")
        return value
    try:
        number = float(parts[0])
    except ValueError:
        raise ConfigError(f"{where}: not a number: {parts[0]!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"{where}: value must be finite")
    unit = " ".join(parts[1:])
    if kind == "any":
        if not unit:
            raise ConfigError(f"{where}: missing unit")
        for unit_kind, table in UNITS.items():
            if unit in table and unit_kind != "rate":
                return number * table[unit], unit_kind
        raise ConfigError(f"{where}: unknown unit {unit!r}")
    if kind in UNITS:
        if not unit:
            raise ConfigError(f"{where}: missing unit (one of {', '.join(UNITS[kind])})")
        if unit not in UNITS[kind]:
            raise ConfigError(f"{where}: unit {unit!r} not valid here (one of {', '.join(UNITS[kind])})")
        return number * UNITS[kind][unit]
    if unit:
        raise ConfigError(f"{where}: dimensionless value takes no unit, got {unit!r}")
    if kind == "positive" and not number > 0:
        raise ConfigError(f"{where}: must be positive, got {number}")
    if kind == "probability" and not 0.0 <= number <= 1.0:
        raise ConfigError(f"{where}: must lie in [0, 1], got {number}")
    return number


def parse_config(text: str) -> dict:
    """Parse config text into a ``{key: SI value}`` dict."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = m.groups()
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, value, lineno)
    return values


def build_config(values: dict) -> ExperimentConfig:
    """Resolve parsed values against the defaults."""
    try:
        return _build(values)
    except ConfigError:
        raise
    except (CavityQEDError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _build(values: dict) -> ExperimentConfig:
    cav = CavityParams()
    changes = {}
    for key, attr in (("omega", "omega"), ("omega_eg", "omega_eg"), ("g0", "g0"), ("delta", "delta"),
                      ("gamma", "gamma"), ("waist", "w"), ("velocity", "v"), ("dipole", "d"),
                      ("mode_volume", "V"), ("l_cav", "l_cav")):
        if key in values:
            changes[attr] = values[key]
    omega = changes.get("omega", cav.omega)
    if "q_factor" in values:
        changes["Q"] = values["q_factor"]
        q_kappa = kappa_from_Q(omega, values["q_factor"])
        if "kappa" in values and not math.isclose(values["kappa"], q_kappa, rel_tol=1e-9):
            raise ConfigError(f"kappa={values['kappa']} inconsistent with omega/q_factor={q_kappa}")
        changes["kappa"] = q_kappa
    elif "kappa" in values:
        if not values["kappa"] > 0:
            raise ConfigError("kappa must be positive")
        changes["kappa"] = values["kappa"]
        changes["Q"] = omega / values["kappa"]
    else:
        # keep the default photon lifetime when only omega moves
        changes["Q"] = omega * 0.13
        changes["kappa"] = None
    if "waist" in values and "l_cav" not in values:
        changes["l_cav"] = None
    cavity = replace(cav, **changes) if changes else cav

    bath = BathParams(kappa=cavity.kappa, p1=values.get("p1", 0.05))
    probe_kwargs = {k: values[k] for k in ("epsilon_per_photon", "r2_phase", "probe_interval",
                                           "dark_count_prob", "detection_efficiency") if k in values}
    probe = ProbeConfig(**probe_kwargs)

    scan = None
    scan_keys = [k for k in ("scan_start", "scan_stop", "scan_points") if k in values]
    if scan_keys:
        if len(scan_keys) != 3:
            raise ConfigError("scan_start, scan_stop and scan_points must be given together")
        (start, kind_a), (stop, kind_b) = values["scan_start"], values["scan_stop"]
        if kind_a != kind_b:
            raise ConfigError(f"scan bounds have different dimensions ({kind_a} vs {kind_b})")
        scan = ScanSpec(kind_a, start, stop, values["scan_points"])

    kwargs = {}
    for key, attr in (("seed", "seed"), ("trajectories", "trajectories"), ("n_max", "n_max"),
                      ("t2", "T2"), ("alpha", "alpha"), ("duration", "duration"), ("ideal", "ideal"),
                      ("record_trajectories", "record_trajectories"), ("cnot_phase", "cnot_phase")):
        if key in values:
            kwargs[attr] = values[key]
    if kwargs.get("n_max", 15) < 1:
        raise ConfigError("n_max must be >= 1")
    return ExperimentConfig(cavity=cavity, bath=bath, probe=probe, scan=scan, **kwargs)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {str(path)!r}: {exc.strerror or exc}") from exc
    try:
        return build_config(parse_config(text))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
