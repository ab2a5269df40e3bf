"""Experiment configuration: YAML schema, strict loading, grid construction.

Schema (all sections except ``experiment`` are optional and fall back to the
library defaults)::

    experiment: amplitude_sweep       # see EXPERIMENTS
    system:   {n_qubits, delta, epsilon, j_coupling, interaction}
    drive:    {waveform, amplitude | amplitude_ratio, omega, target_qubit, axis}
    bath:     {alpha, omega_c, temperature}
    sweep:    {axis, min, max, points, scale}   # scale: linear | log
    numerics: {steps_per_period, n_samples, k_max, rwa, secular_tol}
    duration: null                    # default: pi/4J for pairs, 2 pi/delta otherwise
    output_path: results.csv

Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import yaml

from ..bath import OhmicBath
from ..core import DriveSpec, SystemSpec, Waveform
from ..redfield import Numerics

EXPERIMENTS = {
    "dd_frequency_sweep": ("omega",),
    "ising_vs_heisenberg_temperature": ("temperature",),
    "amplitude_sweep": ("amplitude_ratio",),
    "driven_frequency_sweep": ("omega",),
    "fidelity_sweep": ("omega", "amplitude_ratio", "temperature"),
    "single_point": (),
}

SCALES = ("linear", "log")
PERIOD_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    min: float
    max: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class DriveTemplate:
    """Drive with either a fixed amplitude or a fixed ratio A/omega."""

    waveform: str = "none"
    amplitude: Optional[float] = None
    amplitude_ratio: Optional[float] = None
    omega: float = 1.0
    target_qubit: int = 0
    axis: str = "x"

    def build(self, omega: Optional[float] = None, ratio: Optional[float] = None) -> DriveSpec:
        w = self.omega if omega is None else omega
        r = self.amplitude_ratio if ratio is None else ratio
        amp = r * w if r is not None else (self.amplitude or 0.0)
        return DriveSpec(Waveform(self.waveform), amp, w, self.target_qubit, self.axis)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    system: SystemSpec = field(default_factory=SystemSpec)
    drive: DriveTemplate = field(default_factory=DriveTemplate)
    bath: OhmicBath = field(default_factory=OhmicBath)
    sweep: Optional[SweepSpec] = None
    numerics: Numerics = field(default_factory=Numerics)
    duration: Optional[float] = None
    output_path: str = "results.csv"

    def to_dict(self) -> dict:
        """Plain, YAML/JSON-serializable form that :func:`parse_config` accepts."""
        sys_ = self.system
        out = {
            "experiment": self.experiment,
            "system": {
                "n_qubits": sys_.n_qubits,
                "delta": list(sys_.delta),
                "epsilon": list(sys_.epsilon),
                "j_coupling": sys_.j_coupling,
                "interaction": sys_.interaction.value,
            },
            "drive": {k: v for k, v in dataclasses.asdict(self.drive).items() if v is not None},
            "bath": dataclasses.asdict(self.bath),
            "numerics": dataclasses.asdict(self.numerics),
            "duration": self.duration,
            "output_path": self.output_path,
        }
        if self.sweep is not None:
            out["sweep"] = dataclasses.asdict(self.sweep)
        return out

    def digest(self) -> str:
        """SHA-256 of the canonical config, ignoring where the output goes."""
        d = self.to_dict()
        d.pop("output_path")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def grid(self) -> list[float]:
        if self.sweep is None:
            return []
        pts = [float(v) for v in self.sweep.grid()]
        if self.sweep.axis == "omega" and self._pair_driven():
            # t_J must span a whole number of periods: omega = 8 k J
            unit = 8 * abs(self.system.j_coupling)
            snapped = []
            for v in pts:
                w = max(1, round(v / unit)) * unit
                if w not in snapped:
                    snapped.append(w)
            pts = snapped
        return pts

    def _pair_driven(self) -> bool:
        return (
            self.system.n_qubits == 2
            and self.system.j_coupling != 0
            and self.drive.waveform != "none"
            and self.duration is None
        )


def _take(section: Any, name: str, allowed: set[str]) -> dict:
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"'{name}' must be a mapping")
    extra = set(section) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in '{name}': {', '.join(sorted(map(str, extra)))}")
    return dict(section)


def _fields(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls)}


def parse_config(raw: Any) -> ExperimentConfig:
    top = _take(raw, "config", _fields(ExperimentConfig))
    exp = top.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {sorted(EXPERIMENTS)}, got {exp!r}")
    try:
        sys_raw = _take(top.get("system"), "system", _fields(SystemSpec))
        if sys_raw.get("n_qubits") == 2:
            sys_raw.setdefault("delta", (0.0, 0.0))
            sys_raw.setdefault("epsilon", (0.0, 0.0))
        system = SystemSpec(**sys_raw)
        drive_raw = _take(top.get("drive"), "drive", _fields(DriveTemplate))
        if drive_raw.get("amplitude") is not None and drive_raw.get("amplitude_ratio") is not None:
            raise ConfigError("give either drive.amplitude or drive.amplitude_ratio, not both")
        drive = DriveTemplate(**drive_raw)
        for key in ("amplitude", "amplitude_ratio"):
            v = getattr(drive, key)
            if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ConfigError(f"drive.{key} must be a non-negative number")
        bath = OhmicBath(**_take(top.get("bath"), "bath", _fields(OhmicBath)))
        numerics = Numerics(**_take(top.get("numerics"), "numerics", _fields(Numerics)))
        sweep_raw = top.get("sweep")
        sweep = None
        if sweep_raw is not None:
            sweep = SweepSpec(**_take(sweep_raw, "sweep", _fields(SweepSpec)))
        duration = top.get("duration")
        output_path = str(top.get("output_path", "results.csv"))
    except ConfigError:
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc

    cfg = ExperimentConfig(exp, system, drive, bath, sweep, numerics, duration, output_path)
    _check(cfg)
    return cfg


def _check(cfg: ExperimentConfig):
    axes = EXPERIMENTS[cfg.experiment]
    sw = cfg.sweep
    if not axes:
        if sw is not None:
            raise ConfigError("single_point takes no sweep section")
    else:
        if sw is None:
            raise ConfigError(f"{cfg.experiment} needs a sweep section")
        if sw.axis not in axes:
            raise ConfigError(f"{cfg.experiment} sweeps one of {axes}, got {sw.axis!r}")
        if sw.scale not in SCALES:
            raise ConfigError(f"sweep.scale must be one of {SCALES}")
        if not isinstance(sw.points, int) or sw.points < 2:
            raise ConfigError("sweep.points must be an integer >= 2")
        if not (math.isfinite(sw.min) and math.isfinite(sw.max)) or sw.min >= sw.max:
            raise ConfigError("sweep needs finite min < max")
        if sw.scale == "log" and sw.min <= 0:
            raise ConfigError("a log sweep needs min > 0")
        if sw.axis == "omega" and sw.min <= 0:
            raise ConfigError("omega must be positive")
        if sw.min < 0:
            raise ConfigError(f"{sw.axis} must be non-negative")

    if cfg.duration is not None:
        if not isinstance(cfg.duration, (int, float)) or not cfg.duration > 0:
            raise ConfigError("duration must be positive")

    d = cfg.drive
    if d.waveform not in {w.value for w in Waveform}:
        raise ConfigError(f"unknown drive waveform {d.waveform!r}")
    if d.target_qubit >= cfg.system.n_qubits:
        raise ConfigError("drive.target_qubit outside the system")
    if d.omega <= 0:
        raise ConfigError("drive.omega must be positive")

    exp = cfg.experiment
    if exp == "dd_frequency_sweep":
        if cfg.system.n_qubits != 1 or d.waveform != "harmonic" or d.axis != "z":
            raise ConfigError("dd_frequency_sweep needs one qubit with a harmonic z drive")
        if d.amplitude_ratio is None:
            raise ConfigError("dd_frequency_sweep needs drive.amplitude_ratio")
    elif exp == "ising_vs_heisenberg_temperature":
        if cfg.system.n_qubits != 2 or d.waveform != "none":
            raise ConfigError("ising_vs_heisenberg_temperature needs an undriven qubit pair")
        if cfg.system.j_coupling <= 0:
            raise ConfigError("ising_vs_heisenberg_temperature needs j_coupling > 0")
    elif exp in ("amplitude_sweep", "driven_frequency_sweep", "fidelity_sweep"):
        if d.waveform == "none":
            raise ConfigError(f"{exp} needs a drive")
        if sw.axis == "omega" and d.amplitude is not None:
            raise ConfigError("an omega sweep needs drive.amplitude_ratio")
    try:
        DriveSpec(Waveform(d.waveform), 0.0, d.omega, d.target_qubit, d.axis)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if cfg._pair_driven() and not (sw is not None and sw.axis == "omega"):
        k = d.omega / (8 * abs(cfg.system.j_coupling))
        if abs(k - round(k)) > PERIOD_TOL * max(k, 1) or round(k) < 1:
            raise ConfigError(
                f"omega = {d.omega} is not 8kJ: the gate time pi/4J must hold an integer number of periods"
            )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path} is not valid YAML: {exc}") from exc
    return parse_config(raw)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
