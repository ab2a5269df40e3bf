"""Named experiment presets.

Energies are in units of the tunnel splitting (single qubit) or of the
exchange coupling J (qubit pair). The two-qubit presets use
alpha = 0.01/(2 pi), i.e. 2 pi alpha = 0.01.
"""
from __future__ import annotations

import math

from ..analytics import first_working_point
from ..bath import OhmicBath
from ..core import SystemSpec
from .config import DriveTemplate, ExperimentConfig, SweepSpec

ALPHA_PAIR = 0.01 / (2 * math.pi)
OMEGA_C_PAIR = 1000.0

# physical units for the quantum-dot preset
K_B_EV = 8.617333262e-5  # eV / K
HBAR_EV_S = 6.582119569e-16  # eV s
J_QD_EV = 1e-4  # exchange coupling 0.1 meV
T_QD_K = 0.010
A_QD_EV = 1e-2


def quantum_dot_units() -> dict:
    """Dimensionless quantum-dot parameters and the unit conversions behind them."""
    k = round(2 * math.pi * 100 / 8)
    return {
        "temperature": K_B_EV * T_QD_K / J_QD_EV,
        "amplitude": A_QD_EV / J_QD_EV,
        # 2 pi x 100 J, rounded to the nearest 8kJ so that t_J holds whole periods
        "omega": 8.0 * k,
        "time_unit_s": HBAR_EV_S / J_QD_EV,
        "gate_time_s": math.pi / 4 * HBAR_EV_S / J_QD_EV,
    }


def _pair(interaction="heisenberg") -> SystemSpec:
    return SystemSpec.pair(1.0, interaction)


def _fig2() -> ExperimentConfig:
    return ExperimentConfig(
        "dd_frequency_sweep",
        system=SystemSpec.single(1.0),
        drive=DriveTemplate("harmonic", amplitude_ratio=2.4, omega=10.0, axis="z"),
        bath=OhmicBath(0.01, 500.0, 10.0),
        sweep=SweepSpec("omega", 1.0, 1e4, 41, "log"),
        output_path="fig2_eta_dd.csv",
    )


def _fig3() -> ExperimentConfig:
    return ExperimentConfig(
        "ising_vs_heisenberg_temperature",
        system=_pair(),
        bath=OhmicBath(ALPHA_PAIR, OMEGA_C_PAIR, 0.01),
        sweep=SweepSpec("temperature", 1e-3, 10.0, 41, "log"),
        output_path="fig3_ising_vs_heisenberg.csv",
    )


def _fig4() -> ExperimentConfig:
    return ExperimentConfig(
        "amplitude_sweep",
        system=_pair(),
        drive=DriveTemplate("harmonic", amplitude_ratio=0.0, omega=32.0),
        bath=OhmicBath(ALPHA_PAIR, OMEGA_C_PAIR, 0.01),
        sweep=SweepSpec("amplitude_ratio", 0.0, 7.0, 100),
        output_path="fig4_amplitude.csv",
    )


def _fig5() -> ExperimentConfig:
    return ExperimentConfig(
        "fidelity_sweep",
        system=_pair(),
        drive=DriveTemplate("harmonic", amplitude_ratio=first_working_point(), omega=32.0),
        bath=OhmicBath(ALPHA_PAIR, OMEGA_C_PAIR, 0.01),
        sweep=SweepSpec("omega", 8.0, 1024.0, 15, "log"),
        output_path="fig5_frequency.csv",
    )


def _fig6() -> ExperimentConfig:
    return ExperimentConfig(
        "fidelity_sweep",
        system=_pair(),
        drive=DriveTemplate("harmonic", amplitude_ratio=first_working_point(), omega=32.0),
        bath=OhmicBath(ALPHA_PAIR, OMEGA_C_PAIR, 0.01),
        sweep=SweepSpec("temperature", 1e-3, 1.0, 31, "log"),
        output_path="fig6_temperature.csv",
    )


def _quantum_dot() -> ExperimentConfig:
    u = quantum_dot_units()
    return ExperimentConfig(
        "single_point",
        system=_pair(),
        drive=DriveTemplate("harmonic", amplitude=u["amplitude"], omega=u["omega"]),
        bath=OhmicBath(ALPHA_PAIR, OMEGA_C_PAIR, u["temperature"]),
        output_path="quantum_dot.csv",
    )


PRESETS = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "quantum_dot": _quantum_dot,
}


def preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
