"""End-to-end evaluation of a (driven) gate: purity loss, fidelity, rates."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import analytics
from .bath import OhmicBath
from .core import NO_DRIVE, Axis, DriveSpec, Interaction, SystemSpec, _expm_hermitian, build_hamiltonian, pauli
from .floquet import coherent_floquet_propagator
from .metrics import GateReport, gate_fidelity, gate_purity, purity_decay_rate
from .redfield import Numerics, build_generator, dissipative_propagator, working_basis


def default_duration(system: SystemSpec) -> float:
    """Interaction time pi/(4J) for a coupled pair, one Larmor period otherwise."""
    if system.n_qubits == 2 and system.interaction != Interaction.NONE:
        return analytics.interaction_time(system.j_coupling)
    return 2 * math.pi / max(abs(system.delta[0]), 1e-300)


def ising_gate(phi: float) -> np.ndarray:
    """exp(-i phi sx_1 sx_2)."""
    return _expm_hermitian(pauli("X", 0, 2) @ pauli("X", 1, 2), phi)


def ideal_gate(system: SystemSpec, drive: DriveSpec, duration: float, basis=None) -> Optional[np.ndarray]:
    """Target unitary for the fidelity.

    A driven exchange pair targets the Ising gate exp(-i J t sx sx), which
    the drive realizes at its working points. Undriven systems target their
    own coherent evolution. A driven single qubit targets its exact coherent
    propagator (returns None when ``duration`` is off the Floquet grid).
    """
    if system.n_qubits == 2 and system.interaction == Interaction.HEISENBERG and drive.is_driven:
        return ising_gate(system.j_coupling * duration)
    if not drive.is_driven:
        return _expm_hermitian(build_hamiltonian(system), duration)
    if basis is None:
        return None
    try:
        return coherent_floquet_propagator(basis, duration)
    except ValueError:
        return None


def analytic_rate(system: SystemSpec, drive: DriveSpec, bath: OhmicBath) -> float:
    """Closed-form purity decay rate, NaN where none is available."""
    if system.n_qubits == 1:
        if system.epsilon[0] != 0 or system.delta[0] <= 0:
            return math.nan
        return analytics.gamma_single_qubit(system.delta[0], bath, drive)
    if any(system.delta) or any(system.epsilon):
        return math.nan
    if drive.is_driven and not (drive.axis == Axis.X and drive.target_qubit == 0):
        return math.nan
    if system.interaction == Interaction.ISING_XX:
        return analytics.gamma_ising(bath)
    if system.interaction == Interaction.HEISENBERG:
        return analytics.gamma_heisenberg_driven(system.j_coupling, bath, drive)
    return math.nan


def simulate_gate(
    system: SystemSpec,
    drive: DriveSpec = NO_DRIVE,
    bath: OhmicBath = OhmicBath(),
    numerics: Numerics = Numerics(),
    duration: Optional[float] = None,
    ideal: Optional[np.ndarray] = None,
) -> GateReport:
    """Run the Floquet-Redfield pipeline for one parameter point."""
    t = default_duration(system) if duration is None else duration
    basis = working_basis(system, drive, numerics)
    gen = build_generator(system, drive, bath, numerics, basis=basis)
    w = dissipative_propagator(gen, t)
    loss = 1.0 - gate_purity(w)
    target = ideal if ideal is not None else ideal_gate(system, drive, t, basis)
    defect = math.nan
    if target is not None:
        try:
            defect = 1.0 - gate_fidelity(w.to_lab(), target)
        except ValueError:
            pass
    return GateReport(max(loss, 0.0), defect, purity_decay_rate(gen.q_ops), t)
