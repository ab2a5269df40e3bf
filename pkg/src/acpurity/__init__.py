"""Purity and fidelity of AC-driven one- and two-qubit gates in ohmic baths."""
from .bath import OhmicBath, noise_power, spectral_density
from .core import (
    NO_DRIVE,
    Axis,
    DriveSpec,
    Interaction,
    SystemSpec,
    Waveform,
    build_hamiltonian,
    drive_hamiltonian,
    matrix_exp,
    pauli,
    propagator,
)
from .floquet import FloquetBasis, FourierCoupling, floquet_decompose, fourier_coupling, monodromy
from .gate import analytic_rate, simulate_gate
from .metrics import (
    GateReport,
    ensemble_avg_1,
    ensemble_avg_2,
    gate_fidelity,
    gate_purity,
    haar_sample,
    purity,
    purity_decay_rate,
)
from .redfield import (
    DissipativeGenerator,
    DissipativePropagator,
    Numerics,
    build_generator,
    dissipative_propagator,
    evolve,
    p_operator,
    q_operator,
)

__version__ = "0.1.0"
